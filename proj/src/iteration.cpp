#include "halrates/iteration.hpp"

#include <cmath>
#include <omp.h>

#include "halrates/errors.hpp"

namespace halrates {

const char* to_string(IterationKind k) {
    switch (k) {
        case IterationKind::halpern: return "halpern";
        case IterationKind::km: return "km";
    }
    return "?";
}

namespace {

struct OnlineState {
    Trajectory* t;
    const RunOptions* opts;

    void record(std::uint64_t n, double lam, double res, double gap, const Vec& x, double nx) {
        if (!std::isfinite(res) || !std::isfinite(nx))
            throw NumericBlowupError("iteration left the finite range at step " +
                                     std::to_string(n));
        if (n < opts->scalar_cap) {
            t->lambda.push_back(lam);
            t->residual.push_back(res);
            t->step_gap.push_back(gap);
            t->norm_x.push_back(nx);
            t->stored = n + 1;
        }
        if (n < opts->iterate_cap) t->iterates.push_back(x);
        t->final_residual = res;
        if (n == 0 || res > t->max_residual) {
            t->max_residual = res;
            t->argmax_residual = n;
        }
        t->max_norm_x = std::max(t->max_norm_x, nx);
        for (auto& c : t->crossings) {
            if (res < c.eps) {
                if (!c.first_below) c.first_below = n;
            } else {
                c.last_at_or_above = n;
            }
        }
        if (opts->sink) opts->sink(StepView{n, lam, res, gap, nx, x});
    }
};

Trajectory run(IterationKind kind, const NonexpansiveOp& op, const Vec& start, const Schedule& s,
               std::uint64_t horizon, const RunOptions& opts) {
    if (start.size() != op.dim())
        throw ShapeError("start vector dimension " + std::to_string(start.size()) +
                         " does not match operator dimension " + std::to_string(op.dim()));
    if (horizon < 1) throw DomainError("run: horizon must be >= 1");

    Trajectory t;
    t.kind = kind;
    t.operator_id = op.id();
    t.schedule_id = s.id();
    t.norm = op.norm();
    t.horizon = horizon;
    t.start = start;
    t.declared_radius = op.invariant_radius();
    for (double e : opts.crossing_eps) t.crossings.push_back({e, std::nullopt, std::nullopt});

    const std::size_t d = op.dim();
    Vec x = start, tx(d), x_next(d);
    op.apply_into(x, tx); // application for step 0's residual
    t.anchor_norm = norm_of(start, t.norm);
    t.anchor_image_norm = norm_of(tx, t.norm);

    OnlineState rec{&t, &opts};
    rec.record(0, 0.0, dist_of(x, tx, t.norm), 0.0, x, t.anchor_norm);

    for (std::uint64_t n = 1; n <= horizon; ++n) {
        const double lam = s.lambda_at(n);
        if (kind == IterationKind::halpern) {
            for (std::size_t i = 0; i < d; ++i)
                x_next[i] = lam * start[i] + (1.0 - lam) * tx[i];
        } else {
            for (std::size_t i = 0; i < d; ++i)
                x_next[i] = (1.0 - lam) * x[i] + lam * tx[i];
        }
        const double gap = dist_of(x_next, x, t.norm);
        op.apply_into(x_next, tx); // the single application for this step
        const double res = dist_of(x_next, tx, t.norm);
        rec.record(n, lam, res, gap, x_next, norm_of(x_next, t.norm));
        std::swap(x, x_next);
    }
    return t;
}

} // namespace

Trajectory halpern_run(const NonexpansiveOp& op, const Vec& anchor, const Schedule& s,
                       std::uint64_t horizon, const RunOptions& opts) {
    return run(IterationKind::halpern, op, anchor, s, horizon, opts);
}

Trajectory km_run(const NonexpansiveOp& op, const Vec& x0, const Schedule& s,
                  std::uint64_t horizon, const RunOptions& opts) {
    return run(IterationKind::km, op, x0, s, horizon, opts);
}

std::optional<std::uint64_t> first_crossing(const Trajectory& t, double eps) {
    for (const auto& c : t.crossings)
        if (c.eps == eps) return c.first_below;
    if (t.scalars_complete()) {
        for (std::uint64_t n = 0; n < t.stored; ++n)
            if (t.residual[n] < eps) return n;
        return std::nullopt;
    }
    throw PreconditionError(
        "first_crossing: eps not tracked during the run and the scalar series is truncated");
}

MEstimate estimate_M(const Trajectory& t) {
    if (t.declared_radius) {
        const double r = *t.declared_radius;
        // The certificate needs the whole trajectory inside B(0, R), which
        // holds when the start is (images and convex combinations stay put).
        if (t.anchor_norm <= r) {
            BigInt m = ceil_rat(3 * rat_from_double(r));
            return {m < 1 ? BigInt(1) : m, true};
        }
    }
    BigInt m = ceil_double_upper(t.max_norm_x + t.anchor_norm + t.anchor_image_norm);
    return {m < 1 ? BigInt(1) : m, false};
}

VerificationReport check_halpern_inequalities(const NonexpansiveOp& op, const Trajectory& t,
                                              const Schedule& s, const BigInt& M, double tol) {
    if (t.kind != IterationKind::halpern)
        throw PreconditionError("check_halpern_inequalities: trajectory is not a Halpern run");
    if (t.iterates.size() < 2)
        throw PreconditionError("check_halpern_inequalities: need at least two stored iterates");
    if (M < 1) throw DomainError("check_halpern_inequalities: M must be >= 1");

    const std::size_t S = t.iterates.size(); // x_0 .. x_{S-1} available
    const std::size_t d = op.dim();
    const Norm nm = t.norm;
    const Vec& anchor = t.start;
    const double twoM = 2.0 * M.convert_to<double>();

    // One fresh application per stored iterate; independent, so parallel is
    // safe and the result per index is fixed.
    std::vector<Vec> tx(S, Vec(d));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(S); ++i)
        op.apply_into(t.iterates[static_cast<std::size_t>(i)], tx[static_cast<std::size_t>(i)]);

    struct Worst {
        double margin = -1.0; // lhs - (rhs + slack); pass while <= 0
        std::uint64_t n = 0;
        double lhs = 0, rhs = 0;
    };
    auto track = [](Worst& w, double lhs, double rhs, double slack, std::uint64_t n) {
        double m = lhs - (rhs + slack);
        if (m > w.margin) {
            w.margin = m;
            w.n = n;
            w.lhs = lhs;
            w.rhs = rhs;
        }
    };
    Worst w1, w2, w3, w4, w5;
    const double base = t.anchor_norm + t.anchor_image_norm;

    for (std::size_t n = 0; n < S; ++n) {
        // (1) ||T x_n|| <= ||x_n|| + ||x_0|| + ||T x_0||
        double lhs = norm_of(tx[n], nm);
        double rhs = norm_of(t.iterates[n], nm) + base;
        track(w1, lhs, rhs, tol * (1.0 + rhs), n);
    }
    for (std::size_t n = 0; n + 1 < S; ++n) {
        const double lam1 = s.lambda_at(n + 1);
        const double gap1 = dist_of(t.iterates[n + 1], t.iterates[n], nm);
        const double res = dist_of(t.iterates[n], tx[n], nm);
        const double anchor_to_txn = dist_of(anchor, tx[n], nm);
        // (2) r_n <= g_{n+1} + lambda_{n+1} ||x_0 - T x_n||
        double rhs2 = gap1 + lam1 * anchor_to_txn;
        track(w2, res, rhs2, tol * (1.0 + rhs2), n);
        // (4) r_n <= g_{n+1} + 2M lambda_{n+1}
        double rhs4 = gap1 + twoM * lam1;
        track(w4, res, rhs4, tol * (1.0 + rhs4), n);
        if (n >= 1) {
            const double lam0 = s.lambda_at(n);
            const double gap0 = dist_of(t.iterates[n], t.iterates[n - 1], nm);
            const double dl = std::abs(lam1 - lam0);
            const double anchor_to_prev = dist_of(anchor, tx[n - 1], nm);
            // (3) g_{n+1} <= (1-lambda_{n+1}) g_n + |dlambda| ||x_0 - T x_{n-1}||
            double rhs3 = (1.0 - lam1) * gap0 + dl * anchor_to_prev;
            track(w3, gap1, rhs3, tol * (1.0 + rhs3), n);
            // (5) g_{n+1} <= (1-lambda_{n+1}) g_n + 2M |dlambda|
            double rhs5 = (1.0 - lam1) * gap0 + twoM * dl;
            track(w5, gap1, rhs5, tol * (1.0 + rhs5), n);
        }
    }

    VerificationReport report;
    auto emit = [&](const char* name, const Worst& w, std::size_t count) {
        if (w.margin <= 0.0)
            report.add(name, CheckStatus::pass,
                       std::to_string(count) + " steps, worst margin " + std::to_string(w.margin));
        else
            report.add(name, CheckStatus::fail,
                       "violated at n = " + std::to_string(w.n) + ": lhs " + std::to_string(w.lhs) +
                           " vs rhs " + std::to_string(w.rhs));
    };
    emit("image_norm_bound", w1, S);
    emit("residual_vs_gap", w2, S - 1);
    emit("gap_recurrence", w3, S - 2);
    emit("residual_vs_gap_M", w4, S - 1);
    emit("gap_recurrence_M", w5, S - 2);
    return report;
}

} // namespace halrates
