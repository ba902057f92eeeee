#include "halrates/oracle.hpp"

#include <cmath>

#include "halrates/bounds.hpp"
#include "halrates/kernels.hpp"
#include "halrates/rng.hpp"

namespace halrates {

BSeries b_zero() {
    return BSeries{
        "b_zero", [](std::uint64_t) { return 0.0; },
        ModulusFn::cauchy_modulus("b_zero.gamma", [](const BigRat&) { return BigInt(1); }),
        BigRat(0)};
}

BSeries b_geometric(const BigRat& scale, const BigRat& ratio) {
    if (scale < 0) throw DomainError("b_geometric: scale must be >= 0");
    if (!(ratio > 0 && ratio < 1)) throw DomainError("b_geometric: ratio must lie in (0,1)");
    if (scale == 0) return b_zero();
    const double s = scale.convert_to<double>();
    const double q = ratio.convert_to<double>();
    BigRat total = scale * ratio / (1 - ratio);
    // gamma(eps): least g >= 1 with the exact tail s*q^(g+1)/(1-q) <= eps.
    // Finite windows of the series then stay *strictly* below eps.
    BigRat sc = scale, rt = ratio;
    ModulusFn gamma =
        ModulusFn::cauchy_modulus("b_geometric.gamma", [sc, rt](const BigRat& eps) {
            BigRat tail = sc * rt * rt / (1 - rt); // tail after index 1
            BigInt g = 1;
            while (tail > eps) {
                tail *= rt;
                ++g;
                if (g > BigInt(1) << 24)
                    throw DomainError("b_geometric.gamma: modulus search exceeded 2^24");
            }
            return g;
        });
    return BSeries{"b_geometric(s=" + scale.str() + ",q=" + ratio.str() + ")",
                   [s, q](std::uint64_t n) { return s * std::pow(q, static_cast<double>(n)); },
                   std::move(gamma), std::move(total)};
}

BSeries b_eventually_zero(const BigRat& scale, std::uint64_t cutoff) {
    if (scale < 0) throw DomainError("b_eventually_zero: scale must be >= 0");
    if (scale == 0 || cutoff == 0) return b_zero();
    const double s = scale.convert_to<double>();
    BigInt g(cutoff);
    return BSeries{"b_eventually_zero(s=" + scale.str() + ",k=" + std::to_string(cutoff) + ")",
                   [s, cutoff](std::uint64_t n) { return n <= cutoff ? s : 0.0; },
                   ModulusFn::cauchy_modulus("b_eventually_zero.gamma",
                                             [g](const BigRat&) { return g; }),
                   scale * BigRat(BigInt(cutoff), 1)};
}

RecurrenceInstance RecurrenceInstance::make(Schedule lambda_seq, BSeries b_seq, double a1) {
    if (!(a1 >= 0.0) || !std::isfinite(a1))
        throw DomainError("RecurrenceInstance: a1 must be finite and >= 0");
    BigInt d = ceil_rat(rat_from_double(a1) + b_seq.total_bound);
    if (d < 1) d = 1;
    std::string id = lambda_seq.id() + "|" + b_seq.id + "|a1=" + std::to_string(a1);
    return RecurrenceInstance{std::move(id), std::move(lambda_seq), std::move(b_seq), a1,
                              std::move(d)};
}

std::vector<double> simulate_recurrence(const RecurrenceInstance& inst, std::uint64_t horizon) {
    if (horizon < 1) throw DomainError("simulate_recurrence: horizon must be >= 1");
    std::vector<double> a(horizon + 1, 0.0);
    a[1] = inst.a1;
    for (std::uint64_t n = 1; n < horizon; ++n) {
        double lam = inst.lambda_seq.lambda_at(n + 1);
        a[n + 1] = (1.0 - lam) * a[n] + inst.b_seq.term(n);
    }
    return a;
}

ProductBoundResult check_product_bound(const RecurrenceInstance& inst,
                                       const std::vector<double>& a, std::uint64_t n,
                                       std::uint64_t m, double tol) {
    if (n < 1 || m < 1) throw DomainError("check_product_bound: n and m must be >= 1");
    if (n + m >= a.size())
        throw DomainError("check_product_bound: n+m exceeds the simulated horizon");
    double prod = 1.0;
    for (std::uint64_t j = n; j < n + m; ++j) prod *= 1.0 - inst.lambda_seq.lambda_at(j + 1);
    double tail = kernels::sum_range(inst.b_seq.term, n, n + m - 1);
    double rhs = prod * a[n] + tail;
    double lhs = a[n + m];
    return {lhs <= rhs + tol * (1.0 + rhs), lhs, rhs};
}

VerificationReport check_h_bound(const RecurrenceInstance& inst, const ModulusFn& gamma,
                                 const ModulusFn& delta, const std::vector<BigRat>& eps_grid,
                                 std::uint64_t horizon) {
    std::vector<double> a = simulate_recurrence(inst, horizon);

    VerificationReport report;
    double bound = inst.a1 + inst.b_seq.total_bound.convert_to<double>();
    auto [amax, aarg] = kernels::max_range([&a](std::uint64_t i) { return a[i]; }, 1, horizon);
    if (amax <= bound + 1e-9)
        report.add("boundedness", CheckStatus::pass,
                   "max a = " + std::to_string(amax) + " <= a1 + total b");
    else
        report.add("boundedness", CheckStatus::fail,
                   "a_" + std::to_string(aarg) + " = " + std::to_string(amax) +
                       " exceeds a1 + total b = " + std::to_string(bound));

    for (const auto& eps : eps_grid) {
        const std::string name = "h_bound[eps=" + eps.str() + "]";
        BoundIndex h = h_liu(gamma, delta, inst.D, eps);
        if (h.value() > horizon) {
            report.add(name, CheckStatus::truncated,
                       "h = " + h.decimal() + " exceeds horizon " + std::to_string(horizon));
            continue;
        }
        std::uint64_t hu = h.as_u64();
        const double eps_d = eps.convert_to<double>();
        auto [mx, arg] = kernels::max_range([&a](std::uint64_t i) { return a[i]; }, hu, horizon);
        if (mx < eps_d)
            report.add(name, CheckStatus::pass,
                       "h = " + h.decimal() + ", max a on [h,horizon] = " + std::to_string(mx));
        else
            report.add(name, CheckStatus::fail,
                       "a_" + std::to_string(arg) + " = " + std::to_string(mx) +
                           " >= eps at or past certified h = " + h.decimal());
    }
    return report;
}

VerificationReport check_h_bound(const RecurrenceInstance& inst,
                                 const std::vector<BigRat>& eps_grid, std::uint64_t horizon) {
    return check_h_bound(inst, inst.b_seq.gamma, inst.lambda_seq.theta(), eps_grid, horizon);
}

Vec cesaro_oracle(const NonexpansiveOp& linear_op, const Vec& x, std::uint64_t n) {
    if (!linear_op.linear())
        throw PreconditionError("cesaro_oracle: operator must be linear (zero affine part)");
    if (x.size() != linear_op.dim()) throw ShapeError("cesaro_oracle: dimension mismatch");
    const std::size_t d = x.size();
    std::vector<kernels::CompensatedSum> acc(d);
    Vec p = x, next(d);
    for (std::uint64_t i = 0;; ++i) {
        for (std::size_t c = 0; c < d; ++c) acc[c].add(p[c]);
        if (i == n) break;
        linear_op.apply_into(p, next);
        std::swap(p, next);
    }
    Vec mean(d);
    const double scale = 1.0 / (static_cast<double>(n) + 1.0);
    for (std::size_t c = 0; c < d; ++c) mean[c] = acc[c].value() * scale;
    return mean;
}

RecurrenceInstance random_instance(std::uint64_t seed) {
    SmallRng rng(splitmix64(seed ^ 0xA02BDBF7BB3C0A7ull));
    Schedule sched = [&]() {
        switch (rng.next_u64() % 3) {
            case 0: {
                BigInt k = BigInt(1 + rng.next_u64() % 64); // c in [1/64, 1]
                return Schedule::constant(BigRat(k, 64));
            }
            case 1: return Schedule::harmonic();
            default: return Schedule::inverse_sqrt();
        }
    }();
    BSeries b = [&]() {
        BigRat scale(BigInt(rng.next_u64() % 17), 8); // [0, 2]
        if (rng.next_u64() % 2 == 0) {
            BigRat ratio(BigInt(1 + rng.next_u64() % 62), 64); // [1/64, 62/64]
            return scale == 0 ? b_zero() : b_geometric(scale, ratio);
        }
        return b_eventually_zero(scale, 1 + rng.next_u64() % 50);
    }();
    double a1 = static_cast<double>(rng.next_u64() % 33) / 8.0; // [0, 4]
    return RecurrenceInstance::make(std::move(sched), std::move(b), a1);
}

} // namespace halrates
