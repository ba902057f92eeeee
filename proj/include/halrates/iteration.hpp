#pragma once

// The two iteration schemes, run with exactly one operator application per
// step (the image T x_n is computed once and reused for both the residual at
// n and the update to x_{n+1}). A full run over horizon N costs N+1
// applications: one extra at the end for the final residual.
//
// Long runs do not fit in memory as stored series, so the engine keeps a
// stored prefix (scalars and iterates, separately capped) plus online
// summaries (max/final residual, norm suprema, eps-crossing trackers) that
// remain valid for the whole run. A caller-provided sink sees every step.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "halrates/big_nat.hpp"
#include "halrates/operators.hpp"
#include "halrates/report.hpp"
#include "halrates/schedule.hpp"

namespace halrates {

enum class IterationKind { halpern, km };

const char* to_string(IterationKind k);

struct StepView {
    std::uint64_t n;
    double lambda;   // lambda consumed producing x_n (0 for n = 0)
    double residual; // ||x_n - T x_n||
    double step_gap; // ||x_n - x_{n-1}|| (0 for n = 0)
    double norm_x;   // ||x_n||
    std::span<const double> x;
};

using StepSink = std::function<void(const StepView&)>;

struct CrossingStat {
    double eps;
    std::optional<std::uint64_t> first_below;      // least n with residual < eps
    std::optional<std::uint64_t> last_at_or_above; // greatest n with residual >= eps
};

struct RunOptions {
    std::uint64_t scalar_cap = 1'000'000; // steps whose scalar columns are stored
    std::uint64_t iterate_cap = 4096;     // steps whose full iterate vectors are stored
    std::vector<double> crossing_eps;     // residual thresholds tracked online
    StepSink sink;                        // observes every step, stored or not
};

struct Trajectory {
    IterationKind kind = IterationKind::halpern;
    std::string operator_id;
    std::string schedule_id;
    Norm norm = Norm::euclidean;
    std::uint64_t horizon = 0; // N: iterates x_0..x_N exist

    Vec start;                 // x_0 (the anchor, for Halpern)
    double anchor_norm = 0.0;       // ||x_0||
    double anchor_image_norm = 0.0; // ||T x_0||
    std::optional<double> declared_radius;

    // Stored prefix: indices 0 .. stored-1.
    std::vector<double> lambda, residual, step_gap, norm_x;
    std::uint64_t stored = 0;
    std::vector<Vec> iterates;

    // Online summaries over the full range [0, N].
    double final_residual = 0.0;
    double max_residual = 0.0;
    std::uint64_t argmax_residual = 0;
    double max_norm_x = 0.0;
    std::vector<CrossingStat> crossings;

    bool scalars_complete() const { return stored == horizon + 1; }
    bool iterates_complete() const { return iterates.size() == horizon + 1; }
};

// Halpern: x_0 = anchor, x_{n+1} = lambda_{n+1} * anchor + (1 - lambda_{n+1}) * T x_n.
Trajectory halpern_run(const NonexpansiveOp& op, const Vec& anchor, const Schedule& s,
                       std::uint64_t horizon, const RunOptions& opts = {});

// Krasnoselski-Mann: x_{n+1} = (1 - lambda_{n+1}) x_n + lambda_{n+1} * T x_n.
Trajectory km_run(const NonexpansiveOp& op, const Vec& x0, const Schedule& s,
                  std::uint64_t horizon, const RunOptions& opts = {});

// Least n with residual < eps. Uses the stored prefix when complete, else the
// online tracker for an eps registered in RunOptions::crossing_eps; throws
// PreconditionError if neither can answer.
std::optional<std::uint64_t> first_crossing(const Trajectory& t, double eps);

struct MEstimate {
    BigInt value;
    bool certified; // true: from a declared invariant ball; false: empirical sup
};

// Norm constant M >= sup_n ||x_n|| + ||x_0|| + ||T x_0||. Certified as
// max(1, ceil(3R)) when the operator declared an invariant ball of radius R
// containing the start; otherwise the (rounded-up) empirical supremum,
// flagged as such.
MEstimate estimate_M(const Trajectory& t);

// Check the inequality chain underlying the Halpern analysis on the stored
// prefix of a trajectory, to tolerance lhs <= rhs + tol*(1+rhs):
//   image_norm_bound: ||T x_n|| <= ||x_n|| + ||x_0|| + ||T x_0||
//   residual_vs_gap:  r_n <= g_{n+1} + lambda_{n+1} ||x_0 - T x_n||
//   gap_recurrence:   g_{n+1} <= (1-lambda_{n+1}) g_n + |lambda_{n+1}-lambda_n| ||x_0 - T x_{n-1}||
//   residual_vs_gap_M / gap_recurrence_M: same with the norm factors replaced by 2M.
// Requires a Halpern trajectory; checks run over the stored iterate prefix.
VerificationReport check_halpern_inequalities(const NonexpansiveOp& op, const Trajectory& t,
                                              const Schedule& s, const BigInt& M,
                                              double tol = 1e-9);

} // namespace halrates
