#pragma once

// Brute-force falsification layer. The recurrence
//   a_{n+1} = (1 - lambda_{n+1}) a_n + b_n
// is simulated *at equality* — the extremal case admitted by the hypothesis
// a_{n+1} <= (1-lambda_{n+1}) a_n + b_n — so every h_liu certificate has to
// dominate the simulated sequence, and any a_n >= eps past the certified
// index is a hard failure. Also houses the Cesaro-average oracle for linear
// operators.

#include <cstdint>
#include <vector>

#include "halrates/big_nat.hpp"
#include "halrates/iteration.hpp"
#include "halrates/operators.hpp"
#include "halrates/report.hpp"
#include "halrates/schedule.hpp"
#include "halrates/verify.hpp"

namespace halrates {

// A nonnegative series (b_n)_{n>=1} with a certified Cauchy modulus for its
// partial sums and an upper bound on its total. Families below derive both
// in closed form (and the moduli are themselves checkable via the verify
// building blocks).
struct BSeries {
    std::string id;
    TermFn term; // b_n, n >= 1; nonnegative
    ModulusFn gamma;
    BigRat total_bound; // sum_{n>=1} b_n <= total_bound (exact rational)
};

BSeries b_zero();
// b_n = scale * ratio^n, scale >= 0, ratio in (0,1); exact rational params.
BSeries b_geometric(const BigRat& scale, const BigRat& ratio);
// b_n = scale for n <= cutoff, 0 afterwards.
BSeries b_eventually_zero(const BigRat& scale, std::uint64_t cutoff);

struct RecurrenceInstance {
    std::string id;
    Schedule lambda_seq;
    BSeries b_seq;
    double a1 = 0.0;
    BigInt D; // a_n <= D, derived as max(1, ceil(a1 + total_bound))

    static RecurrenceInstance make(Schedule lambda_seq, BSeries b_seq, double a1);
};

// a[1..horizon] with a[0] unused; a_1 = a1, then the recurrence at equality.
std::vector<double> simulate_recurrence(const RecurrenceInstance& inst, std::uint64_t horizon);

struct ProductBoundResult {
    bool pass = false;
    double lhs = 0.0, rhs = 0.0;
};

// a_{n+m} <= [prod_{j=n}^{n+m-1} (1 - lambda_{j+1})] a_n + sum_{j=n}^{n+m-1} b_j,
// checked on a previously simulated sequence with slack tol*(1+rhs).
ProductBoundResult check_product_bound(const RecurrenceInstance& inst,
                                       const std::vector<double>& a, std::uint64_t n,
                                       std::uint64_t m, double tol);

// For each eps: compute h = h_liu(gamma, delta, D, eps); where h <= horizon,
// assert a_n < eps for all n in [h, horizon]. gamma/delta must be the moduli
// matching the instance (the overload without them uses the attached ones).
VerificationReport check_h_bound(const RecurrenceInstance& inst, const ModulusFn& gamma,
                                 const ModulusFn& delta, const std::vector<BigRat>& eps_grid,
                                 std::uint64_t horizon);
VerificationReport check_h_bound(const RecurrenceInstance& inst,
                                 const std::vector<BigRat>& eps_grid, std::uint64_t horizon);

// (1/(n+1)) sum_{i=0}^{n} T^i x by direct powering with compensated
// summation. Requires a linear operator (affine offset zero).
Vec cesaro_oracle(const NonexpansiveOp& linear_op, const Vec& x, std::uint64_t n);

// Seeded random instance from the built-in families (lambda from
// {constant, harmonic, inverse_sqrt}, b geometric or eventually-zero).
RecurrenceInstance random_instance(std::uint64_t seed);

} // namespace halrates
