#pragma once

// Definition-level verification of claimed moduli against finite prefixes of
// the actual sequences. A modulus that passes here is consistent with its
// defining inequality up to the horizon; a bogus one is reported with a
// concrete witness index.

#include <cstdint>
#include <functional>
#include <vector>

#include "halrates/big_nat.hpp"
#include "halrates/report.hpp"
#include "halrates/schedule.hpp"

namespace halrates {

// Terms of a series, indexed from 1. Must be cheap, pure and thread-safe.
using TermFn = std::function<double(std::uint64_t)>;

struct VerifyOptions {
    // Relative slack for inequalities whose finite-precision evaluation can
    // legitimately land a hair on the wrong side (currently only the
    // divergence-rate partial sums, which under-accumulate by rounding).
    double tol = 1e-9;
};

// Divergence rate: sum_{i=1}^{theta(n)} terms(i) >= n for every n with
// theta(n) <= horizon, plus the exact invariant theta(n) >= n on the same
// range. Truncated if even theta(1) exceeds the horizon.
CheckResult check_divergence_rate(const std::string& label, const TermFn& terms,
                                  const ModulusFn& theta, std::uint64_t horizon,
                                  const VerifyOptions& opt = {});

// Cauchy modulus for the partial sums of a *nonnegative* series: writing
// s_n = sum_{i<=n} terms(i), requires s_m - s_{g} < eps for all m in
// (g, horizon], where g = gamma(eps). Nonnegativity means the worst m is the
// last one, so this is a single tail sum. Truncated if g >= horizon.
CheckResult check_cauchy_modulus(const std::string& label, const TermFn& terms,
                                 const ModulusFn& gamma, const BigRat& eps,
                                 std::uint64_t horizon);

// Rate of convergence to zero: seq(n) < eps for all n in [alpha(eps), horizon].
// Truncated if alpha(eps) > horizon.
CheckResult check_convergence_rate(const std::string& label, const TermFn& seq,
                                   const ModulusFn& alpha, const BigRat& eps,
                                   std::uint64_t horizon);

// Run every definitional check the schedule's attached moduli support:
//   - lambda values lie in [0,1] over [1, horizon]
//   - the `decreasing` flag is honored
//   - divergence rate (if theta attached)
//   - Cauchy modulus at each grid eps (if beta available)
//   - convergence rate at each grid eps (if alpha attached)
// Absent moduli yield `skipped` entries, not failures.
VerificationReport verify_moduli(const Schedule& s, std::uint64_t horizon,
                                 const std::vector<BigRat>& eps_grid,
                                 const VerifyOptions& opt = {});

} // namespace halrates
