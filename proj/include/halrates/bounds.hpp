#pragma once

// Certified rates of asymptotic regularity. Every function here returns an
// exact index: past it, the iteration's residual ||x_n - T x_n|| is provably
// below eps. All arithmetic is exact except the ceil(ln .) terms, which are
// rounded *up* so the returned index can only overshoot.

#include "halrates/big_nat.hpp"
#include "halrates/modulus.hpp"
#include "halrates/schedule.hpp"

namespace halrates {

// Bound for the recurrence a_{n+1} <= (1-lambda_{n+1}) a_n + b_n:
//   h(gamma, delta, D, eps) = delta( gamma(eps/2) + 1 + ceil(ln(2D/eps)) )
// where gamma is a Cauchy modulus for the partial sums of (b_n), delta a rate
// of divergence for (lambda_n), and D >= 1 dominates (a_n). eps in (0, 2).
BoundIndex h_liu(const ModulusFn& gamma, const ModulusFn& delta, const BigInt& D,
                 const BigRat& eps);

// General rate for the Halpern iteration:
//   Phi = max{ theta( beta(eps/8M) + 1 + ceil(ln(8M/eps)) ), alpha(eps/4M) }
// The theta term *is* h_liu applied to the recurrence satisfied by
// ||x_{n+1} - x_n||, and is computed by that composition here. M >= 1 must
// dominate ||x_n|| + ||x|| + ||Tx||; eps in (0, 2).
BoundIndex phi_general(const ModulusFn& alpha, const ModulusFn& beta, const ModulusFn& theta,
                       const BigInt& M, const BigRat& eps);

// The norm bound used on a bounded domain of diameter <= d_C: max(1, ceil(3 d_C)).
BigInt bounded_domain_M(const BigRat& d_C);

// phi_general with M derived from the diameter bound d_C >= 0.
BoundIndex phi_bounded(const ModulusFn& alpha, const ModulusFn& beta, const ModulusFn& theta,
                       const BigRat& d_C, const BigRat& eps);

// For nonincreasing schedules the convergence rate alpha doubles as the
// Cauchy modulus (the difference series telescopes), giving
//   Psi(alpha, theta, M, eps) = Phi(alpha, alpha, theta, M, eps).
BoundIndex psi_decreasing(const ModulusFn& alpha, const ModulusFn& theta, const BigInt& M,
                          const BigRat& eps);
// Schedule-level variant; throws PreconditionError unless the schedule is
// flagged nonincreasing, MissingModulusError if alpha/theta are absent.
BoundIndex psi_decreasing(const Schedule& s, const BigInt& M, const BigRat& eps);

// Closed form for the harmonic schedule on a bounded domain:
//   4^( ceil(16 M / eps + 3) ),  M = max(1, ceil(3 d_C)).
// The exponent's ceiling is exact (no logarithms involved).
BoundIndex phi_harmonic(const BigRat& d_C, const BigRat& eps);

} // namespace halrates
