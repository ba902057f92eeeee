#include "halrates/bounds.hpp"

namespace halrates {

namespace {

void require_eps_02(const BigRat& eps, const char* who) {
    if (!(eps > 0 && eps < 2))
        throw DomainError(std::string(who) + ": eps must lie in (0, 2), got " + eps.str());
}

// The same size guard as the harmonic divergence rate: beyond ~2^31 bits an
// exact power is not materializable.
constexpr std::uint64_t kMaxShiftBits = std::uint64_t{1} << 31;

} // namespace

BoundIndex h_liu(const ModulusFn& gamma, const ModulusFn& delta, const BigInt& D,
                 const BigRat& eps) {
    require_eps_02(eps, "h_liu");
    if (D < 1) throw DomainError("h_liu: D must be a positive natural, got " + D.str());
    if (delta.kind() != ModulusKind::rate_of_divergence)
        throw ModulusKindError("h_liu: delta must be a rate of divergence");
    BoundIndex g = gamma.at_eps(eps / 2);
    BigInt arg = g.value() + 1 + ceil_ln_upper(BigRat(2 * D) / eps);
    return delta.at_index(arg);
}

BoundIndex phi_general(const ModulusFn& alpha, const ModulusFn& beta, const ModulusFn& theta,
                       const BigInt& M, const BigRat& eps) {
    require_eps_02(eps, "phi_general");
    if (M < 1) throw DomainError("phi_general: M must be a positive natural, got " + M.str());
    if (alpha.kind() == ModulusKind::rate_of_divergence)
        throw ModulusKindError("phi_general: alpha must be eps-indexed");
    const BigInt twoM = 2 * M;
    // The step-gap sequence ||x_{n+1} - x_n|| satisfies the h_liu recurrence
    // with b_n = |lambda_{n+1} - lambda_n| * 2M; its Cauchy modulus is beta
    // pulled back by 2M. Applying h_liu at eps/2 with D = 2M reproduces the
    // theta term of the rate verbatim.
    ModulusFn pulled = ModulusFn::cauchy_modulus(
        beta.name() + "/pullback2M", [&beta, twoM](const BigRat& u) {
            return beta.at_eps(u / BigRat(twoM)).value();
        });
    BoundIndex gap_bound = h_liu(pulled, theta, twoM, eps / 2);
    BoundIndex tail_bound = alpha.at_eps(eps / (4 * BigRat(M)));
    return max_bound(gap_bound, tail_bound);
}

BigInt bounded_domain_M(const BigRat& d_C) {
    if (d_C < 0) throw DomainError("bounded_domain_M: diameter bound must be >= 0");
    BigInt m = ceil_rat(3 * d_C);
    return m < 1 ? BigInt(1) : m;
}

BoundIndex phi_bounded(const ModulusFn& alpha, const ModulusFn& beta, const ModulusFn& theta,
                       const BigRat& d_C, const BigRat& eps) {
    return phi_general(alpha, beta, theta, bounded_domain_M(d_C), eps);
}

BoundIndex psi_decreasing(const ModulusFn& alpha, const ModulusFn& theta, const BigInt& M,
                          const BigRat& eps) {
    return phi_general(alpha, alpha, theta, M, eps);
}

BoundIndex psi_decreasing(const Schedule& s, const BigInt& M, const BigRat& eps) {
    if (!s.decreasing())
        throw PreconditionError("psi_decreasing: schedule '" + s.id() +
                                "' is not flagged nonincreasing");
    return psi_decreasing(s.alpha(), s.theta(), M, eps);
}

BoundIndex phi_harmonic(const BigRat& d_C, const BigRat& eps) {
    require_eps_02(eps, "phi_harmonic");
    BigInt M = bounded_domain_M(d_C);
    BigInt expo = ceil_rat(BigRat(16 * M) / eps + 3);
    BigInt bits = 2 * expo;
    if (bits > kMaxShiftBits)
        throw NumericBlowupError("phi_harmonic: 4^" + expo.str() +
                                 " is too large to materialize exactly");
    return BoundIndex(BigInt(1) << bits.convert_to<unsigned>());
}

} // namespace halrates
