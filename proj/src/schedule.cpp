#include "halrates/schedule.hpp"

#include <cmath>

namespace halrates {

namespace mp = boost::multiprecision;

const char* to_string(ModulusKind k) {
    switch (k) {
        case ModulusKind::rate_of_convergence: return "rate_of_convergence";
        case ModulusKind::cauchy_modulus: return "cauchy_modulus";
        case ModulusKind::rate_of_divergence: return "rate_of_divergence";
    }
    return "?";
}

const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::harmonic: return "harmonic";
        case ScheduleKind::shifted_harmonic: return "shifted_harmonic";
        case ScheduleKind::inverse_sqrt: return "inverse_sqrt";
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::custom: return "custom";
    }
    return "?";
}

// ---- ModulusFn -------------------------------------------------------------

ModulusFn ModulusFn::rate_of_convergence(std::string name, EpsRule rule) {
    return ModulusFn(ModulusKind::rate_of_convergence, std::move(name), std::move(rule), {});
}

ModulusFn ModulusFn::cauchy_modulus(std::string name, EpsRule rule) {
    return ModulusFn(ModulusKind::cauchy_modulus, std::move(name), std::move(rule), {});
}

ModulusFn ModulusFn::rate_of_divergence(std::string name, IndexRule rule) {
    return ModulusFn(ModulusKind::rate_of_divergence, std::move(name), {}, std::move(rule));
}

BoundIndex ModulusFn::at_eps(const BigRat& eps) const {
    if (kind_ == ModulusKind::rate_of_divergence)
        throw ModulusKindError("modulus '" + name_ + "' is a rate of divergence, not eps-indexed");
    if (eps <= 0) throw DomainError("modulus '" + name_ + "': eps must be positive");
    BigInt v = eps_rule_(eps);
    if (v < 1) v = 1;
    return BoundIndex(std::move(v));
}

BoundIndex ModulusFn::at_index(const BigInt& n) const {
    if (kind_ != ModulusKind::rate_of_divergence)
        throw ModulusKindError("modulus '" + name_ + "' is not a rate of divergence");
    if (n < 1) throw DomainError("modulus '" + name_ + "': index must be >= 1");
    BigInt v = index_rule_(n);
    if (v < 1) v = 1;
    return BoundIndex(std::move(v));
}

// ---- built-in schedules ----------------------------------------------------

namespace {

// Exact 4^n via bit shift, with a guard against materializing numbers that
// would not fit in memory. 2^31 bits is ~256 MB; anything past that is only
// meaningful through its decimal/log view, and callers needing the iterate
// range will have rejected such horizons long before.
constexpr std::uint64_t kMaxShiftBits = std::uint64_t{1} << 31;

BigInt pow4(const BigInt& n) {
    if (n < 1) throw DomainError("pow4: exponent must be >= 1");
    BigInt bits = 2 * n;
    if (bits > kMaxShiftBits)
        throw NumericBlowupError("4^" + n.str() + " is too large to materialize exactly");
    return BigInt(1) << bits.convert_to<unsigned>();
}

} // namespace

Schedule Schedule::harmonic() {
    Schedule s(ScheduleKind::harmonic, "harmonic",
               [](std::uint64_t n) { return 1.0 / static_cast<double>(n); }, true);
    s.alpha_ = ModulusFn::rate_of_convergence("harmonic.alpha", [](const BigRat& eps) {
        return ceil_rat(1 / eps) + 1;
    });
    s.theta_ = ModulusFn::rate_of_divergence("harmonic.theta", [](const BigInt& n) {
        return pow4(n);
    });
    return s;
}

Schedule Schedule::shifted_harmonic() {
    Schedule s(ScheduleKind::shifted_harmonic, "shifted_harmonic",
               [](std::uint64_t n) { return 1.0 / static_cast<double>(n + 1); }, true);
    s.alpha_ = ModulusFn::rate_of_convergence("shifted_harmonic.alpha", [](const BigRat& eps) {
        BigInt v = ceil_rat(1 / eps);
        return v < 1 ? BigInt(1) : v;
    });
    s.theta_ = ModulusFn::rate_of_divergence("shifted_harmonic.theta", [](const BigInt& n) {
        return pow4(n + 1);
    });
    return s;
}

Schedule Schedule::inverse_sqrt() {
    Schedule s(ScheduleKind::inverse_sqrt, "inverse_sqrt",
               [](std::uint64_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }, true);
    s.alpha_ = ModulusFn::rate_of_convergence("inverse_sqrt.alpha", [](const BigRat& eps) {
        return ceil_rat(1 / (eps * eps)) + 1;
    });
    // ceil((n/2+1)^2) = ((n+2)^2 + 3) / 4 exactly for integer n.
    s.theta_ = ModulusFn::rate_of_divergence("inverse_sqrt.theta", [](const BigInt& n) {
        return ((n + 2) * (n + 2) + 3) / 4;
    });
    return s;
}

Schedule Schedule::constant(const BigRat& c) {
    if (c < 0 || c > 1) throw DomainError("constant schedule: c must lie in [0,1]");
    const double cd = c.convert_to<double>();
    Schedule s(ScheduleKind::constant, "constant(" + c.str() + ")",
               [cd](std::uint64_t) { return cd; }, true);
    s.const_value_ = c;
    // Differences are all zero, so any index works as a Cauchy modulus.
    s.beta_ = ModulusFn::cauchy_modulus("constant.beta", [](const BigRat&) { return BigInt(1); });
    if (c > 0) {
        BigRat cc = c;
        s.theta_ = ModulusFn::rate_of_divergence("constant.theta", [cc](const BigInt& n) {
            return ceil_rat(BigRat(n) / cc);
        });
    } else {
        // lambda == 0 converges to 0 immediately; no divergence rate exists.
        s.alpha_ = ModulusFn::rate_of_convergence("constant.alpha",
                                                  [](const BigRat&) { return BigInt(1); });
    }
    return s;
}

Schedule Schedule::custom(std::string id, std::function<double(std::uint64_t)> rule,
                          bool decreasing) {
    return Schedule(ScheduleKind::custom, std::move(id), std::move(rule), decreasing);
}

Schedule Schedule::with_alpha(ModulusFn alpha) const {
    if (alpha.kind() != ModulusKind::rate_of_convergence)
        throw ModulusKindError("with_alpha: expected a rate_of_convergence modulus");
    Schedule s = *this;
    s.alpha_ = std::move(alpha);
    return s;
}

Schedule Schedule::with_beta(ModulusFn beta) const {
    if (beta.kind() != ModulusKind::cauchy_modulus)
        throw ModulusKindError("with_beta: expected a cauchy_modulus modulus");
    Schedule s = *this;
    s.beta_ = std::move(beta);
    return s;
}

Schedule Schedule::with_theta(ModulusFn theta) const {
    if (theta.kind() != ModulusKind::rate_of_divergence)
        throw ModulusKindError("with_theta: expected a rate_of_divergence modulus");
    Schedule s = *this;
    s.theta_ = std::move(theta);
    return s;
}

double Schedule::lambda_at(std::uint64_t n) const {
    if (n == 0)
        throw ScheduleDomainError("schedule '" + id_ + "': lambda_n is defined for n >= 1");
    double v = rule_(n);
    if (!(v >= 0.0 && v <= 1.0)) // also catches NaN
        throw ScheduleDomainError("schedule '" + id_ + "': lambda_" + std::to_string(n) +
                                  " = " + std::to_string(v) + " is outside [0,1]");
    return v;
}

const ModulusFn& Schedule::alpha() const {
    if (!alpha_)
        throw MissingModulusError("schedule '" + id_ + "' has no rate of convergence attached");
    return *alpha_;
}

const ModulusFn& Schedule::theta() const {
    if (!theta_)
        throw MissingModulusError("schedule '" + id_ + "' has no rate of divergence attached");
    return *theta_;
}

const ModulusFn& Schedule::beta() const {
    if (beta_) return *beta_;
    if (decreasing_ && alpha_) return *alpha_;
    throw MissingModulusError("schedule '" + id_ +
                              "' has no Cauchy modulus (none attached, not decreasing-with-alpha)");
}

BoundIndex alpha_of(const Schedule& s, const BigRat& eps) { return s.alpha().at_eps(eps); }
BoundIndex beta_of(const Schedule& s, const BigRat& eps) { return s.beta().at_eps(eps); }
BoundIndex theta_of(const Schedule& s, const BigInt& n) { return s.theta().at_index(n); }

} // namespace halrates
