#pragma once

// Step-size schedules (lambda_n)_{n>=1} in [0,1] together with whatever
// certified moduli are known for them. Built-ins carry closed-form moduli;
// custom schedules carry whatever the caller attaches. A schedule flagged
// `decreasing` gets its Cauchy modulus for free from its convergence rate
// (the |lambda_{n+1}-lambda_n| partial sums telescope to lambda_m - lambda_n).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "halrates/big_nat.hpp"
#include "halrates/modulus.hpp"

namespace halrates {

enum class ScheduleKind { harmonic, shifted_harmonic, inverse_sqrt, constant, custom };

const char* to_string(ScheduleKind k);

class Schedule {
public:
    // lambda_n = 1/n;            alpha(eps) = ceil(1/eps)+1, theta(n) = 4^n
    static Schedule harmonic();
    // lambda_n = 1/(n+1);        alpha(eps) = max(1, ceil(1/eps)), theta(n) = 4^(n+1)
    static Schedule shifted_harmonic();
    // lambda_n = 1/sqrt(n);      alpha(eps) = ceil(1/eps^2)+1, theta(n) = ceil((n/2+1)^2)
    static Schedule inverse_sqrt();
    // lambda_n = c, c in [0,1];  theta(n) = ceil(n/c) for c > 0; alpha = 1 for c = 0;
    //                            beta = 1 always (differences vanish)
    static Schedule constant(const BigRat& c);

    static Schedule custom(std::string id, std::function<double(std::uint64_t)> rule,
                           bool decreasing);

    // Return a copy with the given modulus attached (replacing any previous
    // one of the same slot).
    Schedule with_alpha(ModulusFn alpha) const;
    Schedule with_beta(ModulusFn beta) const;
    Schedule with_theta(ModulusFn theta) const;

    ScheduleKind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    bool decreasing() const { return decreasing_; }
    std::optional<BigRat> constant_value() const { return const_value_; }

    // lambda_n for n >= 1. Throws ScheduleDomainError if n == 0 or the rule
    // yields a value outside [0,1] (or a non-finite one).
    double lambda_at(std::uint64_t n) const;

    bool has_alpha() const { return alpha_.has_value(); }
    bool has_theta() const { return theta_.has_value(); }
    // True if an explicit beta is attached or one is derivable (decreasing + alpha).
    bool has_beta() const { return beta_.has_value() || (decreasing_ && alpha_.has_value()); }

    const ModulusFn& alpha() const; // throws MissingModulusError
    const ModulusFn& theta() const; // throws MissingModulusError
    // Explicit beta if attached, else alpha reused when decreasing, else throws.
    const ModulusFn& beta() const;

private:
    Schedule(ScheduleKind kind, std::string id, std::function<double(std::uint64_t)> rule,
             bool decreasing)
        : kind_(kind), id_(std::move(id)), rule_(std::move(rule)), decreasing_(decreasing) {}

    ScheduleKind kind_;
    std::string id_;
    std::function<double(std::uint64_t)> rule_;
    bool decreasing_ = false;
    std::optional<BigRat> const_value_;
    std::optional<ModulusFn> alpha_;
    std::optional<ModulusFn> beta_;
    std::optional<ModulusFn> theta_;
};

// Convenience wrappers naming the three evaluations; these are the public
// entry points used by the bound calculators and the CLI.
BoundIndex alpha_of(const Schedule& s, const BigRat& eps);
BoundIndex beta_of(const Schedule& s, const BigRat& eps);
BoundIndex theta_of(const Schedule& s, const BigInt& n);

} // namespace halrates
