#pragma once

// Quantitative moduli attached to a step-size schedule. Three kinds:
//   rate_of_convergence  alpha: eps -> N   with lambda_n <  eps for all n >= alpha(eps)
//   cauchy_modulus       beta:  eps -> N   making partial sums of |lambda_{n+1}-lambda_n|
//                                          an eps-Cauchy sequence from beta(eps) on
//   rate_of_divergence   theta: n -> N     with sum_{i<=theta(n)} lambda_i >= n
// Each is exact: the callable maps exact rationals (or exact naturals) to
// certified indices, no floating point involved.

#include <functional>
#include <string>

#include "halrates/big_nat.hpp"

namespace halrates {

enum class ModulusKind { rate_of_convergence, cauchy_modulus, rate_of_divergence };

const char* to_string(ModulusKind k);

class ModulusFn {
public:
    using EpsRule = std::function<BigInt(const BigRat&)>;  // eps > 0 -> index
    using IndexRule = std::function<BigInt(const BigInt&)>; // n >= 1 -> index

    static ModulusFn rate_of_convergence(std::string name, EpsRule rule);
    static ModulusFn cauchy_modulus(std::string name, EpsRule rule);
    static ModulusFn rate_of_divergence(std::string name, IndexRule rule);

    ModulusKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    // Evaluate an eps-indexed modulus (alpha or beta). Throws ModulusKindError
    // for divergence rates, DomainError for eps <= 0. Results are clamped
    // into BoundIndex territory: any rule output < 1 becomes 1 (an index
    // bound of "0 steps" and "1 step" certify the same inequality family,
    // and indices here start at 1).
    BoundIndex at_eps(const BigRat& eps) const;

    // Evaluate a divergence rate at n >= 1. Throws ModulusKindError unless
    // the kind is rate_of_divergence.
    BoundIndex at_index(const BigInt& n) const;

private:
    ModulusFn(ModulusKind kind, std::string name, EpsRule er, IndexRule ir)
        : kind_(kind), name_(std::move(name)), eps_rule_(std::move(er)), index_rule_(std::move(ir)) {}

    ModulusKind kind_;
    std::string name_;
    EpsRule eps_rule_;
    IndexRule index_rule_;
};

} // namespace halrates
