#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halrates/schedule.hpp"

using namespace halrates;

TEST_CASE("harmonic: values and moduli") {
    Schedule s = Schedule::harmonic();
    CHECK(s.kind() == ScheduleKind::harmonic);
    CHECK(s.decreasing());
    CHECK(s.lambda_at(1) == 1.0);
    CHECK(s.lambda_at(3) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(s.lambda_at(0), ScheduleDomainError);

    // alpha(eps) = ceil(1/eps) + 1
    CHECK(alpha_of(s, BigRat(1, 10)).value() == 11);
    CHECK(alpha_of(s, BigRat(1)).value() == 2);
    CHECK(alpha_of(s, BigRat(1, 96)).value() == 97);
    // theta(n) = 4^n
    CHECK(theta_of(s, BigInt(1)).value() == 4);
    CHECK(theta_of(s, BigInt(3)).value() == 64);
    CHECK(theta_of(s, BigInt(30)).value() == BigInt(1) << 60);
    // decreasing => beta falls back to alpha
    CHECK(s.has_beta());
    CHECK(beta_of(s, BigRat(1, 10)).value() == 11);
}

TEST_CASE("shifted_harmonic: values and moduli") {
    Schedule s = Schedule::shifted_harmonic();
    CHECK(s.lambda_at(1) == 0.5);
    CHECK(s.lambda_at(3) == 0.25);
    // alpha(eps) = max(1, ceil(1/eps))
    CHECK(alpha_of(s, BigRat(1, 10)).value() == 10);
    CHECK(alpha_of(s, BigRat(2)).value() == 1);
    // theta(n) = 4^(n+1)
    CHECK(theta_of(s, BigInt(1)).value() == 16);
    CHECK(theta_of(s, BigInt(2)).value() == 64);
}

TEST_CASE("inverse_sqrt: values and moduli") {
    Schedule s = Schedule::inverse_sqrt();
    CHECK(s.lambda_at(4) == 0.5);
    CHECK(s.lambda_at(1) == 1.0);
    // alpha(eps) = ceil(1/eps^2) + 1
    CHECK(alpha_of(s, BigRat(1, 10)).value() == 101);
    CHECK(alpha_of(s, BigRat(1, 96)).value() == 9217);
    CHECK(alpha_of(s, BigRat(1, 48)).value() == 2305);
    // theta(n) = ceil((n/2 + 1)^2), computed exactly
    CHECK(theta_of(s, BigInt(1)).value() == 3);    // ceil(2.25)
    CHECK(theta_of(s, BigInt(2)).value() == 4);    // exact
    CHECK(theta_of(s, BigInt(5)).value() == 13);   // ceil(12.25)
    CHECK(theta_of(s, BigInt(9223)).value() == 21275157);
}

TEST_CASE("constant schedules") {
    Schedule half = Schedule::constant(BigRat(1, 2));
    CHECK(half.id() == "constant(1/2)");
    CHECK(half.lambda_at(1) == 0.5);
    CHECK(half.lambda_at(999) == 0.5);
    CHECK_FALSE(half.has_alpha()); // a constant never drops below eps < c
    CHECK(half.has_beta());        // differences vanish
    CHECK(beta_of(half, BigRat(1, 1000)).value() == 1);
    CHECK(theta_of(half, BigInt(7)).value() == 14); // ceil(n / c)

    Schedule third = Schedule::constant(BigRat(1, 3));
    CHECK(theta_of(third, BigInt(2)).value() == 6);
    CHECK(theta_of(third, BigInt(5)).value() == 15);

    // c = 0: converges instantly, but no divergence rate exists.
    Schedule zero = Schedule::constant(BigRat(0));
    CHECK(zero.lambda_at(5) == 0.0);
    CHECK(zero.has_alpha());
    CHECK(alpha_of(zero, BigRat(1, 1000)).value() == 1);
    CHECK_FALSE(zero.has_theta());
    CHECK_THROWS_AS(zero.theta(), MissingModulusError);

    // c = 1 allowed, outside [0,1] rejected.
    CHECK(Schedule::constant(BigRat(1)).lambda_at(2) == 1.0);
    CHECK_THROWS_AS(Schedule::constant(BigRat(3, 2)), DomainError);
    CHECK_THROWS_AS(Schedule::constant(BigRat(-1, 2)), DomainError);
}

TEST_CASE("modulus evaluation guards") {
    Schedule s = Schedule::harmonic();
    CHECK_THROWS_AS(alpha_of(s, BigRat(0)), DomainError);
    CHECK_THROWS_AS(alpha_of(s, BigRat(-1)), DomainError);
    CHECK_THROWS_AS(s.alpha().at_index(BigInt(3)), ModulusKindError);
    CHECK_THROWS_AS(s.theta().at_eps(BigRat(1, 2)), ModulusKindError);
    CHECK_THROWS_AS(theta_of(s, BigInt(0)), DomainError);

    // Results below 1 clamp to 1 (indices start at 1).
    ModulusFn always_zero =
        ModulusFn::rate_of_convergence("zero", [](const BigRat&) { return BigInt(0); });
    CHECK(always_zero.at_eps(BigRat(1)).value() == 1);
}

TEST_CASE("4^n materialization guard") {
    Schedule s = Schedule::harmonic();
    // Exponent too large to hold the exact value in memory.
    CHECK_THROWS_AS(theta_of(s, BigInt(1) << 31), NumericBlowupError);
    // Large but representable is fine (2^21 bits is a quarter megabyte).
    CHECK_NOTHROW(theta_of(s, BigInt(1) << 20));
}

TEST_CASE("custom schedules and modulus attachment") {
    Schedule s = Schedule::custom("one_over_nsq", [](std::uint64_t n) {
        return 1.0 / (double(n) * double(n));
    }, true);
    CHECK(s.kind() == ScheduleKind::custom);
    CHECK_FALSE(s.has_alpha());
    CHECK_FALSE(s.has_beta()); // decreasing but no alpha to reuse
    CHECK_THROWS_AS(s.alpha(), MissingModulusError);
    CHECK_THROWS_AS(s.beta(), MissingModulusError);

    Schedule with = s.with_alpha(ModulusFn::rate_of_convergence(
        "custom.alpha", [](const BigRat& eps) { return ceil_rat(1 / eps); }));
    CHECK(with.has_alpha());
    CHECK(with.has_beta()); // now derivable
    CHECK_FALSE(s.has_alpha()); // original untouched

    // Kind mismatches are rejected.
    ModulusFn div = ModulusFn::rate_of_divergence("d", [](const BigInt& n) { return n; });
    CHECK_THROWS_AS(s.with_alpha(div), ModulusKindError);
    CHECK_THROWS_AS(s.with_beta(div), ModulusKindError);
    ModulusFn conv = ModulusFn::rate_of_convergence("c", [](const BigRat&) { return BigInt(1); });
    CHECK_THROWS_AS(s.with_theta(conv), ModulusKindError);
}

TEST_CASE("out-of-range rules are rejected at evaluation") {
    Schedule bad = Schedule::custom("bad", [](std::uint64_t n) {
        return n < 5 ? 0.5 : 1.5;
    }, false);
    CHECK(bad.lambda_at(2) == 0.5);
    CHECK_THROWS_AS(bad.lambda_at(5), ScheduleDomainError);
}
