#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halrates/errors.hpp"
#include "halrates/iteration.hpp"

using namespace halrates;

namespace {

const CheckResult& find(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    static CheckResult missing{"<missing>", CheckStatus::fail, "check not found"};
    FAIL("no check named ", name);
    return missing;
}

NonexpansiveOp rot90() {
    return NonexpansiveOp::rotation(2, {{0, 1, M_PI / 2}}).with_invariant_radius(1.0);
}

} // namespace

TEST_CASE("identity: constant trajectory, zero residuals") {
    Vec x{1.0, -2.0, 0.5};
    Trajectory t = halpern_run(NonexpansiveOp::identity(3), x, Schedule::harmonic(), 100);
    CHECK(t.horizon == 100);
    CHECK(t.scalars_complete());
    CHECK(t.iterates_complete());
    CHECK(t.start == x);
    for (std::uint64_t n = 0; n <= 100; ++n) {
        CHECK(t.residual[n] == 0.0);
        CHECK(t.iterates[n] == x);
    }
    CHECK(t.final_residual == 0.0);
    CHECK(t.max_residual == 0.0);
    CHECK(first_crossing(t, 0.5) == 0); // already below from the start
    // KM on the identity is also constant.
    Trajectory k = km_run(NonexpansiveOp::identity(3), x, Schedule::constant(BigRat(1, 2)), 20);
    CHECK(k.iterates[20] == x);
    CHECK(k.max_residual == 0.0);
}

TEST_CASE("halpern semantics: lambda_1 = 1 restarts at the anchor") {
    // harmonic lambda_1 = 1, so x_1 = 1*x + 0*Tx_0 = x exactly, whatever T is.
    Trajectory t = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 5);
    CHECK(t.iterates[1] == Vec{1.0, 0.0});
    // shifted_harmonic lambda_1 = 1/2: x_1 = (x + Tx_0)/2 = ((1,0)+(0,1))/2.
    Trajectory s = halpern_run(rot90(), {1.0, 0.0}, Schedule::shifted_harmonic(), 5);
    CHECK(s.iterates[1] == Vec{0.5, 0.5});
}

TEST_CASE("affine -I: shifted_harmonic lands on the fixed point immediately") {
    // T x = -x has fixed point 0. lambda_1 = 1/2 gives x_1 = (x - x)/2 = 0.
    NonexpansiveOp neg = NonexpansiveOp::averaged_affine(2, {-1.0, 0.0, 0.0, -1.0}, {0.0, 0.0});
    Trajectory t = halpern_run(neg, {0.7, -0.3}, Schedule::shifted_harmonic(), 10);
    CHECK(t.iterates[1] == Vec{0.0, 0.0});
    // And stays there: x_{n+1} = l*x + (1-l)*(-x_n); from x_1 = 0 on, the
    // anchor keeps being pulled back in, so later iterates are not zero...
    // but residual r_1 = ||x_1 - T x_1|| = 0 exactly.
    CHECK(t.residual[1] == 0.0);
}

TEST_CASE("km recursion matches a hand-rolled loop") {
    NonexpansiveOp op = rot90();
    Schedule s = Schedule::shifted_harmonic(); // lambda_n = 1/(n+1)
    Vec x{0.8, 0.1};
    Trajectory t = km_run(op, x, s, 50);
    // Recompute: x_{n+1} = (1 - l_{n+1}) x_n + l_{n+1} T x_n.
    Vec cur = x;
    for (std::uint64_t n = 0; n < 50; ++n) {
        Vec img = op.apply(cur);
        double lam = s.lambda_at(n + 1);
        for (std::size_t i = 0; i < cur.size(); ++i)
            cur[i] = (1.0 - lam) * cur[i] + lam * img[i];
        REQUIRE(t.iterates[n + 1] == cur); // bit-exact replay
    }
    // lambda column records the lambda consumed producing x_n.
    CHECK(t.lambda[0] == 0.0);
    CHECK(t.lambda[1] == s.lambda_at(1));
    CHECK(t.lambda[50] == s.lambda_at(50));
}

TEST_CASE("halpern recursion matches a hand-rolled loop") {
    NonexpansiveOp op = rot90();
    Schedule s = Schedule::harmonic();
    Vec anchor{1.0, 0.0};
    Trajectory t = halpern_run(op, anchor, s, 50);
    Vec cur = anchor;
    for (std::uint64_t n = 0; n < 50; ++n) {
        Vec img = op.apply(cur);
        double lam = s.lambda_at(n + 1);
        for (std::size_t i = 0; i < cur.size(); ++i)
            cur[i] = lam * anchor[i] + (1.0 - lam) * img[i];
        REQUIRE(t.iterates[n + 1] == cur);
    }
}

TEST_CASE("km on a ball projection converges to the boundary point") {
    // From (2,0), projecting onto B(0,1): the projection sends everything on
    // the segment straight to (1,0), and averaging walks there geometrically.
    NonexpansiveOp p = NonexpansiveOp::ball_projection({0.0, 0.0}, 1.0);
    Trajectory t = km_run(p, {2.0, 0.0}, Schedule::constant(BigRat(1, 2)), 50);
    CHECK(t.final_residual < 1e-6);
    CHECK(t.iterates[50][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(t.iterates[50][1]) == 0.0);
    // Residuals shrink monotonically here (distance to the ball halves).
    for (std::uint64_t n = 0; n + 1 <= 50; ++n) CHECK(t.residual[n + 1] <= t.residual[n]);
}

TEST_CASE("rotation by pi: iterates alternate between anchor line and zero") {
    // T ~ -I; writing x_n = c_n * x the recursion gives c_1 = 1,
    // c_{n+1} = 1/(n+1) - (n/(n+1)) c_n, so c alternates: even n -> 0,
    // odd n -> 1/n. Residual r_n = 2|c_n| * ||x||.
    NonexpansiveOp pi_rot = NonexpansiveOp::rotation(2, {{0, 1, M_PI}});
    Trajectory t = halpern_run(pi_rot, {1.0, 0.0}, Schedule::harmonic(), 200);
    // double(M_PI) is not pi, so allow the sin(pi) ~ 1.2e-16 leakage.
    CHECK(t.residual[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(t.residual[199] == doctest::Approx(2.0 / 199.0).epsilon(1e-9));
    CHECK(t.residual[200] <= 1e-10);
    CHECK(t.residual[101] == doctest::Approx(2.0 / 101.0).epsilon(1e-9));
}

TEST_CASE("storage caps: scalars and iterates truncate, summaries do not") {
    RunOptions opts;
    opts.scalar_cap = 10;
    opts.iterate_cap = 5;
    opts.crossing_eps = {0.01};
    Trajectory t = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 1000, opts);
    CHECK(t.stored == 10);
    CHECK_FALSE(t.scalars_complete());
    CHECK(t.iterates.size() == 5);
    CHECK(t.residual.size() == 10);
    // Online summaries still cover the whole run. The residual series for
    // this trajectory oscillates: it dips below 0.01 at n = 4 but keeps
    // climbing back above until n = 198.
    CHECK(t.max_residual == doctest::Approx(std::sqrt(2.0)));
    CHECK(t.argmax_residual == 0);
    CHECK(t.final_residual > 0.0);
    CHECK(t.final_residual < 0.01);
    REQUIRE(t.crossings.size() == 1);
    CHECK(t.crossings[0].first_below == 4);
    CHECK(t.crossings[0].last_at_or_above == 198);
    // The tracked eps answers beyond the stored prefix.
    CHECK(first_crossing(t, 0.01) == 4);
    // An untracked eps beyond the stored prefix cannot be answered.
    CHECK_THROWS_AS(first_crossing(t, 0.5), PreconditionError);
}

TEST_CASE("sink observes every step exactly once") {
    std::uint64_t calls = 0;
    std::uint64_t last_n = 0;
    RunOptions opts;
    opts.scalar_cap = 3; // sink must still see all steps
    opts.sink = [&](const StepView& v) {
        CHECK(v.n == calls);
        CHECK(v.x.size() == 2);
        CHECK(v.norm_x <= 1.0 + 1e-12); // stays in the invariant ball
        ++calls;
        last_n = v.n;
    };
    halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 25, opts);
    CHECK(calls == 26);
    CHECK(last_n == 25);
}

TEST_CASE("diverging run raises a blowup error") {
    NonexpansiveOp dbl = NonexpansiveOp::averaged_affine(2, {2.0, 0.0, 0.0, 2.0}, {0.0, 0.0});
    // Halpern with constant(1/2) halves the pull each step but doubling wins:
    // growth ~ (2*(1/2))^n stays bounded... use KM with lambda = 1 instead,
    // which iterates T directly: 2^n blows past the finite range near n=1024.
    CHECK_THROWS_AS(km_run(dbl, {1.0, 0.0}, Schedule::constant(BigRat(1)), 2000),
                    NumericBlowupError);
    try {
        km_run(dbl, {1.0, 0.0}, Schedule::constant(BigRat(1)), 2000);
    } catch (const NumericBlowupError& e) {
        CHECK(std::string(e.what()).find("left the finite range") != std::string::npos);
    }
}

TEST_CASE("reruns are bit-identical") {
    Trajectory a = halpern_run(rot90(), {0.6, 0.3}, Schedule::inverse_sqrt(), 3000);
    Trajectory b = halpern_run(rot90(), {0.6, 0.3}, Schedule::inverse_sqrt(), 3000);
    REQUIRE(a.stored == b.stored);
    for (std::uint64_t n = 0; n < a.stored; ++n) {
        REQUIRE(a.residual[n] == b.residual[n]);
        REQUIRE(a.step_gap[n] == b.step_gap[n]);
    }
    CHECK(a.final_residual == b.final_residual);
}

TEST_CASE("estimate_M: declared ball beats empirical sup") {
    // Certified: rotation declared invariant on B(0,1), anchor inside.
    Trajectory cert = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 100);
    MEstimate m = estimate_M(cert);
    CHECK(m.certified);
    CHECK(m.value == 3); // max(1, ceil(3 * 1.0))
    // Empirical: same map without the declaration.
    NonexpansiveOp bare = NonexpansiveOp::rotation(2, {{0, 1, M_PI / 2}});
    Trajectory emp = halpern_run(bare, {1.0, 0.0}, Schedule::harmonic(), 100);
    MEstimate e = estimate_M(emp);
    CHECK_FALSE(e.certified);
    CHECK(e.value >= 3); // sup ||x_n|| + ||x_0|| + ||Tx_0|| = 3 exactly here
    CHECK(e.value <= 4);
    // Anchor outside the declared ball falls back to empirical.
    Trajectory out = halpern_run(rot90(), {5.0, 0.0}, Schedule::harmonic(), 10);
    CHECK_FALSE(estimate_M(out).certified);
}

TEST_CASE("halpern inequality chain holds on a clean trajectory") {
    Trajectory t = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 500);
    VerificationReport r = check_halpern_inequalities(rot90(), t, Schedule::harmonic(), BigInt(3));
    CHECK(r.all_passed());
    for (const char* name : {"image_norm_bound", "residual_vs_gap", "gap_recurrence",
                             "residual_vs_gap_M", "gap_recurrence_M"}) {
        CAPTURE(name);
        CHECK(find(r, name).status == CheckStatus::pass);
    }
}

TEST_CASE("corrupting one stored iterate is detected near the corruption") {
    Trajectory t = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 200);
    t.iterates[5][0] += 1.0;
    // Keep the scalar columns consistent with the corrupted vector being a
    // genuine x_5: the checks recompute norms from the vectors themselves.
    VerificationReport r = check_halpern_inequalities(rot90(), t, Schedule::harmonic(), BigInt(3));
    CHECK_FALSE(r.all_passed());
    bool witnessed = false;
    for (const auto& c : r.checks) {
        if (c.status != CheckStatus::fail) continue;
        auto pos = c.detail.find("violated at n = ");
        REQUIRE(pos != std::string::npos);
        std::uint64_t n = std::stoull(c.detail.substr(pos + 16));
        CHECK(n >= 4);
        CHECK(n <= 6);
        witnessed = true;
    }
    CHECK(witnessed);
}

TEST_CASE("inequality checker preconditions") {
    Trajectory km = km_run(rot90(), {1.0, 0.0}, Schedule::constant(BigRat(1, 2)), 50);
    CHECK_THROWS_AS(
        check_halpern_inequalities(rot90(), km, Schedule::constant(BigRat(1, 2)), BigInt(3)),
        PreconditionError);
    Trajectory h = halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 50);
    CHECK_THROWS_AS(check_halpern_inequalities(rot90(), h, Schedule::harmonic(), BigInt(0)),
                    DomainError);
}

TEST_CASE("input guards") {
    CHECK_THROWS_AS(halpern_run(rot90(), {1.0}, Schedule::harmonic(), 10), ShapeError);
    CHECK_THROWS_AS(halpern_run(rot90(), {1.0, 0.0}, Schedule::harmonic(), 0), DomainError);
}
