#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halrates/errors.hpp"
#include "halrates/operators.hpp"

using namespace halrates;

namespace {

const CheckResult& find(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c;
    static CheckResult missing{"<missing>", CheckStatus::fail, "check not found"};
    FAIL("no check named ", name);
    return missing;
}

double dist_to(const Vec& a, const Vec& b, Norm n = Norm::euclidean) {
    return dist_of(a, b, n);
}

} // namespace

TEST_CASE("norms") {
    Vec v{3.0, -4.0};
    CHECK(norm_of(v, Norm::euclidean) == 5.0);
    CHECK(norm_of(v, Norm::max) == 4.0);
    CHECK(norm_of(v, Norm::sum) == 7.0);
    Vec a{1.0, 2.0}, b{4.0, 6.0};
    CHECK(dist_of(a, b, Norm::euclidean) == 5.0);
    CHECK(dist_of(a, b, Norm::max) == 4.0);
    CHECK(dist_of(a, b, Norm::sum) == 7.0);
    CHECK(std::string(to_string(Norm::euclidean)) == "euclidean");
    CHECK(std::string(to_string(Norm::max)) == "max");
    CHECK(std::string(to_string(Norm::sum)) == "sum");
}

TEST_CASE("identity") {
    NonexpansiveOp id = NonexpansiveOp::identity(3);
    CHECK(id.dim() == 3);
    CHECK(id.linear());
    Vec x{1.0, -2.0, 0.5};
    CHECK(id.apply(x) == x);
    Vec wrong{1.0, 2.0};
    CHECK_THROWS_AS(id.apply(wrong), ShapeError);
    Vec out(2, 0.0);
    CHECK_THROWS_AS(id.apply_into(x, out), ShapeError);
}

TEST_CASE("ball projection") {
    NonexpansiveOp p = NonexpansiveOp::ball_projection({0.0, 0.0}, 1.0);
    Vec far{3.0, 4.0};
    Vec proj = p.apply(far);
    CHECK(proj[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(proj[1] == doctest::Approx(0.8).epsilon(1e-15));
    // Points inside are fixed exactly.
    Vec in{0.25, -0.5};
    CHECK(p.apply(in) == in);
    // Idempotent up to roundoff.
    CHECK(dist_to(p.apply(proj), proj) <= 1e-12);
    // Off-center ball.
    NonexpansiveOp q = NonexpansiveOp::ball_projection({2.0, 0.0}, 1.0);
    Vec r = q.apply(Vec{4.0, 0.0});
    CHECK(r[0] == doctest::Approx(3.0));
    CHECK(r[1] == 0.0);
    CHECK_FALSE(p.linear());
    CHECK_THROWS_AS(NonexpansiveOp::ball_projection({0.0}, -1.0), DomainError);
}

TEST_CASE("box projection clamps componentwise") {
    NonexpansiveOp b = NonexpansiveOp::box_projection({-1.0, 0.0}, {1.0, 2.0});
    Vec r = b.apply(Vec{-5.0, 3.0});
    CHECK(r == Vec{-1.0, 2.0});
    Vec inside{0.5, 1.0};
    CHECK(b.apply(inside) == inside);
    CHECK_THROWS_AS(NonexpansiveOp::box_projection({1.0}, {0.0}), DomainError); // lo > hi
    CHECK_THROWS_AS(NonexpansiveOp::box_projection({0.0, 0.0}, {1.0}), ShapeError);
}

TEST_CASE("halfspace projection") {
    // Project onto <(1,0), x> <= 1.
    NonexpansiveOp h = NonexpansiveOp::halfspace_projection({1.0, 0.0}, 1.0);
    Vec r = h.apply(Vec{2.0, 0.0});
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == 0.0);
    Vec in{0.0, 7.0};
    CHECK(h.apply(in) == in); // already feasible
    // General normal: onto <(1,1), x> <= 0 from (1,1) lands at the origin.
    NonexpansiveOp d = NonexpansiveOp::halfspace_projection({1.0, 1.0}, 0.0);
    Vec z = d.apply(Vec{1.0, 1.0});
    CHECK(std::abs(z[0]) <= 1e-15);
    CHECK(std::abs(z[1]) <= 1e-15);
    CHECK_THROWS_AS(NonexpansiveOp::halfspace_projection({0.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("rotation") {
    NonexpansiveOp rot = NonexpansiveOp::rotation(2, {{0, 1, M_PI / 2}});
    CHECK(rot.id() == "rotation(1 planes)");
    CHECK(rot.linear());
    Vec r = rot.apply(Vec{1.0, 0.0});
    // Convention: x_i' = cos*x_i - sin*x_j, x_j' = sin*x_i + cos*x_j.
    CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(1.0));
    // Isometry on random-ish vectors.
    Vec v{0.3, -1.7};
    CHECK(std::abs(norm_of(rot.apply(v), Norm::euclidean) - norm_of(v, Norm::euclidean)) <=
          1e-12);
    // Multiple planes compose in order; out-of-range or degenerate planes fail.
    NonexpansiveOp two = NonexpansiveOp::rotation(3, {{0, 1, 0.5}, {1, 2, -0.25}});
    CHECK(two.dim() == 3);
    CHECK_THROWS_AS(NonexpansiveOp::rotation(2, {{0, 2, 0.5}}), ShapeError);
    CHECK_THROWS_AS(NonexpansiveOp::rotation(2, {{1, 1, 0.5}}), ShapeError);
}

TEST_CASE("averaged affine") {
    // Pure contraction A = I/2, b = 0.
    NonexpansiveOp half =
        NonexpansiveOp::averaged_affine(2, {0.5, 0.0, 0.0, 0.5}, {0.0, 0.0});
    CHECK(half.linear());
    CHECK(half.id() == "linear_affine");
    CHECK(half.apply(Vec{2.0, -4.0}) == Vec{1.0, -2.0});
    // Nonzero offset is affine, not linear.
    NonexpansiveOp shift =
        NonexpansiveOp::averaged_affine(2, {1.0, 0.0, 0.0, 1.0}, {1.0, 0.0});
    CHECK_FALSE(shift.linear());
    CHECK(shift.id() == "affine");
    CHECK(shift.apply(Vec{0.0, 3.0}) == Vec{1.0, 3.0});
    CHECK_THROWS_AS(NonexpansiveOp::averaged_affine(2, {1.0, 0.0, 0.0}, {0.0, 0.0}),
                    ShapeError);
}

TEST_CASE("composition") {
    // Rotate by 90 degrees, then clamp to the upper half plane box.
    NonexpansiveOp rot = NonexpansiveOp::rotation(2, {{0, 1, M_PI / 2}});
    NonexpansiveOp box = NonexpansiveOp::box_projection({-10.0, 0.0}, {10.0, 10.0});
    NonexpansiveOp comp = NonexpansiveOp::composition({rot, box});
    // (0,-1) -rot-> (1, 0) -box-> (1, 0): front stage runs first.
    Vec r = comp.apply(Vec{0.0, -1.0});
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == 0.0);
    // Reversed order gives a different answer: (0,-1) -box-> (0,0) -rot-> (0,0).
    NonexpansiveOp rev = NonexpansiveOp::composition({box, rot});
    Vec r2 = rev.apply(Vec{0.0, -1.0});
    CHECK(std::abs(r2[0]) <= 1e-15);
    CHECK(std::abs(r2[1]) <= 1e-15);

    CHECK_THROWS_AS(NonexpansiveOp::composition({}), ShapeError);
    CHECK_THROWS_AS(
        NonexpansiveOp::composition({rot, NonexpansiveOp::identity(3)}), ShapeError);
    CHECK_THROWS_AS(
        NonexpansiveOp::composition({rot, NonexpansiveOp::identity(2, Norm::max)}),
        PreconditionError);
}

TEST_CASE("sampled nonexpansiveness vets honest and dishonest claims") {
    // A genuine projection passes every sampled pair.
    NonexpansiveOp p = NonexpansiveOp::ball_projection({0.0, 0.0}, 1.0);
    VerificationReport ok = check_nonexpansive(p, 1000, 7);
    CHECK(ok.all_passed());
    CHECK(find(ok, "nonexpansive").status == CheckStatus::pass);
    CHECK(find(ok, "invariant_ball").status == CheckStatus::skipped);

    // A = 2I expands and is caught.
    NonexpansiveOp dbl =
        NonexpansiveOp::averaged_affine(2, {2.0, 0.0, 0.0, 2.0}, {0.0, 0.0});
    VerificationReport bad = check_nonexpansive(dbl, 200, 7);
    CHECK(find(bad, "nonexpansive").status == CheckStatus::fail);

    // A = 1.5I with a falsely declared invariant ball: images of points near
    // the boundary escape.
    NonexpansiveOp escape =
        NonexpansiveOp::averaged_affine(2, {1.5, 0.0, 0.0, 1.5}, {0.0, 0.0})
            .with_invariant_radius(1.0);
    VerificationReport esc = check_nonexpansive(escape, 500, 7);
    CHECK(find(esc, "invariant_ball").status == CheckStatus::fail);

    // An honestly declared ball passes both checks.
    NonexpansiveOp honest = p.with_invariant_radius(1.0);
    VerificationReport hb = check_nonexpansive(honest, 500, 7);
    CHECK(hb.all_passed());
    CHECK(find(hb, "invariant_ball").status == CheckStatus::pass);
}

TEST_CASE("sampled check is deterministic and thread-count independent") {
    // A strict contraction (0.9 x rotation) leaves seed-dependent slack in the
    // report, so matching details really do mean matching samples.
    const double c9 = 0.9 * std::cos(0.7), s9 = 0.9 * std::sin(0.7);
    NonexpansiveOp op =
        NonexpansiveOp::averaged_affine(2, {c9, -s9, s9, c9}, {0.0, 0.0})
            .with_invariant_radius(2.0);
    VerificationReport a = check_nonexpansive(op, 2000, 42);
    VerificationReport b = check_nonexpansive(op, 2000, 42);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].status == b.checks[i].status);
        CHECK(a.checks[i].detail == b.checks[i].detail); // worst slack bit-identical
    }
    // Different seed, different worst pair.
    VerificationReport c = check_nonexpansive(op, 2000, 43);
    CHECK(find(a, "nonexpansive").detail != find(c, "nonexpansive").detail);
}

TEST_CASE("max and sum norm operators") {
    // Box projections are nonexpansive in the max norm too; declare and vet.
    NonexpansiveOp box =
        NonexpansiveOp::rotation(2, {{0, 1, 1.0}}, Norm::max);
    // A rotation by 1 rad is *not* nonexpansive under the max norm; the
    // sampler should find an expanding pair.
    VerificationReport r = check_nonexpansive(box, 2000, 11);
    CHECK(find(r, "nonexpansive").status == CheckStatus::fail);

    NonexpansiveOp id_sum = NonexpansiveOp::identity(2, Norm::sum);
    CHECK(check_nonexpansive(id_sum, 100, 1).all_passed());
}
