#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halrates/config.hpp"
#include "halrates/errors.hpp"

using namespace halrates;

namespace {

long error_line(const std::string& text) {
    try {
        parse_toml(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("toml subset: scalars, tables, arrays") {
    TomlTable t = parse_toml(
        "title = \"neumann\\n\\\"quoted\\\"\"\n"
        "count = 42\n"
        "rate = -0.5\n"
        "big = 1e3\n"
        "on = true\n"
        "off = false\n"
        "\n"
        "# a comment\n"
        "[run]  # trailing comment\n"
        "eps = [1, 0.5, 0.25]\n"
        "[op.inner]\n"
        "rows = [[1.0, 0.0], [0.0, 1.0]]\n");
    REQUIRE(t.find("title") != nullptr);
    CHECK(t.find("title")->text == "neumann\n\"quoted\"");
    CHECK(t.find("count")->num == 42.0);
    CHECK(t.find("count")->text == "42"); // raw token preserved
    CHECK(t.find("rate")->num == -0.5);
    CHECK(t.find("big")->num == 1000.0);
    CHECK(t.find("on")->flag == true);
    CHECK(t.find("off")->flag == false);
    REQUIRE(t.sub("run") != nullptr);
    const TomlValue* eps = t.sub("run")->find("eps");
    REQUIRE(eps != nullptr);
    REQUIRE(eps->items.size() == 3);
    CHECK(eps->items[1].text == "0.5");
    REQUIRE(t.sub("op") != nullptr);
    REQUIRE(t.sub("op")->sub("inner") != nullptr);
    const TomlValue* rows = t.sub("op")->sub("inner")->find("rows");
    REQUIRE(rows != nullptr);
    REQUIRE(rows->items.size() == 2);
    CHECK(rows->items[0].items[1].num == 0.0);
}

TEST_CASE("toml subset: malformed inputs carry line numbers") {
    CHECK(error_line("a = 1\nb = = 2\n") == 2);
    CHECK(error_line("a = 1\na = 2\n") == 2);             // duplicate key
    CHECK(error_line("a = \"unterminated\n") == 1);
    CHECK(error_line("x = [1, 2\n") == 1);                // unterminated array
    CHECK(error_line("[table\na = 1\n") == 1);            // unterminated header
    CHECK(error_line("a = 1 trailing\n") == 1);
    CHECK(error_line("= 5\n") == 1);
    CHECK(error_line("a = 1\n[t]\nb = tru\n") == 3);      // bad literal
}

TEST_CASE("eps values parse as exact decimal rationals") {
    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[run]\nhorizon = 10\neps = [0.1, \"0.25\", 1, 2.5e-3]\n");
    REQUIRE(c.eps.size() == 4);
    CHECK(c.eps[0] == BigRat(1, 10)); // exact decimal, not the double 0.1
    CHECK(c.eps[1] == BigRat(1, 4));  // quoted decimals work too
    CHECK(c.eps[2] == BigRat(1));
    CHECK(c.eps[3] == BigRat(1, 400));
    CHECK(c.eps_text[0] == "0.1");
    // Non-decimal text is rejected with the offending field named.
    try {
        config_from_string("[schedule]\nkind = \"harmonic\"\n[run]\neps = [\"1/3\"]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.eps[0]") != std::string::npos);
    }
}

TEST_CASE("schedule section with claimed moduli") {
    ExperimentConfig c = config_from_string(
        "[schedule]\n"
        "kind = \"constant\"\n"
        "c = 0.5\n"
        "[schedule.claim_theta]\n"
        "form = \"poly\"\n"
        "coeff = 3\n"
        "power = 1\n");
    CHECK(c.schedule.id() == "constant(1/2)");
    CHECK(c.schedule.has_theta());
    CHECK(theta_of(c.schedule, BigInt(5)).value() == 15); // ceil(3 * 5)
    CHECK(c.schedule.theta().name() == "claimed.theta");
}

TEST_CASE("schedule kinds and claim validation") {
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"mystery\"\n"), ConfigError);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"constant\"\nc = 1.5\n"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"constant\"\n"), ConfigError);
    // inv_poly claimed alpha: alpha(eps) = ceil(coeff / eps^power) + offset.
    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[schedule.claim_alpha]\nform = \"inv_poly\"\ncoeff = 2\npower = 1\noffset = 3\n");
    CHECK(alpha_of(c.schedule, BigRat(1, 2)).value() == 7); // ceil(4) + 3
    CHECK(c.schedule.alpha().name() == "claimed.alpha");
    CHECK_THROWS_AS(
        config_from_string("[schedule]\nkind = \"harmonic\"\n"
                           "[schedule.claim_alpha]\nform = \"exp\"\ncoeff = 1\npower = 1\n"),
        ConfigError);
}

TEST_CASE("operator kinds build and validate") {
    ExperimentConfig rot = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[operator]\nkind = \"rotation\"\ndim = 2\nplanes = [[1, 2, 0.5]]\nradius = 1.0\n");
    REQUIRE(rot.op.has_value());
    CHECK(rot.op->dim() == 2);
    CHECK(rot.op->invariant_radius() == 1.0);

    // 1-based plane indices: 0 is invalid.
    CHECK_THROWS_AS(config_from_string(
                        "[schedule]\nkind = \"harmonic\"\n"
                        "[operator]\nkind = \"rotation\"\ndim = 2\nplanes = [[0, 1, 0.5]]\n"),
                    ConfigError);

    ExperimentConfig ball = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[operator]\nkind = \"ball_projection\"\ncenter = [0.0, 0.0]\nball_radius = 2.0\n");
    CHECK(ball.op->dim() == 2);

    ExperimentConfig aff = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[operator]\nkind = \"affine\"\nmatrix = [[0.5, 0.0], [0.0, 0.5]]\noffset = [0.0, 0.0]\n"
        "norm = \"max\"\n");
    CHECK(aff.op->norm() == Norm::max);
    CHECK(aff.op->linear());

    CHECK_THROWS_AS(
        config_from_string("[schedule]\nkind = \"harmonic\"\n[operator]\nkind = \"blob\"\n"),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_string("[schedule]\nkind = \"harmonic\"\n"
                           "[operator]\nkind = \"identity\"\ndim = 2\nnorm = \"spectral\"\n"),
        ConfigError);
}

TEST_CASE("composition stages order numerically") {
    // stage10 must come after stage2 (numeric suffix order, not lexicographic).
    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[operator]\nkind = \"composition\"\n"
        "[operator.stage2]\nkind = \"box_projection\"\nlo = [0.0]\nhi = [1.0]\n"
        "[operator.stage10]\nkind = \"affine\"\nmatrix = [[-1.0]]\noffset = [0.0]\n");
    REQUIRE(c.op.has_value());
    // Apply to 5: clamp -> 1, then negate -> -1. (Reversed order would give 0.)
    Vec r = c.op->apply(Vec{5.0});
    CHECK(r[0] == -1.0);
}

TEST_CASE("run section and anchor shape validation") {
    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[operator]\nkind = \"identity\"\ndim = 2\n"
        "[run]\niteration = \"km\"\nanchor = [1.0, 0.0]\nhorizon = 500\nseed = 9\n"
        "scalar_cap = 50\n");
    CHECK(c.iteration == IterationKind::km);
    CHECK(c.anchor == Vec{1.0, 0.0});
    CHECK(c.horizon == 500);
    CHECK(c.seed == 9);
    CHECK(c.scalar_cap == 50);

    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n"
                                       "[operator]\nkind = \"identity\"\ndim = 2\n"
                                       "[run]\nanchor = [1.0]\nhorizon = 5\n"),
                    ConfigError); // anchor dim != operator dim
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n"
                                       "[run]\nhorizon = 0\n"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n"
                                       "[run]\niteration = \"picard\"\nhorizon = 5\n"),
                    ConfigError);
}

TEST_CASE("bounds and verify sections") {
    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[bounds]\nM = 3\nd_C = 1.5\nD = 2\n"
        "[verify]\nhorizon = 1234\ntrials = 55\noracle_seeds = 7\neps = [0.5]\n");
    CHECK(c.M == BigInt(3));
    CHECK(c.d_C == BigRat(3, 2));
    CHECK(c.D == BigInt(2));
    CHECK(c.verify_horizon == 1234);
    CHECK(c.verify_trials == 55);
    CHECK(c.oracle_seeds == 7);
    REQUIRE(c.verify_eps.size() == 1);
    CHECK(c.verify_eps[0] == BigRat(1, 2));

    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n[bounds]\nM = 0\n"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n[bounds]\nM = 2.5\n"),
                    ConfigError); // must be an exact integer
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n[bounds]\nd_C = -1\n"),
                    ConfigError);
}

TEST_CASE("output section and defaults") {
    ExperimentConfig d = config_from_string("[schedule]\nkind = \"harmonic\"\n");
    CHECK(d.out_dir == "out");
    CHECK(d.want_json);
    CHECK(d.want_csv);
    CHECK(d.seed == 0);
    CHECK(d.scalar_cap == 1'000'000);
    CHECK_FALSE(d.op.has_value());
    CHECK_FALSE(d.horizon.has_value());

    ExperimentConfig c = config_from_string(
        "[schedule]\nkind = \"harmonic\"\n"
        "[output]\ndirectory = \"results\"\nformats = [\"json\"]\n");
    CHECK(c.out_dir == "results");
    CHECK(c.want_json);
    CHECK_FALSE(c.want_csv);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n"
                                       "[output]\nformats = [\"xml\"]\n"),
                    ConfigError);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\nwobble = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_string("[schedule]\nkind = \"harmonic\"\n[mystery]\nx = 1\n"),
                    ConfigError);
}

TEST_CASE("config digest: FNV-1a 64 reference vectors") {
    CHECK(config_digest("") == "cbf29ce484222325");
    CHECK(config_digest("a") == "af63dc4c8601ec8c");
    CHECK(config_digest("foobar") == "85944171f73967e8");
    // Digest covers the raw text: whitespace differences change it.
    CHECK(config_digest("a = 1\n") != config_digest("a  = 1\n"));
}
