#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "betapot/spaces.hpp"

using namespace betapot;

namespace {
const double kPi = std::acos(-1.0);
const BetaParams kIso = make_beta_params({0.5, 0.5});

QuadratureConfig quick() {
    QuadratureConfig q;
    q.angular_order = 24;
    q.radial_order = 32;
    return q;
}
}  // namespace

TEST_CASE("dyadic ladders halve from the top radius") {
    std::vector<double> r = dyadic_ladder(1.0, 3);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == 1.0);
    CHECK(r[3] == 0.125);
    CHECK_THROWS_AS(dyadic_ladder(-1.0, 3), ContractError);
    CHECK_THROWS_AS(dyadic_ladder(1.0, 0), ContractError);
}

TEST_CASE("kernel exponent conventions") {
    BetaParams bp = make_beta_params({1.0, 1.5});  // a = 2.5
    CHECK(kernel_exponent(1.5, bp, ExponentConvention::generalized) ==
          doctest::Approx(0.5 * 2.5).epsilon(1e-15));
    CHECK(kernel_exponent(1.5, bp, ExponentConvention::classical) ==
          doctest::Approx(0.5).epsilon(1e-15));
    // the two coincide when a = 1
    CHECK(kernel_exponent(1.5, kIso, ExponentConvention::generalized) ==
          doctest::Approx(
              kernel_exponent(1.5, kIso, ExponentConvention::classical))
              .epsilon(1e-15));
}

TEST_CASE("modulus of a constant field matches the closed form") {
    ScalarField f = make_field("boxconst", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    ModulusCurve eta =
        stummel_modulus(f, 1.5, kIso, grid, 1.0, 6, quick(), nullptr,
                        ExponentConvention::generalized);
    REQUIRE(eta.rungs() == 7);
    for (std::size_t j = 0; j < eta.rungs(); ++j) {
        double oracle = (4.0 * kPi / 3.0) * std::pow(eta.radii[j], 1.5);
        CHECK(eta.values[j] == doctest::Approx(oracle).epsilon(5e-3));
    }
    // monotone nondecreasing in r by construction
    for (std::size_t j = 0; j + 1 < eta.rungs(); ++j)
        CHECK(eta.values[j] >= eta.values[j + 1]);
}

TEST_CASE("modulus of the singular power field peaks at its singularity") {
    ScalarField f = make_field("power", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    ModulusCurve eta =
        stummel_modulus(f, 1.5, kIso, grid, 0.5, 5, quick(), nullptr,
                        ExponentConvention::generalized);
    for (std::size_t j = 0; j < eta.rungs(); ++j) {
        // sup at the singular center: 2 pi r^{1.25} / 1.25
        double oracle = 2.0 * kPi * std::pow(eta.radii[j], 1.25) / 1.25;
        CHECK(eta.values[j] == doctest::Approx(oracle).epsilon(1e-2));
    }
}

TEST_CASE("weighted modulus divides the kernel by the weight") {
    ScalarField f = make_field("boxconst", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    WeightFn w = make_weight("power", {{"alpha", 1.0}});
    ModulusCurve xi = stummel_modulus(f, 1.5, kIso, grid, 0.5, 5, quick(), &w,
                                      ExponentConvention::generalized);
    for (std::size_t j = 0; j < xi.rungs(); ++j) {
        // kernel t^{-1/2} / t = t^{-3/2}: 2 pi r^{1/2} / (1/2) = 4 pi sqrt(r)
        double oracle = 4.0 * kPi * std::sqrt(xi.radii[j]);
        CHECK(xi.values[j] == doctest::Approx(oracle).epsilon(5e-3));
    }
}

TEST_CASE("divergent weighted modulus raises a divergence error") {
    ScalarField v = make_example1_field(kIso);
    CenterGrid grid = make_center_grid(v, kIso, 3, std::exp(-3.0));
    WeightFn phi = make_weight("power", {{"alpha", 1.0}});
    CHECK_THROWS_AS(stummel_modulus(v, 1.5, kIso, grid, std::exp(-3.0), 4,
                                    quick(), &phi,
                                    ExponentConvention::generalized),
                    DivergenceError);
}

TEST_CASE("dyadic comparison constant: closed form vs direct series") {
    double a = 1.0;
    double got = lemma1_constant(2.0, 1.5, 1.75, a);
    double series = 0.0;
    for (int k = 0; k < 400; ++k)
        series += std::exp2(k * a * ((2.0 - 1.5) - 1.75));
    double oracle = std::exp2((2.0 - 1.5) * a) * series;
    CHECK(got == doctest::Approx(oracle).epsilon(1e-13));

    // diverges as lambda approaches n - p from above, decreases in lambda
    CHECK(lemma1_constant(2.0, 1.5, 0.6, 1.0) > lemma1_constant(2.0, 1.5, 0.8, 1.0));
    CHECK(lemma1_constant(2.0, 1.5, 0.51, 1.0) > 100.0);
    CHECK_THROWS_AS(lemma1_constant(2.0, 1.5, 0.5, 1.0), ContractError);
}

TEST_CASE("doubling constant of a sampled curve") {
    ModulusCurve c;
    c.kind = "eta";
    c.radii = {1.0, 0.5, 0.25};
    c.values = {4.0, 1.0, 0.25};
    c.argmax = {-1, -1, -1};
    CHECK(doubling_constant(c) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("Morrey quotient of the power field is exactly flat at critical lambda") {
    ScalarField f = make_field("power", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    // lambda = (n - s)/a = 1.75 makes r^{-a lambda} int_{B(0,r)} |y|^{-1/4} constant
    MorreyResult r = morrey_quotient(f, 1.75, kIso, grid, 0.5, 5, quick());
    CHECK_FALSE(r.growing);
    CHECK(std::abs(r.fitted_exponent) < 0.02);
    double oracle = 2.0 * kPi / 1.75;
    CHECK(r.norm == doctest::Approx(oracle).epsilon(1e-2));
}

TEST_CASE("growing Morrey quotient is classified and the norm diverges") {
    ScalarField f = make_field("power", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    MorreyResult r = morrey_quotient(f, 1.9, kIso, grid, 0.5, 6, quick());
    CHECK(r.growing);
    CHECK(r.fitted_exponent > 0.05);
    CHECK_THROWS_AS(morrey_norm(f, 1.9, kIso, grid, 0.5, 6, quick()),
                    DivergenceError);
}

TEST_CASE("Morrey-to-Stummel domination holds for a constant field") {
    ScalarField f = make_field("boxconst", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    Lemma1Result r = check_lemma1(f, 1.5, 1.75, kIso, grid, 0.5, 6, quick(),
                                  ExponentConvention::generalized);
    REQUIRE_FALSE(r.skipped);
    CHECK(r.pass);
    CHECK(r.max_ratio <= 1.0);
    CHECK(r.constant == doctest::Approx(lemma1_constant(2, 1.5, 1.75, 1.0)));
}

TEST_CASE("domination check skips honestly when the Morrey norm is infinite") {
    BetaParams bp = make_beta_params({1.0, 1.5});  // a lambda = 4.375 > n
    ScalarField f = make_field("boxconst", {}, bp);
    CenterGrid grid = make_center_grid(f, bp, 3, 1.0);
    Lemma1Result r = check_lemma1(f, 1.5, 1.75, bp, grid, 0.5, 5, quick(),
                                  ExponentConvention::generalized);
    CHECK(r.skipped);
    CHECK_FALSE(r.reason.empty());
}

TEST_CASE("sharpness probe recovers the power-field decay rate") {
    ScalarField f = make_field("power", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    Lemma1ConverseResult r = check_lemma1_converse(f, 1.5, 1.25, kIso, grid, 0.5,
                                                   6, quick(),
                                                   ExponentConvention::generalized);
    if (r.conclusive) {
        CHECK(r.pass);
        CHECK(r.fitted_slope ==
              doctest::Approx(r.expected_slope).epsilon(0.05));
    }
}

TEST_CASE("curve CSV round-trips") {
    ModulusCurve c;
    c.kind = "eta";
    for (int j = 0; j <= 6; ++j) {
        c.radii.push_back(std::ldexp(1.0, -j));
        c.values.push_back(std::pow(c.radii.back(), 1.5) * kPi);
        c.argmax.push_back(j % 3);
    }
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_curve_test.csv").string();
    write_curve_csv(c, path);
    ModulusCurve d = read_curve_csv(path);
    std::remove(path.c_str());
    REQUIRE(d.rungs() == c.rungs());
    for (std::size_t j = 0; j < c.rungs(); ++j) {
        CHECK(d.radii[j] == doctest::Approx(c.radii[j]).epsilon(1e-11));
        CHECK(d.values[j] == doctest::Approx(c.values[j]).epsilon(1e-11));
        CHECK(d.argmax[j] == c.argmax[j]);
    }
}

TEST_CASE("log-log interpolation is exact on power laws") {
    ModulusCurve c;
    c.kind = "eta";
    for (int j = 0; j <= 6; ++j) {
        c.radii.push_back(std::ldexp(1.0, -j));
        c.values.push_back(3.0 * std::pow(c.radii.back(), 1.25));
    }
    c.argmax.assign(c.radii.size(), -1);
    for (double r : {0.7, 0.1, 2.0, 0.001})
        CHECK(c.value_at(r) == doctest::Approx(3.0 * std::pow(r, 1.25)).epsilon(1e-12));
}

TEST_CASE("center grids include the distinguished points") {
    ScalarField f = make_field("power", {}, kIso);
    CenterGrid g = make_center_grid(f, kIso, 3, 1.0);
    bool has_origin = false;
    for (const Point& c : g.centers)
        if (c[0] == 0.0 && c[1] == 0.0) has_origin = true;
    CHECK(has_origin);
    CHECK(g.centers.size() >= 9);
}
