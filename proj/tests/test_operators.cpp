#include <doctest.h>

#include <cmath>

#include "betapot/operators.hpp"

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

TEST_CASE("covering radius from declared supports") {
    ScalarField b = make_field("ballconst", {{"radius", 0.5}}, kIso);
    CHECK(covering_radius(b, {0, 0}, kIso) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(covering_radius(b, {1, 0}, kIso) ==
          doctest::Approx(kIso.k * 1.5).epsilon(1e-12));
    ScalarField c = make_field("const", {}, kIso);
    CHECK_THROWS_AS(covering_radius(c, {0, 0}, kIso), ContractError);
}

TEST_CASE("fractional integral of an indicator at its center") {
    ScalarField b = make_field("ballconst", {{"radius", 1.0}}, kIso);
    // I_{1.5}(1)(0) = int_{B(0,1)} |y|^{-1/2} dy = 4 pi / 3
    IntegralResult r = frac_integral(b, 1.5, {0, 0}, kIso, quick());
    CHECK(r.value == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-6));
}

TEST_CASE("weighted fractional integral reduces to the plain one for h = 1") {
    ScalarField b = make_field("ballconst", {{"radius", 1.0}}, kIso);
    WeightFn h = make_weight("power", {{"alpha", 0.0}});
    double plain = frac_integral(b, 1.5, {0.2, 0.1}, kIso, quick()).value;
    double gen = gen_frac_integral(b, 1.5, h, {0.2, 0.1}, kIso, quick()).value;
    CHECK(gen == doctest::Approx(plain).epsilon(1e-9));
}

TEST_CASE("weighted fractional integral divides the kernel by h") {
    ScalarField b = make_field("ballconst", {{"radius", 1.0}}, kIso);
    WeightFn h = make_weight("power", {{"alpha", 0.5}});
    // kernel t^{-1/2} / t^{1/2} = t^{-1}: int over B(0,1) = 2 pi
    double gen = gen_frac_integral(b, 1.5, h, {0, 0}, kIso, quick()).value;
    CHECK(gen == doctest::Approx(2.0 * kPi).epsilon(1e-6));
}

TEST_CASE("gradient field wraps the registered gradient magnitude") {
    ScalarField u = make_field("bump", {{"radius", 0.5}}, kIso);
    ScalarField g = gradient_field(u);
    for (double x : {0.1, 0.3}) {
        CHECK(g({x, 0.05}) ==
              doctest::Approx(u.gradient_magnitude({x, 0.05})).epsilon(1e-12));
    }
    CHECK(g.support_ball.has_value());
}

TEST_CASE("mu curve reproduces the closed form for a power-law modulus") {
    ModulusCurve eta;
    eta.kind = "eta";
    for (int j = 0; j <= 8; ++j) {
        eta.radii.push_back(std::ldexp(1.0, -j));
        eta.values.push_back(eta.radii.back());  // eta(t) = t
    }
    eta.argmax.assign(eta.radii.size(), -1);
    MuCurve mu = mu_curve(eta, 0.5, 1.0);
    for (std::size_t j = 0; j < mu.mu.rungs(); ++j) {
        // (2/C) int_0^r t^{-1/2} dt = 4 sqrt(r)
        double oracle = 4.0 * std::sqrt(mu.mu.radii[j]);
        CHECK(mu.mu.values[j] == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(mu.lower[j] <= mu.mu.values[j] * (1 + 1e-12));
        CHECK(mu.mu.values[j] <= mu.upper[j] * (1 + 1e-12));
    }
}

TEST_CASE("mu curve detects a non-integrable modulus") {
    ModulusCurve eta;
    eta.kind = "eta";
    for (int j = 0; j <= 6; ++j) {
        eta.radii.push_back(std::ldexp(1.0, -j));
        eta.values.push_back(1.0);  // eta constant: t^{-1} integral diverges
    }
    eta.argmax.assign(eta.radii.size(), -1);
    CHECK_THROWS_AS(mu_curve(eta, 0.5, 1.0), DivergenceError);
}

TEST_CASE("growth function closed forms for a power-law weight") {
    WeightFn phi = make_weight("power", {{"alpha", 1.0}});
    GrowthFunction gf = build_growth_function(phi, 0.5, 1.5, kIso);
    // snp = 1/2: Phi(eps) = eps^{3/2}, psi(t) = 2 t^{2/3}, G(s) = (s/2)^{3/2}
    CHECK(gf.snp == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gf.Phi(4.0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(gf.Phi_inv(8.0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(gf.psi(1.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(gf.psi(8.0) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(gf.G(8.0) == doctest::Approx(8.0).epsilon(1e-8));
    CHECK(gf.G(4.0) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-8));
    CHECK(gf.roundtrip_max_rel_err() <= 1e-8);
    CHECK(gf.superlinear(gf.s_ceil() / 100.0, gf.s_ceil()));
}

TEST_CASE("growth function closed forms for a log-power weight") {
    WeightFn phi = make_weight("logpow", {{"alpha", 0.0}, {"m", 4.0}});
    GrowthFunction gf = build_growth_function(phi, 0.5, 2.0, kIso);
    // snp = 0: psi(t) = 2 sqrt(t), G(s) = (s/2)^2 on the constructed domain
    CHECK(gf.snp == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(gf.psi(4.0) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(gf.G(4.0) == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(gf.G(8.0) == doctest::Approx(16.0).epsilon(1e-7));
    CHECK(gf.roundtrip_max_rel_err() <= 1e-8);
}

TEST_CASE("the two terms balance at the chosen epsilon") {
    WeightFn phi = make_weight("power", {{"alpha", 1.0}});
    GrowthFunction gf = build_growth_function(phi, 0.5, 1.5, kIso);
    for (double fnorm : {0.5, 2.0}) {
        for (double iphi : {1.0, 10.0}) {
            BalanceCheck b = growth_balance(gf, fnorm, iphi);
            CHECK(b.rel_err <= 1e-6);
            CHECK(b.term1 == doctest::Approx(b.term2).epsilon(1e-5));
        }
    }
}

TEST_CASE("pointwise split saturates for the equality configuration") {
    ScalarField f = make_field("ballconst", {{"radius", 1.0}}, kIso);
    WeightFn h = make_weight("power", {{"alpha", 1.0}});
    double ratio = lemma4_ratio(f, 2.0, h, {0, 0}, kIso, quick(),
                                ExponentConvention::classical);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pointwise split holds at sampled points") {
    ScalarField f = make_field("bump", {{"radius", 0.5}}, kIso);
    WeightFn h = make_weight("power", {{"alpha", 0.5}});
    Lemma4Result r = check_lemma4(f, 2.0, h, kIso, quick(), 12, 5,
                                  ExponentConvention::classical);
    CHECK(r.pass);
    CHECK(r.violations == 0);
    CHECK(r.npoints > 0);
}

TEST_CASE("eta^gamma-weighted modulus is dominated by the mu curve") {
    ScalarField f = make_field("boxconst", {}, kIso);
    CenterGrid grid = make_center_grid(f, kIso, 3, 1.0);
    Lemma3Result r = check_lemma3(f, 1.5, 0.5, kIso, grid, 0.5, 6, quick(),
                                  ExponentConvention::generalized);
    REQUIRE_FALSE(r.skipped);
    CHECK(r.pass);
    CHECK(r.sandwich_ok);
    CHECK(r.doubling > 1.0);
}

TEST_CASE("pointwise Sobolev ratio matches the planar closed form") {
    ScalarField u = make_field("bump", {{"radius", 0.5}}, kIso);
    SobolevResult r = check_sobolev_pointwise(u, kIso, quick(), 8, 3,
                                              ExponentConvention::classical);
    CHECK(r.pass);
    CHECK(r.oracle == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(r.center_ratio == doctest::Approx(r.oracle).epsilon(0.2));
}
