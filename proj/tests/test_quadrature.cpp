#include <doctest.h>

#include <cmath>

#include "betapot/quadrature.hpp"

using namespace betapot;

namespace {
const double kPi = std::acos(-1.0);
const BetaParams kIso = make_beta_params({0.5, 0.5});
const QuadratureConfig kQuad;
}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    const Quad1D& q = gauss_legendre(5);
    REQUIRE(q.x.size() == 5);
    double m8 = 0, m2 = 0, m0 = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        m0 += q.w[i];
        m2 += q.w[i] * std::pow(q.x[i], 2);
        m8 += q.w[i] * std::pow(q.x[i], 8);  // degree 8 <= 2*5-1
    }
    CHECK(m0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(m8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("ball volumes match closed forms") {
    CHECK(geometry_for(kIso, 32).ball_volume(1.0) ==
          doctest::Approx(kPi).epsilon(1e-10));
    CHECK(geometry_for(make_beta_params({0.5, 0.5, 0.5}), 16).ball_volume(1.0) ==
          doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-8));
    // diamond |x1| + |x2| < r has area 2 r^2
    CHECK(geometry_for(make_beta_params({1.0, 1.0}), 32).ball_volume(2.0) ==
          doctest::Approx(8.0).epsilon(1e-10));
    // for beta = (1, 3/2): area 1.6 r^2
    CHECK(geometry_for(make_beta_params({1.0, 1.5}), 32).ball_volume(1.0) ==
          doctest::Approx(1.6).epsilon(1e-9));
}

TEST_CASE("co-area constants match closed forms") {
    CHECK(geometry_for(kIso, 32).coarea_constant() ==
          doctest::Approx(2.0 * kPi).epsilon(1e-10));
    CHECK(geometry_for(make_beta_params({1.0, 1.0}), 32).coarea_constant() ==
          doctest::Approx(4.0).epsilon(1e-10));
    CHECK(geometry_for(make_beta_params({1.0, 1.5}), 32).coarea_constant() ==
          doctest::Approx(3.2).epsilon(1e-9));
}

TEST_CASE("singular radial kernels integrate in closed form") {
    ScalarField one = make_field("const", {}, kIso);
    // int_{B(0,1)} |y|^{-1/2} dy = 2 pi int_0^1 t^{1/2} dt = 4 pi / 3
    IntegralResult r = integrate_singular(one, 0.5, {0, 0}, 1.0, kIso, kQuad);
    CHECK(r.value == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-8));

    // off-center singular field: int_{B(c,1)} |y|^{-1/4} dy stays finite and
    // close to the centered value for a far-away center
    ScalarField pw = make_field("power", {{"radius", 8.0}}, kIso);
    IntegralResult c0 = integrate_ball(pw, {0, 0}, 0.5, kIso, kQuad);
    CHECK(c0.value ==
          doctest::Approx(2.0 * kPi * std::pow(0.5, 1.75) / 1.75).epsilon(1e-8));
}

TEST_CASE("annulus integral equals the difference of ball integrals") {
    ScalarField g = make_field("gaussian", {}, kIso);
    double outer = integrate_ball(g, {0.1, 0.2}, 1.0, kIso, kQuad).value;
    double inner = integrate_ball(g, {0.1, 0.2}, 0.5, kIso, kQuad).value;
    double ann = integrate_annulus(g, {0.1, 0.2}, 0.5, 1.0, kIso, kQuad).value;
    CHECK(ann == doctest::Approx(outer - inner).epsilon(1e-8));
}

TEST_CASE("log-power segments and tails") {
    CHECK(log_power_segment(0.0, 0.0, 0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(log_power_segment(-1.0, 0.0, 0.25, 0.5) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-13));
    // int_0^h t^E dt = h^{E+1} / (E+1)
    CHECK(log_power_tail(0.5, 0.0, 0.3) ==
          doctest::Approx(std::pow(0.3, 1.5) / 1.5).epsilon(1e-13));
    // int_0^{e^{-1}} t^{-1} (-log t)^{-2} dt = 1 exactly
    CHECK(log_power_tail(-1.0, 2.0, std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(log_power_tail(-1.5, 0.0, 0.5), DivergenceError);
    CHECK_THROWS_AS(log_power_tail(-1.0, 1.0, 0.5), DivergenceError);
}

TEST_CASE("weighted log-power tails fold the weight's near-zero model") {
    WeightFn w = make_weight("power", {{"alpha", 0.5}});
    // int_0^h t^{0.5} dt via the weight path
    CHECK(weighted_log_power_tail(0.0, 0.0, &w, 0.25) ==
          doctest::Approx(std::pow(0.25, 1.5) / 1.5).epsilon(1e-10));
    CHECK(weighted_log_power_tail(0.0, 0.0, nullptr, 0.25) ==
          doctest::Approx(0.25).epsilon(1e-13));
    WeightFn lp = make_weight("logpow", {{"alpha", 0.0}, {"m", 2.0}});
    // kernel t^{-1} divided by (-log t)^{-2}... i.e. M = -2 from the weight
    // inverse: here we integrate t^{-1} * w with w = (-log t)^{-2}: exact 1
    CHECK(weighted_log_power_tail(-1.0, 0.0, &lp, std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("centered radial models integrate analytically against kernels") {
    const BetaGeometry& geo = geometry_for(kIso, 32);
    RadialModel m{2.0, 0.25, 0.0};  // 2 t^{-1/4}
    Kernel ker;
    ker.s = 0.5;
    // 2 pi * 2 * int_0^r t^{1 - 0.25 - 0.5} dt
    double expect = 2.0 * kPi * 2.0 * std::pow(0.5, 1.25) / 1.25;
    CHECK(radial_model_kernel_integral(m, ker, 0.5, geo) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("Monte Carlo agrees with chart quadrature within 3 sigma") {
    for (const auto& beta : {std::vector<double>{1.0, 1.0}, {1.0, 1.5}}) {
        BetaParams bp = make_beta_params(beta);
        ScalarField g = make_field("gaussian", {}, bp);
        double chart = integrate_ball(g, {0, 0}, 1.0, bp, kQuad).value;
        Rng rng(123);
        McResult mc = mc_integrate_ball(g, {0, 0}, 1.0, bp, rng, 200000);
        CHECK(std::abs(mc.value - chart) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("Monte Carlo is deterministic for a fixed seed") {
    ScalarField g = make_field("gaussian", {}, kIso);
    Rng r1(99), r2(99);
    McResult a = mc_integrate_ball(g, {0, 0}, 1.0, kIso, r1, 50000);
    McResult b = mc_integrate_ball(g, {0, 0}, 1.0, kIso, r2, 50000);
    CHECK(a.value == b.value);
    CHECK(a.accepted == b.accepted);
}

TEST_CASE("quadrature configuration is validated") {
    QuadratureConfig bad;
    bad.angular_order = 1;
    CHECK_THROWS_AS(bad.validate(), ContractError);
    QuadratureConfig bad2;
    bad2.rel_tol = 0.0;
    CHECK_THROWS_AS(bad2.validate(), ContractError);
}

TEST_CASE("divergent kernel exponents raise divergence errors") {
    ScalarField one = make_field("const", {}, kIso);
    CHECK_THROWS_AS(integrate_singular(one, 2.5, {0, 0}, 1.0, kIso, kQuad),
                    DivergenceError);
}
