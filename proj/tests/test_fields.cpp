#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "betapot/fields.hpp"

using namespace betapot;

namespace {
const BetaParams kIso = make_beta_params({0.5, 0.5});
}

TEST_CASE("registry fields evaluate and respect their supports") {
    ScalarField f = make_field("boxconst", {{"c", 2.0}, {"half", 1.0}}, kIso);
    CHECK(f({0.5, -0.5}) == 2.0);
    CHECK(f({1.5, 0.0}) == 0.0);
    REQUIRE(f.support_box.has_value());

    ScalarField b = make_field("ballconst", {{"radius", 0.5}}, kIso);
    CHECK(b({0.2, 0.0}) == 1.0);
    CHECK(b({0.6, 0.0}) == 0.0);
    REQUIRE(b.support_ball.has_value());
    CHECK(b.support_ball->radius == 0.5);

    ScalarField g = make_field("gaussian", {{"width", 0.5}}, kIso);
    CHECK(g({0, 0}) == doctest::Approx(1.0));
    CHECK(g({1, 0}) < 1.0);

    ScalarField u = make_field("bump", {{"radius", 0.5}}, kIso);
    CHECK(u({0, 0}) > 0.0);
    CHECK(u({0.5, 0}) == 0.0);
    CHECK(u.grad_mag_fn != nullptr);
}

TEST_CASE("power field carries an exact singular model") {
    ScalarField f = make_field("power", {}, kIso);  // |x|^{-1/4} on |x| < 1
    CHECK(f({0.5, 0.0}) == doctest::Approx(std::pow(0.5, -0.25)).epsilon(1e-14));
    CHECK(f({1.5, 0.0}) == 0.0);
    REQUIRE(f.singularities.size() == 1);
    CHECK(f.singularities[0].exact_model);
    CHECK(f.singularities[0].model.power == doctest::Approx(0.25));
    CHECK(f.is_singular_at({0, 0}));
    CHECK_THROWS_AS(f({0, 0}), DomainError);
}

TEST_CASE("log-singular example field: value, cutoff, model") {
    ScalarField v = make_example1_field(kIso);
    double t = std::exp(-4.0);
    // |x|^{-2} |log|x||^{-6} at |x| = e^{-4}: e^8 / 4^6
    CHECK(v({t, 0.0}) == doctest::Approx(std::exp(8.0) / 4096.0).epsilon(1e-12));
    CHECK(v({std::exp(-2.0), 0.0}) == 0.0);  // outside the delta = e^{-3} cutoff
    REQUIRE(v.singularities.size() == 1);
    CHECK(v.singularities[0].model.power == doctest::Approx(2.0));
    CHECK(v.singularities[0].model.log_power == doctest::Approx(6.0));
    CHECK(v.singularities[0].exact_model);
}

TEST_CASE("power transforms of fields keep models exact") {
    ScalarField f = make_field("power", {}, kIso);
    ScalarField f2 = pow_field(f, 2.0);
    CHECK(f2({0.5, 0.0}) == doctest::Approx(std::pow(0.5, -0.5)).epsilon(1e-14));
    REQUIRE(f2.singularities.size() == 1);
    CHECK(f2.singularities[0].model.power == doctest::Approx(0.5));

    ScalarField v = pow_field(make_example1_field(kIso), 0.5);
    double t = std::exp(-4.0);
    CHECK(v({t, 0.0}) ==
          doctest::Approx(std::sqrt(std::exp(8.0) / 4096.0)).epsilon(1e-12));
}

TEST_CASE("unknown ids and bad parameters are rejected") {
    CHECK_THROWS_AS(make_field("nope", {}, kIso), ContractError);
    CHECK_THROWS_AS(make_field("gaussian", {{"width", -1.0}}, kIso), ContractError);
    CHECK_THROWS_AS(make_weight("nope", {}), ContractError);
}

TEST_CASE("weights: power, logpow, composition") {
    WeightFn w = make_weight("power", {{"alpha", 0.5}});
    CHECK(w(0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w.near_zero.power == doctest::Approx(-0.5));

    WeightFn lp = make_weight("logpow", {{"alpha", 0.0}, {"m", 4.0}});
    CHECK(lp(std::exp(-2.0)) == doctest::Approx(std::pow(2.0, -4.0)).epsilon(1e-13));
    CHECK(lp.domain_max == doctest::Approx(std::exp(-1.0)));

    WeightFn w2 = pow_weight(w, 3.0);
    CHECK(w2(0.25) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(w2.near_zero.power == doctest::Approx(-1.5));
}

TEST_CASE("curve weights interpolate power laws exactly") {
    std::vector<double> radii, values;
    for (int j = 0; j <= 8; ++j) {
        radii.push_back(std::ldexp(1.0, -j));
        values.push_back(std::pow(radii.back(), 1.5));
    }
    WeightFn w = make_curve_weight(radii, values, 2.0);
    // (t^{3/2})^2 = t^3 at rungs, between rungs, and beyond both ends
    for (double t : {1.0, 0.75, 0.01, 2.0, 1.0 / 1024.0})
        CHECK(w(t) == doctest::Approx(std::pow(t, 3.0)).epsilon(1e-12));
}

TEST_CASE("grid fields round-trip through files and interpolate") {
    GridData g;
    g.n = 2;
    g.dims = {5, 5};
    g.origin = {-1.0, -1.0};
    g.spacing = {0.5, 0.5};
    g.values.assign(25, 3.0);
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_grid_test.json").string();
    write_grid(path, g);
    GridData h = read_grid(path);
    CHECK(h.dims == g.dims);
    CHECK(h.values == g.values);
    std::remove(path.c_str());

    ScalarField f = make_grid_field(h);
    CHECK(f({0.1, 0.2}) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(f({5.0, 5.0}) == 0.0);
    CHECK(f.support_box.has_value());
}

TEST_CASE("gradient magnitude falls back to central differences") {
    ScalarField q = make_field("quadratic", {{"q", 1.0}}, kIso);
    // grad of x^2 + y^2 has magnitude 2|x|
    CHECK(q.gradient_magnitude({0.5, 0.0}) == doctest::Approx(1.0).epsilon(1e-6));

    ScalarField g = make_field("gaussian", {}, kIso);
    ScalarField plain = g;
    plain.grad_mag_fn = nullptr;
    for (double x : {0.2, 0.7}) {
        CHECK(plain.gradient_magnitude({x, 0.1}) ==
              doctest::Approx(g.gradient_magnitude({x, 0.1})).epsilon(1e-5));
    }
}
