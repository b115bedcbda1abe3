#include <doctest.h>

#include <cmath>

#include "betapot/metric.hpp"
#include "betapot/rng.hpp"

using namespace betapot;

TEST_CASE("isotropic beta reduces to the Euclidean distance") {
    BetaParams bp = make_beta_params({0.5, 0.5});
    CHECK(beta_distance({0, 0}, {3, 4}, bp) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(beta_distance({1, 1}, {1, 1}, bp) == 0.0);
    BetaParams bp3 = make_beta_params({0.5, 0.5, 0.5});
    CHECK(beta_distance({0, 0, 0}, {1, 2, 2}, bp3) ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("anisotropic distances match the defining formula") {
    BetaParams bp = make_beta_params({1.0, 1.0});
    // |x|_beta = (|x1| + |x2|)^{|beta|/n} with |beta|/n = 1
    CHECK(beta_distance({0, 0}, {3, 4}, bp) == doctest::Approx(7.0).epsilon(1e-14));

    BetaParams bq = make_beta_params({1.0, 1.5});
    double expect = std::pow(3.0 + std::pow(4.0, 2.0 / 3.0), 2.5 / 2.0);
    CHECK(beta_distance({0, 0}, {3, 4}, bq) ==
          doctest::Approx(expect).epsilon(1e-14));
    CHECK(bq.a == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("quasi-triangle constant closed forms") {
    CHECK(make_beta_params({0.5, 0.5}).k ==
          doctest::Approx(std::exp2(std::sqrt(3.0))).epsilon(1e-15));
    CHECK(make_beta_params({1.0, 1.0}).k == doctest::Approx(4.0).epsilon(1e-15));
    BetaParams bp = make_beta_params({1.0, 1.5});
    CHECK(quasi_triangle_constant(bp) == doctest::Approx(bp.k).epsilon(1e-15));
}

TEST_CASE("quasi-triangle inequality holds on random triples") {
    Rng rng(42);
    for (const auto& beta :
         {std::vector<double>{0.5, 0.5}, {1.0, 1.5}, {0.5, 2.0, 1.0}}) {
        BetaParams bp = make_beta_params(beta);
        for (int i = 0; i < 2000; ++i) {
            Point x(beta.size()), y(beta.size()), z(beta.size());
            for (std::size_t d = 0; d < beta.size(); ++d) {
                x[d] = rng.uniform(-3, 3);
                y[d] = rng.uniform(-3, 3);
                z[d] = rng.uniform(-3, 3);
            }
            double lhs = beta_distance(x, z, bp);
            double rhs = bp.k * (beta_distance(x, y, bp) + beta_distance(y, z, bp));
            CHECK(lhs <= rhs * (1 + 1e-14));
        }
    }
}

TEST_CASE("dilation scales the distance by t^{|beta|/n}") {
    BetaParams bp = make_beta_params({1.0, 0.5});
    Point d = dilate({1, 1}, 4.0, bp);
    CHECK(d[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-15));

    Rng rng(7);
    for (const auto& beta : {std::vector<double>{0.5, 0.5}, {1.0, 1.5}, {2.0}}) {
        BetaParams bq = make_beta_params(beta);
        double deg = bq.abs_beta / bq.n;
        for (int i = 0; i < 500; ++i) {
            Point x(beta.size()), y(beta.size());
            for (std::size_t k = 0; k < beta.size(); ++k) {
                x[k] = rng.uniform(-2, 2);
                y[k] = rng.uniform(-2, 2);
            }
            double t = rng.uniform(0.1, 10.0);
            double lhs = beta_distance(dilate(x, t, bq), dilate(y, t, bq), bq);
            double rhs = std::pow(t, deg) * beta_distance(x, y, bq);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_beta_params({}), ContractError);
    CHECK_THROWS_AS(make_beta_params({0.4, 0.5}), ContractError);
    CHECK_THROWS_AS(dilate({1.0}, -1.0, make_beta_params({0.5})), DomainError);
}

TEST_CASE("open-ball membership is strict") {
    BetaParams bp = make_beta_params({0.5, 0.5});
    CHECK(in_ball({0.5, 0}, {0, 0}, 1.0, bp));
    CHECK_FALSE(in_ball({1.0, 0}, {0, 0}, 1.0, bp));
    CHECK_FALSE(in_ball({1.5, 0}, {0, 0}, 1.0, bp));
}

TEST_CASE("spherical chart reproduces polar coordinates when isotropic") {
    BetaParams bp = make_beta_params({0.5, 0.5});
    BetaSphericalCoord c;
    c.rho = 2.0;
    c.angles = {0.7};
    c.signs = {1, 1};
    Point x = beta_sphere_map(c, bp);
    CHECK(x[0] == doctest::Approx(2.0 * std::cos(0.7)).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(2.0 * std::sin(0.7)).epsilon(1e-14));
    CHECK(beta_sphere_jacobian(c, bp) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(chart_angular_density({0.7}, bp) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("chart radius rho lands at distance rho^a from the origin") {
    Rng rng(11);
    for (const auto& beta : {std::vector<double>{0.5, 0.5}, {1.0, 1.5}}) {
        BetaParams bp = make_beta_params(beta);
        for (int i = 0; i < 200; ++i) {
            BetaSphericalCoord c;
            c.rho = rng.uniform(0.1, 3.0);
            c.angles = {rng.uniform(0.0, std::acos(-1.0) / 2)};
            c.signs = {rng.uniform() < 0.5 ? -1 : 1, rng.uniform() < 0.5 ? -1 : 1};
            Point x = beta_sphere_map(c, bp);
            CHECK(beta_norm(x, bp) ==
                  doctest::Approx(std::pow(c.rho, bp.a)).epsilon(1e-12));
        }
    }
}
