#include "betapot/metric.hpp"

#include <cmath>
#include <cstddef>

namespace betapot {

namespace {

void require_dim(const Point& x, const BetaParams& bp, const char* who) {
    if (static_cast<int>(x.size()) != bp.n)
        throw ContractError(std::string(who) + ": point dimension " +
                            std::to_string(x.size()) + " != n = " + std::to_string(bp.n));
}

/// pow with the convention 0^0 = 1 (limit of the vanishing Jacobian factor).
double pow_or_one(double base, double exponent) {
    if (exponent == 0.0) return 1.0;
    return std::pow(base, exponent);
}

}  // namespace

bool BetaParams::isotropic(double tol) const {
    for (double b : beta)
        if (std::fabs(b - 0.5) > tol) return false;
    return true;
}

BetaParams make_beta_params(std::vector<double> beta) {
    if (beta.empty()) throw ContractError("make_beta_params: beta must be non-empty");
    BetaParams bp;
    bp.n = static_cast<int>(beta.size());
    bp.beta_min = beta[0];
    for (double b : beta) {
        if (!(b >= 0.5 - 1e-15))
            throw ContractError("make_beta_params: every beta_i must be >= 1/2, got " +
                                format12(b));
        bp.abs_beta += b;
        if (b < bp.beta_min) bp.beta_min = b;
    }
    bp.beta = std::move(beta);
    bp.a = 2.0 * bp.abs_beta / bp.n;
    bp.k = quasi_triangle_constant(bp);
    return bp;
}

double quasi_triangle_constant(const BetaParams& bp) {
    // log2(k) first; avoids pow-of-pow rounding surprises.
    const double log2k = std::pow(1.0 + 1.0 / bp.beta_min, bp.abs_beta / bp.n);
    return std::exp2(log2k);
}

double beta_norm(const Point& x, const BetaParams& bp) {
    require_dim(x, bp, "beta_norm");
    double s = 0;
    for (int i = 0; i < bp.n; ++i) s += std::pow(std::fabs(x[i]), 1.0 / bp.beta[i]);
    return std::pow(s, bp.abs_beta / bp.n);
}

double beta_distance(const Point& x, const Point& y, const BetaParams& bp) {
    require_dim(x, bp, "beta_distance");
    require_dim(y, bp, "beta_distance");
    double s = 0;
    for (int i = 0; i < bp.n; ++i)
        s += std::pow(std::fabs(x[i] - y[i]), 1.0 / bp.beta[i]);
    return std::pow(s, bp.abs_beta / bp.n);
}

Point dilate(const Point& x, double t, const BetaParams& bp) {
    require_dim(x, bp, "dilate");
    if (!(t > 0)) throw DomainError("dilate: scale t must be positive");
    Point y(x.size());
    for (int i = 0; i < bp.n; ++i) y[i] = std::pow(t, bp.beta[i]) * x[i];
    return y;
}

bool in_ball(const Point& x, const Point& center, double r, const BetaParams& bp) {
    if (!(r > 0)) throw DomainError("in_ball: radius must be positive");
    return beta_distance(x, center, bp) < r;
}

std::vector<double> direction_components(const std::vector<double>& angles) {
    const int n = static_cast<int>(angles.size()) + 1;
    std::vector<double> w(n, 1.0);
    double sin_prod = 1.0;
    for (int j = 0; j < n - 1; ++j) {
        w[j] = sin_prod * std::cos(angles[j]);
        sin_prod *= std::sin(angles[j]);
    }
    w[n - 1] = sin_prod;
    return w;
}

Point beta_sphere_map(const BetaSphericalCoord& c, const BetaParams& bp) {
    if (static_cast<int>(c.angles.size()) != bp.n - 1)
        throw ContractError("beta_sphere_map: need n-1 angles");
    if (static_cast<int>(c.signs.size()) != bp.n)
        throw ContractError("beta_sphere_map: need n signs");
    if (!(c.rho >= 0)) throw DomainError("beta_sphere_map: rho must be >= 0");
    const std::vector<double> w = direction_components(c.angles);
    Point x(bp.n);
    for (int i = 0; i < bp.n; ++i) {
        const double e = 2.0 * bp.beta[i];
        const double u = c.rho * w[i];
        double v;
        if (u < 0) {
            const double er = std::round(e);
            if (std::fabs(e - er) > 1e-12)
                throw DomainError(
                    "beta_sphere_map: negative directional factor with non-integer "
                    "exponent 2*beta_" + std::to_string(i));
            v = std::pow(u, er);
        } else {
            v = std::pow(u, e);
        }
        if (c.signs[i] != 1 && c.signs[i] != -1)
            throw ContractError("beta_sphere_map: signs must be +1 or -1");
        x[i] = c.signs[i] * v;
    }
    return x;
}

double chart_angular_density(const std::vector<double>& angles, const BetaParams& bp) {
    if (static_cast<int>(angles.size()) != bp.n - 1)
        throw ContractError("chart_angular_density: need n-1 angles");
    const std::vector<double> w = direction_components(angles);
    double d = 1.0;
    for (int i = 0; i < bp.n; ++i) {
        const double e = 2.0 * bp.beta[i] - 1.0;
        if (w[i] == 0.0 && e < 0.0)
            throw DomainError("chart_angular_density: vanishing factor with 2*beta_i < 1");
        d *= 2.0 * bp.beta[i] * pow_or_one(std::fabs(w[i]), e);
    }
    // standard spherical angular density sin^{n-2}(a_1) ... sin(a_{n-2})
    for (int j = 0; j + 2 < bp.n; ++j)
        d *= std::pow(std::sin(angles[j]), bp.n - 2 - j);
    return d;
}

double beta_sphere_jacobian(const BetaSphericalCoord& c, const BetaParams& bp) {
    if (!(c.rho >= 0)) throw DomainError("beta_sphere_jacobian: rho must be >= 0");
    const double ang = chart_angular_density(c.angles, bp);
    return ang * pow_or_one(c.rho, 2.0 * bp.abs_beta - 1.0);
}

}  // namespace betapot
