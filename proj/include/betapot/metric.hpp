#pragma once
/// Non-isotropic distance |x-y|_beta, anisotropic dilations and the
/// beta-spherical chart used by all quadrature in this library.
///
/// For a weight vector beta with beta_i >= 1/2,
///     |x|_beta = ( sum_i |x_i|^{1/beta_i} )^{|beta|/n},   |beta| = sum_i beta_i.
/// The map t.x = (t^{beta_1} x_1, ..., t^{beta_n} x_n) scales it by t^{|beta|/n},
/// and |x+y|_beta <= k (|x|_beta + |y|_beta) with
///     k = 2^{ (1 + 1/beta_min)^{|beta|/n} }.
/// When every beta_i = 1/2 the distance is Euclidean and k = 2^{sqrt(3)}.

#include <vector>

#include "betapot/common.hpp"

namespace betapot {

struct BetaParams {
    std::vector<double> beta;  ///< per-axis exponents, each >= 1/2
    int n = 0;                 ///< dimension
    double abs_beta = 0;       ///< |beta| = sum beta_i
    double a = 0;              ///< 2|beta|/n, the radial scale exponent
    double beta_min = 0;
    double k = 0;              ///< quasi-triangle constant

    bool isotropic(double tol = 0.0) const;
};

/// Validates beta (n >= 1, beta_i >= 1/2 - 1e-15) and precomputes derived fields.
BetaParams make_beta_params(std::vector<double> beta);

/// Recomputes the quasi-triangle constant from beta; exponent first, then exp2.
double quasi_triangle_constant(const BetaParams& bp);

double beta_norm(const Point& x, const BetaParams& bp);
double beta_distance(const Point& x, const Point& y, const BetaParams& bp);

/// Anisotropic dilation (t^{beta_1} x_1, ..., t^{beta_n} x_n), t > 0.
Point dilate(const Point& x, double t, const BetaParams& bp);

/// Strict open-ball membership |x - center|_beta < r, r > 0.
bool in_ball(const Point& x, const Point& center, double r, const BetaParams& bp);

/// Chart coordinates. angles has n-1 entries; the chart is restricted to the
/// closed first-orthant angular simplex (all directional factors >= 0) and
/// signs carries the orthant. For n = 1, angles is empty and signs[0] = +/-1.
struct BetaSphericalCoord {
    double rho = 0;
    std::vector<double> angles;
    std::vector<int> signs;
};

/// Directional factors w_i(angles) of the standard spherical chart,
/// w_1 = cos a_1, w_2 = sin a_1 cos a_2, ..., w_n = sin a_1 ... sin a_{n-1}.
std::vector<double> direction_components(const std::vector<double>& angles);

/// x_i = signs_i * (rho * w_i)^{2 beta_i}. Negative directional factor with a
/// non-integer exponent 2 beta_i raises DomainError.
Point beta_sphere_map(const BetaSphericalCoord& c, const BetaParams& bp);

/// |det d(x)/d(rho, angles)| of beta_sphere_map:
///   prod_i [ 2 beta_i (rho w_i)^{2 beta_i - 1} ] * rho^{n-1} * prod_j sin^{n-1-j} a_j.
/// Factors (rho w_i)^0 are taken as 1 in the limit w_i -> 0.
double beta_sphere_jacobian(const BetaSphericalCoord& c, const BetaParams& bp);

/// Angular density of the chart at fixed rho = 1 with the radial power removed:
/// jacobian = angular_density(angles) * rho^{2|beta| - 1}.
double chart_angular_density(const std::vector<double>& angles, const BetaParams& bp);

}  // namespace betapot
