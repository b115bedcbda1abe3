#pragma once
/// Scalar fields (densities/potentials) and radial weight functions.
///
/// Fields carry explicit metadata the quadrature relies on: compact support,
/// declared singular points with their local radial model, and, when the field
/// is exactly a radial profile of the beta-distance about one center, that
/// profile (enables closed-form radial integration).

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "betapot/common.hpp"
#include "betapot/metric.hpp"

namespace betapot {

/// Local model c * t^{-power} * (-log t)^{-log_power} of a function of the
/// beta-distance t to some point; log_power > 0 requires t < 1.
struct RadialModel {
    double coeff = 1.0;
    double power = 0.0;
    double log_power = 0.0;

    double eval(double t) const;
};

struct Singularity {
    Point location;
    RadialModel model;
    double model_radius = 0.0;  ///< model valid (exact if exact_model) for t < model_radius
    bool exact_model = false;   ///< field == model * support indicator within model_radius
};

struct SupportBall {
    Point center;
    double radius = 0.0;
};

struct SupportBox {
    Point lo, hi;
};

class ScalarField {
public:
    std::string id;
    std::function<double(const Point&)> eval_fn;
    std::function<double(const Point&)> grad_mag_fn;  ///< may be empty
    std::optional<SupportBall> support_ball;
    std::optional<SupportBox> support_box;
    std::vector<Singularity> singularities;
    bool nonnegative = true;

    /// Set when the field equals profile(|x - profile_center|_beta) exactly
    /// (times the support indicator); profile_radius bounds the support.
    std::optional<RadialModel> beta_radial_profile;
    Point profile_center;
    double profile_radius = 0.0;

    /// Evaluates the field; evaluation exactly at a singular point raises
    /// DomainError. Outside declared support the value is 0.
    double operator()(const Point& x) const;

    bool is_singular_at(const Point& x) const;

    /// Registered gradient magnitude, or central differences of step h on the
    /// smooth region when none is registered.
    double gradient_magnitude(const Point& x, double h = 1e-5) const;

    /// True if the whole ball B_beta(center, r) provably misses the support.
    bool support_misses_ball(const Point& center, double r, const BetaParams& bp) const;
};

/// Builds a registry field. Known ids (with parameter defaults):
///   const      c=1
///   boxconst   c=1, half=1            (c times the indicator of [-half, half]^n)
///   ballconst  c=1, radius=1          (c times the indicator of B_beta(0, radius))
///   gaussian   amp=1, width=0.5, center=0
///   power      s=0.25, radius=1       (|x|_beta^{-s} on |x|_beta < radius)
///   example1   delta=exp(-3)          (|x|_beta^{-2} |log|x|_beta|^{-6} cut at delta)
///   bump       radius=0.5, center=0   (C-infinity mollifier, registered gradient)
///   quadratic  q=1, l=0..., c=0       (sum q x_i^2 + l_i x_i + c, registered gradient)
ScalarField make_field(const std::string& id,
                       const std::map<std::string, double>& params,
                       const BetaParams& bp);

/// f(x)^p pointwise, p > 0; singular models and radial profile transform in
/// closed form (the model family is closed under positive powers). Negative
/// field values raise DomainError at evaluation.
ScalarField pow_field(const ScalarField& f, double p);

/// |f(x)| pointwise; models are kept only when f is declared nonnegative.
ScalarField abs_field(const ScalarField& f);

/// The log-singular field chi_{B_beta(0,delta)} / (|x|_beta^2 |log|x|_beta|^6);
/// delta <= 0 selects the default exp(-3).
ScalarField make_example1_field(const BetaParams& bp, double delta = -1.0);

/// Grid-sampled field: multilinear interpolation on a uniform grid, zero outside.
struct GridData {
    int n = 0;
    std::vector<int> dims;
    Point origin;
    Point spacing;
    std::vector<double> values;  ///< row-major, last axis fastest
};

GridData read_grid(const std::string& path);
void write_grid(const std::string& path, const GridData& g);
ScalarField make_grid_field(GridData g);

/// Radial weight function of the beta-distance.
class WeightFn {
public:
    std::string id;
    std::function<double(double)> eval_fn;
    bool monotone_nondecreasing = true;
    bool limit_zero = true;              ///< w(t) -> 0 as t -> 0+
    RadialModel near_zero;               ///< model at t -> 0+, exact below exact_below
    double exact_below = std::numeric_limits<double>::infinity();
    double domain_max = 0.0;             ///< 0 = unrestricted; else valid on (0, domain_max]

    double operator()(double t) const;
};

/// Known weights: "one", "power" (alpha), "logpow" (alpha, m: t^alpha (-log t)^{-m},
/// valid on (0, e^-1]).
WeightFn make_weight(const std::string& id, const std::map<std::string, double>& params);

/// w(t)^q with the near-zero model transformed in closed form.
WeightFn pow_weight(const WeightFn& w, double q);

/// Weight w(t) = (interpolated curve value at t)^gamma for a positive sampled
/// curve on a decreasing dyadic radius ladder. Log-log linear interpolation,
/// power-law continuation beyond both ends.
WeightFn make_curve_weight(const std::vector<double>& radii,
                           const std::vector<double>& values, double gamma,
                           const std::string& id = "eta");

}  // namespace betapot
