#pragma once
/// Deterministic quadrature over beta-balls and beta-annuli.
///
/// Strategy: integrals over B_beta(center, r) are computed in the
/// beta-spherical chart about the center as dyadic annuli (ratio-2 ladders in
/// the beta-distance) with tensor Gauss-Legendre rules, plus an analytic core:
/// declared singular models and radial kernels are integrated in closed or
/// near-closed 1-D form down to t = 0, so no quadrature node ever touches a
/// singularity. Off-center singularities are carved out into their own chart.
/// A rejection-sampling Monte Carlo estimator provides an independent
/// cross-check for bounded fields and the fallback beyond n = 4.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "betapot/common.hpp"
#include "betapot/fields.hpp"
#include "betapot/metric.hpp"
#include "betapot/rng.hpp"

namespace betapot {

/// Gauss-Legendre rule on [-1, 1] with m nodes (cached; Newton on Legendre).
struct Quad1D {
    std::vector<double> x, w;
};
const Quad1D& gauss_legendre(int m);

struct QuadratureConfig {
    double rel_tol = 1e-4;
    double abs_tol = 1e-12;
    int ladder_depth = 20;  ///< dyadic annuli r/2^{k+1}..r/2^k before the core
    int angular_order = 32;
    int radial_order = 64;
    std::size_t mc_budget = 1000000;
    std::uint64_t seed = 0;

    void validate() const;  ///< tolerances > 0, orders >= 2, ladder_depth >= 1
};

enum class IntegralMethod { tensor_chart, monte_carlo };

struct IntegralResult {
    double value = 0;
    double error_estimate = 0;  ///< refinement difference (reduced-order rerun)
    IntegralMethod method = IntegralMethod::tensor_chart;
    int annuli_used = 0;
};

/// Radial kernel t^{-s} * weight(t) of the beta-distance to the ball center.
struct Kernel {
    double s = 0.0;
    const WeightFn* weight = nullptr;

    double eval(double t) const;
    bool trivial() const { return s == 0.0 && weight == nullptr; }
};

/// Precomputed chart geometry for one beta vector: tensor angular rule with
/// the chart density folded in, total angular measure, co-area constant.
class BetaGeometry {
public:
    explicit BetaGeometry(BetaParams bp, int angular_order = 32);

    const BetaParams& params() const { return bp_; }

    /// Total angular measure: vol(B_beta(0,r)) = angular_measure * r^n / (n a).
    double angular_measure() const { return c_ang_; }

    /// Co-area constant: int_{B(0,r)} g(|y|_beta) dy = c int_0^r g(t) t^{n-1} dt.
    double coarea_constant() const { return c_vol_; }

    double ball_volume(double r) const;

    /// Integral over the shell t0 < |y - chart_center|_beta < t1 of
    /// fn(y, t) * radial_kernel(t), with t the exact beta-distance of the
    /// chart node. Pass coarse = true for the reduced-order companion rule.
    double shell_integral(const Point& chart_center, double t0, double t1,
                          const Kernel* radial_kernel,
                          const std::function<double(const Point&, double)>& fn,
                          int radial_order, bool coarse = false) const;

private:
    struct AngNode {
        std::vector<double> dirpow;  ///< w_i^{2 beta_i}
        double wdens = 0;            ///< tensor GL weight * chart angular density
    };
    void build_rule(int order, std::vector<AngNode>& out) const;

    BetaParams bp_;
    std::vector<AngNode> nodes_, nodes_coarse_;
    std::vector<std::vector<double>> orthant_signs_;
    double c_ang_ = 0, c_vol_ = 0;
};

/// Cached geometry for (bp.beta, angular_order); single-threaded cache.
const BetaGeometry& geometry_for(const BetaParams& bp, int angular_order);

/// int_{B_beta(center,r)} f dy. Throws NumericsError when the refinement
/// error estimate exceeds the configured tolerance.
IntegralResult integrate_ball(const ScalarField& f, const Point& center, double r,
                              const BetaParams& bp, const QuadratureConfig& cfg);

/// int_{B_beta(center,r)} f(y) / |center - y|_beta^s dy, s >= 0. Divergent
/// exponent combinations raise DivergenceError with the finite partial
/// estimate attached.
IntegralResult integrate_singular(const ScalarField& f, double s,
                                  const Point& center, double r,
                                  const BetaParams& bp,
                                  const QuadratureConfig& cfg);

/// Integral over the annulus r_in <= |y - center|_beta < r_out.
IntegralResult integrate_annulus(const ScalarField& f, const Point& center,
                                 double r_in, double r_out, const BetaParams& bp,
                                 const QuadratureConfig& cfg);

/// Engine entry: int_{B(center,r)} f(y) ker(|center - y|_beta) dy against a
/// prebuilt geometry. with_error = false skips the reduced-order rerun (used
/// by sup-over-center loops); no tolerance enforcement here.
IntegralResult integrate_ball_kernel(const ScalarField& f, const Point& center,
                                     double r, const Kernel& ker,
                                     const BetaGeometry& geo,
                                     const QuadratureConfig& cfg,
                                     bool with_error = true);

/// coarea * coeff * int_0^{tmax} t^{n-1-power-s} (-log t)^{-log_power} w(t) dt:
/// the exact ball integral of a centered radial model against a radial kernel.
double radial_model_kernel_integral(const RadialModel& model, const Kernel& ker,
                                    double tmax, const BetaGeometry& geo);

/// int_{tlo}^{thi} t^E (-log t)^{-M} dt, 0 < tlo <= thi (thi < 1 when M != 0).
double log_power_segment(double E, double M, double tlo, double thi);

/// int_0^{thi} t^E (-log t)^{-M} dt; finite iff E > -1 or (E == -1 and M > 1),
/// otherwise DivergenceError carrying a truncated partial estimate.
double log_power_tail(double E, double M, double thi);

/// int_0^{thi} t^E (-log t)^{-M} w(t) dt: analytic via w's near-zero model
/// below w.exact_below, dyadic numeric rungs above. w may be null.
double weighted_log_power_tail(double E, double M, const WeightFn* w, double thi);

struct McResult {
    double value = 0;
    double std_error = 0;
    std::size_t samples = 0;
    std::size_t accepted = 0;
};

/// Rejection-sampling Monte Carlo estimate of int_{B(center,r)} f dy inside
/// the circumscribed box with half-widths r^{2 beta_i / a}. Intended for
/// bounded (finite-variance) fields.
McResult mc_integrate_ball(const ScalarField& f, const Point& center, double r,
                           const BetaParams& bp, Rng& rng,
                           std::size_t nsamples);

}  // namespace betapot
