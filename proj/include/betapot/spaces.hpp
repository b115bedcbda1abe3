#pragma once
/// Morrey-type classes and Stummel-type moduli in the beta-distance, with the
/// dyadic comparison estimates that relate them.
///
/// The central computed object is a modulus curve: a quantity of the form
/// sup_x int_{B_beta(x, r_j)} |f(y)| k(|x - y|_beta) dy sampled on a dyadic
/// radius ladder r_j = r_max 2^{-j}, with the sup taken over a finite center
/// grid. Every sup reported here is therefore a certified lower bound of the
/// true supremum; the comparison checks are stated so that this one-sidedness
/// never fabricates a pass.

#include <iosfwd>
#include <string>
#include <vector>

#include "betapot/common.hpp"
#include "betapot/fields.hpp"
#include "betapot/metric.hpp"
#include "betapot/quadrature.hpp"

namespace betapot {

/// Kernel-exponent convention: the generalized kernel uses (n - p) * a with
/// a = 2|beta|/n (scale-correct for every beta); the classical one uses the
/// unscaled n - p. The two coincide for isotropic beta (a = 1).
enum class ExponentConvention { generalized, classical };

/// (n - p) * a  or  (n - p) per the convention.
double kernel_exponent(double p, const BetaParams& bp, ExponentConvention conv);

/// Dyadic radius ladder r_max * 2^{-j}, j = 0..J (descending, J + 1 rungs).
std::vector<double> dyadic_ladder(double r_max, int J);

/// A curve sampled on a dyadic radius ladder.
struct ModulusCurve {
    std::string kind = "eta";    ///< eta | xi | mu | morrey-quotient
    std::vector<double> radii;   ///< descending dyadic ladder
    std::vector<double> values;
    std::vector<int> argmax;     ///< center-grid index attaining the sup (-1: none)
    std::vector<double> errors;  ///< per-rung quadrature refinement estimate

    std::size_t rungs() const { return radii.size(); }

    /// Log-log interpolation with power-law continuation beyond both ends;
    /// requires positive values.
    double value_at(double r) const;
};

/// CSV with header "radius,value,center_argmax_index", 12 significant digits.
void write_curve_csv(const ModulusCurve& c, std::ostream& out);
void write_curve_csv(const ModulusCurve& c, const std::string& path);
ModulusCurve read_curve_csv(const std::string& path);

/// Least-squares slope of log v against log r (the fitted power-law exponent).
double log_log_slope(const std::vector<double>& r, const std::vector<double>& v);

/// Candidate centers for the sup: a lattice over [-extent, extent]^n plus the
/// origin, every declared field singularity, and the support center.
struct CenterGrid {
    std::vector<Point> centers;
};

CenterGrid make_center_grid(const ScalarField& f, const BetaParams& bp,
                            int per_axis = 3, double extent = 1.0);

/// Morrey quotient q(r) = r^{-a lambda} sup_x int_{B(x,r)} |f| on the ladder,
/// classified as bounded-on-ladder or growing (with the fitted exponent of
/// q ~ r^{-fitted_exponent}). norm is the max over computed rungs — a
/// certified lower bound of the Morrey norm, never a proof of membership.
struct MorreyResult {
    ModulusCurve quotient;
    double norm = 0.0;
    bool growing = false;
    double fitted_exponent = 0.0;
};

/// Requires 0 < lambda <= n.
MorreyResult morrey_quotient(const ScalarField& f, double lambda,
                             const BetaParams& bp, const CenterGrid& grid,
                             double r_max, int J, const QuadratureConfig& cfg);

/// The certified lower bound of sup_{x,r} r^{-a lambda} int_{B(x,r)} |f|.
/// A growing quotient means f is (numerically) not in the Morrey class:
/// DivergenceError with the growth trace attached.
double morrey_norm(const ScalarField& f, double lambda, const BetaParams& bp,
                   const CenterGrid& grid, double r_max, int J,
                   const QuadratureConfig& cfg);

/// Stummel-type modulus eta(r_j) = sup_x int_{B(x,r_j)} |f(y)| /
/// (|x-y|_beta^{kernel_exponent(p)} * weight(|x-y|_beta)) dy. The optional
/// weight divides the kernel. A symbolically divergent center raises
/// DivergenceError naming the center. Requires 0 < p <= n. Values are
/// regularized to be monotone nondecreasing in r (exact property of the
/// integral; absorbs quadrature wobble only).
ModulusCurve stummel_modulus(const ScalarField& f, double p, const BetaParams& bp,
                             const CenterGrid& grid, double r_max, int J,
                             const QuadratureConfig& cfg,
                             const WeightFn* weight = nullptr,
                             ExponentConvention conv = ExponentConvention::generalized);

/// Closed-form constant 2^{(n-p)a} / (1 - 2^{-a(lambda-(n-p))}) of the dyadic
/// Morrey-to-Stummel estimate; requires lambda > n - p.
double lemma1_constant(double n, double p, double lambda, double a);

/// Max successive ratio values[j] / values[j+1] down the ladder (the measured
/// doubling constant). A zero value under a nonzero one raises NumericsError.
double doubling_constant(const ModulusCurve& c);

/// Morrey-to-Stummel comparison: eta(r_j) <= C(n,p,lambda,beta) *
/// r_j^{(lambda-(n-p)) a} * ||f||_Morrey at every rung, tolerance twice the
/// combined quadrature error. A growing Morrey quotient voids the hypothesis:
/// the check is then skipped with the reason recorded.
struct Lemma1Result {
    bool pass = false;
    bool skipped = false;
    std::string reason;
    double constant = 0.0;      ///< closed-form comparison constant
    double morrey = 0.0;        ///< certified Morrey bound used on the right side
    double max_ratio = 0.0;     ///< max over rungs of eta / rhs
    int worst_rung = -1;
    ModulusCurve eta;
    std::vector<double> rhs;    ///< per-rung right-hand side
    MorreyResult morrey_result;
};

Lemma1Result check_lemma1(const ScalarField& f, double p, double lambda,
                          const BetaParams& bp, const CenterGrid& grid,
                          double r_max, int J, const QuadratureConfig& cfg,
                          ExponentConvention conv = ExponentConvention::generalized);

/// Converse direction: if eta fits a power law r^{alpha a} (log-log slope
/// within 10% — otherwise inconclusive), the Morrey quotient at
/// lambda = n - p + alpha must be bounded on the ladder, via the pointwise
/// mechanism int_{B(x,r)} |f| <= r^{(n-p)a} eta(r).
struct Lemma1ConverseResult {
    bool conclusive = false;
    bool pass = false;
    std::string reason;
    double fitted_slope = 0.0;
    double expected_slope = 0.0;  ///< alpha * a
    double max_ratio = 0.0;       ///< max of quotient / (r^{-alpha a} eta(r))
    ModulusCurve eta;
    MorreyResult quotient;        ///< at lambda = n - p + alpha
};

Lemma1ConverseResult check_lemma1_converse(const ScalarField& f, double p,
                                           double alpha, const BetaParams& bp,
                                           const CenterGrid& grid, double r_max,
                                           int J, const QuadratureConfig& cfg,
                                           ExponentConvention conv = ExponentConvention::generalized);

}  // namespace betapot
