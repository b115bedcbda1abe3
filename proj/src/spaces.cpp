#include "betapot/spaces.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace betapot {

double kernel_exponent(double p, const BetaParams& bp, ExponentConvention conv) {
    double scale = conv == ExponentConvention::generalized ? bp.a : 1.0;
    return (bp.n - p) * scale;
}

std::vector<double> dyadic_ladder(double r_max, int J) {
    if (!(r_max > 0)) throw ContractError("dyadic_ladder: r_max must be positive");
    if (J < 1) throw ContractError("dyadic_ladder: J must be >= 1");
    std::vector<double> radii(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) radii[static_cast<std::size_t>(j)] = std::ldexp(r_max, -j);
    return radii;
}

double ModulusCurve::value_at(double r) const {
    if (radii.size() < 2 || radii.size() != values.size())
        throw ContractError("ModulusCurve::value_at: need >= 2 sampled rungs");
    if (!(r > 0)) throw ContractError("ModulusCurve::value_at: r must be positive");
    for (double v : values)
        if (!(v > 0)) throw ContractError("ModulusCurve::value_at: values must be positive");
    // Radii descend; pick the segment [radii[i+1], radii[i]] containing r and
    // interpolate log-log (power-law continuation beyond either end).
    std::size_t i = 0;
    if (r < radii[1]) {
        while (i + 2 < radii.size() && r < radii[i + 2]) ++i;
        ++i;
        if (i + 1 >= radii.size()) i = radii.size() - 2;
    }
    double lr0 = std::log(radii[i]), lr1 = std::log(radii[i + 1]);
    double lv0 = std::log(values[i]), lv1 = std::log(values[i + 1]);
    double slope = (lv0 - lv1) / (lr0 - lr1);
    return std::exp(lv1 + slope * (std::log(r) - lr1));
}

void write_curve_csv(const ModulusCurve& c, std::ostream& out) {
    out << "radius,value,center_argmax_index\n";
    for (std::size_t j = 0; j < c.radii.size(); ++j) {
        int am = j < c.argmax.size() ? c.argmax[j] : -1;
        out << format12(c.radii[j]) << "," << format12(c.values[j]) << "," << am << "\n";
    }
}

void write_curve_csv(const ModulusCurve& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("write_curve_csv: cannot open " + path);
    write_curve_csv(c, out);
    if (!out) throw ContractError("write_curve_csv: write failed for " + path);
}

ModulusCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("read_curve_csv: cannot open " + path);
    ModulusCurve c;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;  // header
        std::istringstream row(line);
        std::string cell;
        double vals[2];
        for (int k = 0; k < 2; ++k) {
            if (!std::getline(row, cell, ','))
                throw ContractError("read_curve_csv: short row in " + path);
            vals[k] = std::stod(cell);
        }
        int am = -1;
        if (std::getline(row, cell, ',')) am = static_cast<int>(std::stol(cell));
        c.radii.push_back(vals[0]);
        c.values.push_back(vals[1]);
        c.argmax.push_back(am);
    }
    if (c.radii.empty()) throw ContractError("read_curve_csv: no data rows in " + path);
    return c;
}

double log_log_slope(const std::vector<double>& r, const std::vector<double>& v) {
    if (r.size() != v.size()) throw ContractError("log_log_slope: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0) || !(v[i] > 0)) continue;
        double x = std::log(r[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    double denom = m * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (m * sxy - sx * sy) / denom;
}

namespace {

bool near_same_point(const Point& x, const Point& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - y[i]) > 1e-12) return false;
    return true;
}

void push_center(std::vector<Point>& centers, const Point& x) {
    for (const Point& c : centers)
        if (near_same_point(c, x)) return;
    centers.push_back(x);
}

std::string point_str(const Point& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (i ? "," : "") + format12(x[i]);
    return s + ")";
}

struct SupCurve {
    std::vector<double> values, errors;
    std::vector<int> argmax;
};

/// Per-rung sup over the center grid of int_{B(x,r_j)} |f| ker dy. Cheap pass
/// without error estimates; the winning center is then rerun with the
/// reduced-order companion to get a per-rung refinement estimate.
SupCurve sup_over_centers(const ScalarField& f, const Kernel& ker,
                          const CenterGrid& grid, const std::vector<double>& radii,
                          const BetaParams& bp, const QuadratureConfig& cfg,
                          const char* what) {
    cfg.validate();
    if (grid.centers.empty()) throw ContractError(std::string(what) + ": empty center grid");
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    ScalarField af = abs_field(f);
    std::size_t m = radii.size();
    SupCurve out;
    out.values.assign(m, 0.0);
    out.errors.assign(m, 0.0);
    out.argmax.assign(m, -1);
    for (std::size_t ci = 0; ci < grid.centers.size(); ++ci) {
        const Point& x = grid.centers[ci];
        if (x.size() != static_cast<std::size_t>(bp.n))
            throw ContractError(std::string(what) + ": center dimension mismatch");
        for (std::size_t j = 0; j < m; ++j) {
            // Radii descend, so once a ball misses the support all deeper
            // rungs do too.
            if (af.support_misses_ball(x, radii[j], bp)) break;
            double val;
            try {
                val = integrate_ball_kernel(af, x, radii[j], ker, geo, cfg, false).value;
            } catch (const DivergenceError& e) {
                throw DivergenceError(std::string(what) + " diverges at center " +
                                          point_str(x) + ", radius " + format12(radii[j]) +
                                          ": " + e.what(),
                                      e.partial_estimate);
            }
            if (val > out.values[j]) {
                out.values[j] = val;
                out.argmax[j] = static_cast<int>(ci);
            }
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (out.argmax[j] < 0) continue;
        const Point& x = grid.centers[static_cast<std::size_t>(out.argmax[j])];
        IntegralResult res = integrate_ball_kernel(af, x, radii[j], ker, geo, cfg, true);
        out.errors[j] = res.error_estimate;
    }
    return out;
}

}  // namespace

CenterGrid make_center_grid(const ScalarField& f, const BetaParams& bp,
                            int per_axis, double extent) {
    if (per_axis < 1) throw ContractError("make_center_grid: per_axis must be >= 1");
    if (!(extent > 0)) throw ContractError("make_center_grid: extent must be positive");
    CenterGrid grid;
    push_center(grid.centers, Point(static_cast<std::size_t>(bp.n), 0.0));
    std::size_t n = static_cast<std::size_t>(bp.n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        Point x(n);
        for (std::size_t i = 0; i < n; ++i) {
            int q = static_cast<int>(rem % static_cast<std::size_t>(per_axis));
            rem /= static_cast<std::size_t>(per_axis);
            x[i] = per_axis == 1 ? 0.0
                                 : -extent + 2.0 * extent * q / (per_axis - 1);
        }
        push_center(grid.centers, x);
    }
    for (const Singularity& s : f.singularities) push_center(grid.centers, s.location);
    if (f.support_ball) push_center(grid.centers, f.support_ball->center);
    if (f.support_box) {
        Point mid(n);
        for (std::size_t i = 0; i < n; ++i)
            mid[i] = 0.5 * (f.support_box->lo[i] + f.support_box->hi[i]);
        push_center(grid.centers, mid);
    }
    return grid;
}

MorreyResult morrey_quotient(const ScalarField& f, double lambda,
                             const BetaParams& bp, const CenterGrid& grid,
                             double r_max, int J, const QuadratureConfig& cfg) {
    if (!(lambda > 0) || !(lambda <= bp.n + 1e-12))
        throw ContractError("morrey_quotient: lambda must lie in (0, n]");
    std::vector<double> radii = dyadic_ladder(r_max, J);
    Kernel ker;  // trivial: plain mass integral
    SupCurve sup = sup_over_centers(f, ker, grid, radii, bp, cfg, "morrey quotient");
    MorreyResult out;
    out.quotient.kind = "morrey-quotient";
    out.quotient.radii = radii;
    out.quotient.argmax = sup.argmax;
    out.quotient.values.resize(radii.size());
    out.quotient.errors.resize(radii.size());
    for (std::size_t j = 0; j < radii.size(); ++j) {
        double scale = std::pow(radii[j], -bp.a * lambda);
        out.quotient.values[j] = sup.values[j] * scale;
        out.quotient.errors[j] = sup.errors[j] * scale;
        if (out.quotient.values[j] > out.norm) out.norm = out.quotient.values[j];
    }
    double slope = log_log_slope(out.quotient.radii, out.quotient.values);
    double first = out.quotient.values.front(), last = out.quotient.values.back();
    out.growing = slope < -0.05 && last > 1.25 * first && last > 0;
    out.fitted_exponent = out.growing ? -slope : 0.0;
    return out;
}

double morrey_norm(const ScalarField& f, double lambda, const BetaParams& bp,
                   const CenterGrid& grid, double r_max, int J,
                   const QuadratureConfig& cfg) {
    MorreyResult mr = morrey_quotient(f, lambda, bp, grid, r_max, J, cfg);
    if (mr.growing) {
        std::string trace = "quotient trace";
        for (std::size_t j = 0; j < mr.quotient.rungs(); j += std::max<std::size_t>(1, J / 5))
            trace += " (" + format12(mr.quotient.radii[j]) + ", " +
                     format12(mr.quotient.values[j]) + ")";
        throw DivergenceError("morrey_norm: not in the Morrey class (numerically): "
                              "quotient grows like r^-" +
                                  format12(mr.fitted_exponent) + "; " + trace,
                              mr.norm);
    }
    return mr.norm;
}

ModulusCurve stummel_modulus(const ScalarField& f, double p, const BetaParams& bp,
                             const CenterGrid& grid, double r_max, int J,
                             const QuadratureConfig& cfg, const WeightFn* weight,
                             ExponentConvention conv) {
    if (!(p > 0) || !(p <= bp.n + 1e-12))
        throw ContractError("stummel_modulus: p must lie in (0, n]");
    std::vector<double> radii = dyadic_ladder(r_max, J);
    WeightFn divided;
    Kernel ker;
    ker.s = kernel_exponent(p, bp, conv);
    if (weight) {
        divided = pow_weight(*weight, -1.0);  // the weight divides the kernel
        ker.weight = &divided;
    }
    SupCurve sup = sup_over_centers(f, ker, grid, radii, bp, cfg, "stummel modulus");
    ModulusCurve c;
    c.kind = weight ? "xi" : "eta";
    c.radii = std::move(radii);
    c.values = std::move(sup.values);
    c.errors = std::move(sup.errors);
    c.argmax = std::move(sup.argmax);
    // The true modulus is nondecreasing in r; absorb quadrature wobble.
    for (std::size_t j = c.values.size(); j-- > 1;)
        if (c.values[j] > c.values[j - 1]) c.values[j - 1] = c.values[j];
    return c;
}

double lemma1_constant(double n, double p, double lambda, double a) {
    if (!(lambda > n - p))
        throw ContractError("lemma1_constant: requires lambda > n - p");
    if (!(a > 0)) throw ContractError("lemma1_constant: requires a > 0");
    return std::pow(2.0, (n - p) * a) / (1.0 - std::pow(2.0, -a * (lambda - (n - p))));
}

double doubling_constant(const ModulusCurve& c) {
    if (c.values.size() < 2)
        throw ContractError("doubling_constant: need >= 2 rungs");
    double best = 0.0;
    bool any = false;
    for (std::size_t j = 0; j + 1 < c.values.size(); ++j) {
        double num = c.values[j], den = c.values[j + 1];
        if (den == 0) {
            if (num == 0) continue;
            throw NumericsError("doubling_constant: undefined ratio at rung " +
                                std::to_string(j + 1) + ": value 0 below a nonzero value");
        }
        best = std::max(best, num / den);
        any = true;
    }
    return any ? best : 1.0;
}

Lemma1Result check_lemma1(const ScalarField& f, double p, double lambda,
                          const BetaParams& bp, const CenterGrid& grid,
                          double r_max, int J, const QuadratureConfig& cfg,
                          ExponentConvention conv) {
    if (!(lambda > bp.n - p))
        throw ContractError("check_lemma1: requires lambda > n - p");
    Lemma1Result out;
    out.morrey_result = morrey_quotient(f, lambda, bp, grid, r_max, J, cfg);
    double a_eff = conv == ExponentConvention::generalized ? bp.a : 1.0;
    out.constant = lemma1_constant(bp.n, p, lambda, a_eff);
    if (out.morrey_result.growing) {
        out.skipped = true;
        out.reason = "Morrey quotient grows like r^-" +
                     format12(out.morrey_result.fitted_exponent) +
                     " on the ladder: the Morrey-class hypothesis fails, "
                     "nothing to compare against";
        return out;
    }
    out.morrey = out.morrey_result.norm;
    double norm_err = 0.0;
    for (std::size_t j = 0; j < out.morrey_result.quotient.rungs(); ++j)
        if (out.morrey_result.quotient.values[j] == out.morrey)
            norm_err = out.morrey_result.quotient.errors[j];
    out.eta = stummel_modulus(f, p, bp, grid, r_max, J, cfg, nullptr, conv);
    double delta = (lambda - (bp.n - p)) * a_eff;
    out.rhs.resize(out.eta.rungs());
    out.pass = true;
    for (std::size_t j = 0; j < out.eta.rungs(); ++j) {
        double scale = out.constant * std::pow(out.eta.radii[j], delta);
        out.rhs[j] = scale * out.morrey;
        double tol = 2.0 * (out.eta.errors[j] + scale * norm_err);
        double ratio = out.rhs[j] > 0 ? out.eta.values[j] / out.rhs[j]
                                      : (out.eta.values[j] > 0 ? HUGE_VAL : 0.0);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.worst_rung = static_cast<int>(j);
        }
        if (out.eta.values[j] > out.rhs[j] + tol) out.pass = false;
    }
    return out;
}

Lemma1ConverseResult check_lemma1_converse(const ScalarField& f, double p,
                                           double alpha, const BetaParams& bp,
                                           const CenterGrid& grid, double r_max,
                                           int J, const QuadratureConfig& cfg,
                                           ExponentConvention conv) {
    if (!(alpha > 0)) throw ContractError("check_lemma1_converse: requires alpha > 0");
    Lemma1ConverseResult out;
    double a_eff = conv == ExponentConvention::generalized ? bp.a : 1.0;
    out.expected_slope = alpha * a_eff;
    out.eta = stummel_modulus(f, p, bp, grid, r_max, J, cfg, nullptr, conv);
    out.fitted_slope = log_log_slope(out.eta.radii, out.eta.values);
    if (std::abs(out.fitted_slope - out.expected_slope) > 0.1 * std::abs(out.expected_slope)) {
        out.conclusive = false;
        out.reason = "eta does not fit the power law r^" + format12(out.expected_slope) +
                     " (fitted slope " + format12(out.fitted_slope) + "): inconclusive";
        return out;
    }
    out.conclusive = true;
    double lambda = bp.n - p + alpha;
    out.quotient = morrey_quotient(f, lambda, bp, grid, r_max, J, cfg);
    out.pass = !out.quotient.growing;
    // Mechanism: int_{B(x,r)} |f| <= r^{(n-p)a} eta(r), so the quotient is
    // dominated by r^{-alpha a} eta(r) up to quadrature error.
    double s = kernel_exponent(p, bp, conv);
    const ModulusCurve& q = out.quotient.quotient;
    for (std::size_t j = 0; j < out.eta.rungs(); ++j) {
        double scale = std::pow(out.eta.radii[j], s - bp.a * lambda);
        double bound = scale * out.eta.values[j];
        double tol = 2.0 * (q.errors[j] + scale * out.eta.errors[j]);
        if (bound > 0) out.max_ratio = std::max(out.max_ratio, q.values[j] / bound);
        if (q.values[j] > bound + tol) out.pass = false;
    }
    if (!out.pass)
        out.reason = out.quotient.growing
                         ? "Morrey quotient grows at lambda = n - p + alpha"
                         : "quotient exceeds the r^{-alpha a} eta(r) mechanism bound";
    return out;
}

}  // namespace betapot
