#include "betapot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <utility>

namespace betapot {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

const Quad1D& gauss_legendre(int m) {
    if (m < 1) throw ContractError("gauss_legendre: order must be >= 1");
    static std::map<int, Quad1D> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    Quad1D q;
    q.x.assign(m, 0.0);
    q.w.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.x[i] = -x;
        q.w[i] = w;
        q.x[m - 1 - i] = x;
        q.w[m - 1 - i] = w;
    }
    return cache.emplace(m, std::move(q)).first->second;
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw ContractError("QuadratureConfig: tolerances must be positive");
    if (ladder_depth < 1)
        throw ContractError("QuadratureConfig: ladder_depth must be >= 1");
    if (angular_order < 2 || radial_order < 2)
        throw ContractError("QuadratureConfig: orders must be >= 2");
    if (mc_budget < 1)
        throw ContractError("QuadratureConfig: mc_budget must be >= 1");
}

double Kernel::eval(double t) const {
    if (!(t > 0)) throw DomainError("Kernel: t must be positive");
    double v = (s == 0.0) ? 1.0 : std::pow(t, -s);
    if (weight) v *= (*weight)(t);
    return v;
}

// ---------------------------------------------------------------------------
// 1-D radial primitives
// ---------------------------------------------------------------------------

namespace {

/// int_{ua}^{ub} e^{-lam u} u^{-M} du on 0 < ua < ub, composite Gauss-Legendre
/// on pieces of bounded ratio and bounded lam-width.
double exp_powerlog_integral(double lam, double M, double ua, double ub) {
    const Quad1D& q = gauss_legendre(24);
    double acc = 0, a = ua;
    while (a < ub * (1 - 1e-15)) {
        double b = std::min(ub, 2 * a);
        if (lam != 0.0) b = std::min(b, a + 4.0 / std::abs(lam));
        const double mid = (a + b) / 2, half = (b - a) / 2;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            const double u = mid + half * q.x[i];
            acc += q.w[i] * half * std::exp(-lam * u) * std::pow(u, -M);
        }
        a = b;
    }
    return acc;
}

/// int_{tlo}^{thi} t^E dt, stable for E + 1 near 0.
double power_segment(double E, double tlo, double thi) {
    const double lam = E + 1;
    if (lam == 0.0) return std::log(thi / tlo);
    return std::pow(tlo, lam) * std::expm1(lam * std::log(thi / tlo)) / lam;
}

/// Numeric int_{tlo}^{thi} t^E (-log t)^{-M} w(t) dt by dyadic rungs in log t.
double weighted_rungs(double E, double M, const WeightFn& w, double tlo,
                      double thi) {
    if (M != 0.0 && !(thi < 1.0))
        throw DomainError("weighted radial integral: log factor requires t < 1");
    const Quad1D& q = gauss_legendre(20);
    double acc = 0, hi = thi;
    while (hi > tlo * (1 + 1e-12)) {
        const double lo = std::max(hi / 2, tlo);
        const double va = std::log(lo), vb = std::log(hi);
        const double mid = (va + vb) / 2, half = (vb - va) / 2;
        for (std::size_t i = 0; i < q.x.size(); ++i) {
            const double v = mid + half * q.x[i];
            double g = std::exp((E + 1) * v) * w(std::exp(v));
            if (M != 0.0) g *= std::pow(-v, -M);
            acc += q.w[i] * half * g;
        }
        hi = lo;
    }
    return acc;
}

}  // namespace

double log_power_segment(double E, double M, double tlo, double thi) {
    if (!(tlo > 0) || !(thi >= tlo))
        throw DomainError("log_power_segment: need 0 < tlo <= thi");
    if (tlo == thi) return 0.0;
    if (M == 0.0) return power_segment(E, tlo, thi);
    if (!(thi < 1.0))
        throw DomainError("log_power_segment: log factor requires thi < 1");
    return exp_powerlog_integral(E + 1, M, -std::log(thi), -std::log(tlo));
}

double log_power_tail(double E, double M, double thi) {
    if (!(thi > 0)) throw DomainError("log_power_tail: thi must be positive");
    if (M != 0.0 && !(thi < 1.0))
        throw DomainError("log_power_tail: log factor requires thi < 1");
    const double lam = E + 1;
    if (!(lam > 0 || (lam == 0 && M > 1))) {
        const double partial =
            log_power_segment(E, M, thi * std::pow(2.0, -50), thi);
        throw DivergenceError("radial integral diverges at 0 (exponent " +
                                  format12(E) + ", log power " + format12(M) + ")",
                              partial);
    }
    if (M == 0.0) return std::pow(thi, lam) / lam;
    const double ua = -std::log(thi);
    if (lam == 0.0) return std::pow(ua, 1.0 - M) / (M - 1.0);
    const double U =
        std::max(ua + 70.0 / lam, (4.0 * std::max(0.0, -M) + 70.0) / lam);
    return exp_powerlog_integral(lam, M, ua, U);
}

double weighted_log_power_tail(double E, double M, const WeightFn* w,
                               double thi) {
    if (w == nullptr) return log_power_tail(E, M, thi);
    if (!(thi > 0))
        throw DomainError("weighted radial integral: thi must be positive");
    if (w->domain_max > 0 && thi > w->domain_max * (1 + 1e-9))
        throw DomainError("weight '" + w->id + "' not defined up to t = " +
                          format12(thi));
    const RadialModel& nz = w->near_zero;
    const double E0 = E - nz.power;
    const double M0 = M + nz.log_power;
    if (!(E0 > -1 || (E0 == -1 && M0 > 1))) {
        const double partial =
            weighted_rungs(E, M, *w, thi * std::pow(2.0, -50), thi);
        throw DivergenceError(
            "weighted radial integral diverges at 0 (combined exponent " +
                format12(E0) + ", log power " + format12(M0) + ")",
            partial);
    }
    const double tcut = std::min(thi, w->exact_below);
    double acc = nz.coeff * log_power_tail(E0, M0, tcut);
    if (tcut < thi) acc += weighted_rungs(E, M, *w, tcut, thi);
    return acc;
}

double radial_model_kernel_integral(const RadialModel& model, const Kernel& ker,
                                    double tmax, const BetaGeometry& geo) {
    if (!(tmax > 0))
        throw DomainError("radial_model_kernel_integral: tmax must be positive");
    if (model.coeff == 0.0) return 0.0;
    const double scale = geo.coarea_constant() * model.coeff;
    const double E = geo.params().n - 1 - model.power - ker.s;
    try {
        return scale * weighted_log_power_tail(E, model.log_power, ker.weight, tmax);
    } catch (DivergenceError& e) {
        throw DivergenceError(e.what(), scale * e.partial_estimate);
    }
}

// ---------------------------------------------------------------------------
// Chart geometry
// ---------------------------------------------------------------------------

BetaGeometry::BetaGeometry(BetaParams bp, int angular_order) : bp_(std::move(bp)) {
    if (bp_.n < 1 || static_cast<int>(bp_.beta.size()) != bp_.n)
        throw ContractError("BetaGeometry: invalid BetaParams");
    if (bp_.n > 16)
        throw ContractError("BetaGeometry: tensor angular rule infeasible for n > 16");
    if (angular_order < 2)
        throw ContractError("BetaGeometry: angular_order must be >= 2");
    build_rule(angular_order, nodes_);
    build_rule(std::max(2, (2 * angular_order + 2) / 3), nodes_coarse_);
    const int count = 1 << bp_.n;
    orthant_signs_.resize(count);
    for (int m = 0; m < count; ++m) {
        orthant_signs_[m].resize(bp_.n);
        for (int i = 0; i < bp_.n; ++i)
            orthant_signs_[m][i] = ((m >> i) & 1) ? -1.0 : 1.0;
    }
    double s = 0;
    for (const auto& nd : nodes_) s += nd.wdens;
    c_ang_ = s * count;
    c_vol_ = c_ang_ / bp_.a;
}

void BetaGeometry::build_rule(int order, std::vector<AngNode>& out) const {
    out.clear();
    const int nang = bp_.n - 1;
    if (nang == 0) {
        AngNode nd;
        nd.dirpow.assign(1, 1.0);
        nd.wdens = chart_angular_density({}, bp_);
        out.push_back(std::move(nd));
        return;
    }
    const Quad1D& q = gauss_legendre(order);
    std::vector<int> idx(nang, 0);
    std::vector<double> angles(nang);
    while (true) {
        double wt = 1.0;
        for (int j = 0; j < nang; ++j) {
            angles[j] = (q.x[idx[j]] + 1.0) * (kPi / 4);
            wt *= q.w[idx[j]] * (kPi / 4);
        }
        AngNode nd;
        const auto dirs = direction_components(angles);
        nd.dirpow.resize(bp_.n);
        for (int i = 0; i < bp_.n; ++i)
            nd.dirpow[i] = std::pow(dirs[i], 2 * bp_.beta[i]);
        nd.wdens = wt * chart_angular_density(angles, bp_);
        out.push_back(std::move(nd));
        int j = 0;
        while (j < nang && ++idx[j] == order) {
            idx[j] = 0;
            ++j;
        }
        if (j == nang) break;
    }
}

double BetaGeometry::ball_volume(double r) const {
    if (!(r > 0)) throw DomainError("ball_volume: r must be positive");
    return c_vol_ * std::pow(r, bp_.n) / bp_.n;
}

double BetaGeometry::shell_integral(
    const Point& chart_center, double t0, double t1, const Kernel* radial_kernel,
    const std::function<double(const Point&, double)>& fn, int radial_order,
    bool coarse) const {
    if (!(t0 > 0 && t1 > t0))
        throw ContractError("shell_integral: need 0 < t0 < t1");
    if (static_cast<int>(chart_center.size()) != bp_.n)
        throw ContractError("shell_integral: center dimension mismatch");
    const auto& nodes = coarse ? nodes_coarse_ : nodes_;
    const int m = coarse ? std::max(4, (2 * radial_order + 2) / 3) : radial_order;
    const Quad1D& q = gauss_legendre(m);
    const double r0 = std::pow(t0, 1.0 / bp_.a);
    const double r1 = std::pow(t1, 1.0 / bp_.a);
    const double mid = (r0 + r1) / 2, half = (r1 - r0) / 2;
    double acc = 0;
    Point y(bp_.n);
    std::vector<double> powrho(bp_.n);
    for (int j = 0; j < m; ++j) {
        const double rho = mid + half * q.x[j];
        for (int i = 0; i < bp_.n; ++i) powrho[i] = std::pow(rho, 2 * bp_.beta[i]);
        const double t = std::pow(rho, bp_.a);
        const double jac = std::pow(rho, 2 * bp_.abs_beta - 1);
        const double kv = radial_kernel ? radial_kernel->eval(t) : 1.0;
        const double wj = q.w[j] * half * jac * kv;
        for (const auto& orth : orthant_signs_) {
            for (const auto& an : nodes) {
                for (int i = 0; i < bp_.n; ++i)
                    y[i] = chart_center[i] + orth[i] * powrho[i] * an.dirpow[i];
                acc += wj * an.wdens * fn(y, t);
            }
        }
    }
    return acc;
}

const BetaGeometry& geometry_for(const BetaParams& bp, int angular_order) {
    static std::map<std::pair<std::vector<double>, int>,
                    std::unique_ptr<BetaGeometry>>
        cache;
    const auto key = std::make_pair(bp.beta, angular_order);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<BetaGeometry>(bp, angular_order))
                 .first;
    return *it->second;
}

// ---------------------------------------------------------------------------
// Ball integrators
// ---------------------------------------------------------------------------

namespace {

struct Carve {
    const Singularity* s = nullptr;
    double d = 0;            ///< beta-distance from the ball center
    double rho = 0;          ///< carve radius about the singularity
    bool certified = false;  ///< carve ball provably inside the integration ball
};

bool same_point(const Point& a, const Point& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

/// Contribution of the carve ball B(z, rho): shells about z where the field
/// equals its exact model, kernel evaluated at true distances; analytic disc
/// below the deepest shell with the kernel frozen at z.
double carve_inside(const Carve& c, const Point& center, double r,
                    const Kernel& ker, const BetaGeometry& geo,
                    const QuadratureConfig& cfg, bool coarse) {
    const BetaParams& bp = geo.params();
    const Point& z = c.s->location;
    const RadialModel& model = c.s->model;
    const double t_stop = c.rho * std::pow(2.0, -cfg.ladder_depth);
    auto fn = [&](const Point& y, double tprime) {
        if (!c.certified && !in_ball(y, center, r, bp)) return 0.0;
        double v = model.eval(tprime);
        if (!ker.trivial()) v *= ker.eval(beta_distance(y, center, bp));
        return v;
    };
    double acc = 0, t_hi = c.rho;
    while (t_hi > t_stop * (1 + 1e-12)) {
        const double t_lo = std::max(t_hi / 2, t_stop);
        acc += geo.shell_integral(z, t_lo, t_hi, nullptr, fn, cfg.radial_order,
                                  coarse);
        t_hi = t_lo;
    }
    if (c.certified || in_ball(z, center, r, bp)) {
        const double kd = ker.trivial() ? 1.0 : ker.eval(c.d);
        try {
            acc += kd * radial_model_kernel_integral(model, Kernel{}, t_stop, geo);
        } catch (DivergenceError& e) {
            throw DivergenceError(e.what(), acc + kd * e.partial_estimate);
        }
    }
    return acc;
}

void enforce_tolerance(const IntegralResult& res, const QuadratureConfig& cfg,
                       const char* who) {
    const double tol =
        std::max(cfg.rel_tol * std::abs(res.value), cfg.abs_tol);
    if (res.error_estimate > tol)
        throw NumericsError(std::string(who) +
                            ": error estimate exceeds tolerance (value " +
                            format12(res.value) + ", estimate " +
                            format12(res.error_estimate) + ", tolerance " +
                            format12(tol) + ")");
}

IntegralResult mc_fallback(const ScalarField& f, const Point& center, double r,
                           const BetaParams& bp, const QuadratureConfig& cfg) {
    Rng rng(cfg.seed);
    const McResult mc = mc_integrate_ball(f, center, r, bp, rng, cfg.mc_budget);
    IntegralResult res;
    res.value = mc.value;
    res.error_estimate = mc.std_error;
    res.method = IntegralMethod::monte_carlo;
    return res;
}

}  // namespace

IntegralResult integrate_ball_kernel(const ScalarField& f, const Point& center,
                                     double r, const Kernel& ker,
                                     const BetaGeometry& geo,
                                     const QuadratureConfig& cfg,
                                     bool with_error) {
    const BetaParams& bp = geo.params();
    if (static_cast<int>(center.size()) != bp.n)
        throw ContractError("integrate_ball: center dimension mismatch");
    if (!(r > 0)) throw DomainError("integrate_ball: r must be positive");
    if (f.support_misses_ball(center, r, bp)) return {};

    // Exact radial path: profile about this center, or a global constant.
    if (f.beta_radial_profile) {
        const bool centered = same_point(f.profile_center, center);
        const bool anywhere = f.beta_radial_profile->power == 0.0 &&
                              f.beta_radial_profile->log_power == 0.0 &&
                              std::isinf(f.profile_radius);
        if (centered || anywhere) {
            const double tmax = std::min(r, f.profile_radius);
            IntegralResult res;
            res.value =
                radial_model_kernel_integral(*f.beta_radial_profile, ker, tmax, geo);
            return res;
        }
    }

    std::vector<Carve> carves;
    const Singularity* csing = nullptr;
    for (const auto& s : f.singularities) {
        if (same_point(s.location, center)) {
            csing = &s;
            continue;
        }
        const double d = beta_distance(center, s.location, bp);
        const double rho = std::min(s.model_radius, d / (2 * bp.k));
        if (d / bp.k - r >= rho) continue;  // ball provably clear of the carve
        if (!s.exact_model)
            throw NumericsError("integrate_ball: singularity of '" + f.id +
                                "' lacks an exact local model");
        carves.push_back({&s, d, rho, bp.k * (d + rho) <= r});
    }
    if (csing && !csing->exact_model)
        throw NumericsError("integrate_ball: singular center of '" + f.id +
                            "' lacks an exact local model");

    auto fn = [&](const Point& y, double) {
        for (const auto& c : carves)
            if (in_ball(y, c.s->location, c.rho, bp)) return 0.0;
        return f(y);
    };

    int annuli_used = 0;
    auto run = [&](bool coarse) {
        double acc = 0;
        for (const auto& c : carves) {
            try {
                acc += carve_inside(c, center, r, ker, geo, cfg, coarse);
            } catch (DivergenceError& e) {
                throw DivergenceError(e.what(), acc + e.partial_estimate);
            }
        }
        const double t_stop = csing ? std::min(r, csing->model_radius)
                                    : r * std::pow(2.0, -cfg.ladder_depth);
        double t_hi = r;
        while (t_hi > t_stop * (1 + 1e-12)) {
            const double t_lo = std::max(t_hi / 2, t_stop);
            acc += geo.shell_integral(center, t_lo, t_hi, &ker, fn,
                                      cfg.radial_order, coarse);
            if (!coarse) ++annuli_used;
            t_hi = t_lo;
        }
        if (csing) {
            try {
                acc += radial_model_kernel_integral(csing->model, ker, t_stop, geo);
            } catch (DivergenceError& e) {
                throw DivergenceError(e.what(), acc + e.partial_estimate);
            }
        } else {
            const double fc = fn(center, 0.0);
            if (fc != 0.0) {
                try {
                    acc += fc * radial_model_kernel_integral(
                                    RadialModel{1.0, 0.0, 0.0}, ker, t_stop, geo);
                } catch (DivergenceError& e) {
                    throw DivergenceError(e.what(), acc + fc * e.partial_estimate);
                }
            }
        }
        return acc;
    };

    IntegralResult res;
    res.value = run(false);
    res.annuli_used = annuli_used;
    if (with_error) res.error_estimate = std::abs(res.value - run(true));
    return res;
}

IntegralResult integrate_ball(const ScalarField& f, const Point& center, double r,
                              const BetaParams& bp, const QuadratureConfig& cfg) {
    cfg.validate();
    if (bp.n > 4) {
        IntegralResult res = mc_fallback(f, center, r, bp, cfg);
        enforce_tolerance(res, cfg, "integrate_ball");
        return res;
    }
    IntegralResult res = integrate_ball_kernel(
        f, center, r, Kernel{}, geometry_for(bp, cfg.angular_order), cfg, true);
    enforce_tolerance(res, cfg, "integrate_ball");
    return res;
}

IntegralResult integrate_singular(const ScalarField& f, double s,
                                  const Point& center, double r,
                                  const BetaParams& bp,
                                  const QuadratureConfig& cfg) {
    cfg.validate();
    if (s < 0) throw ContractError("integrate_singular: s must be >= 0");
    if (bp.n > 4)
        throw NumericsError(
            "integrate_singular: tensor chart limited to n <= 4 and the Monte "
            "Carlo fallback does not support singular kernels");
    IntegralResult res = integrate_ball_kernel(
        f, center, r, Kernel{s, nullptr}, geometry_for(bp, cfg.angular_order),
        cfg, true);
    enforce_tolerance(res, cfg, "integrate_singular");
    return res;
}

IntegralResult integrate_annulus(const ScalarField& f, const Point& center,
                                 double r_in, double r_out, const BetaParams& bp,
                                 const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(r_in >= 0) || !(r_out > r_in))
        throw ContractError("integrate_annulus: need 0 <= r_in < r_out");
    if (r_in == 0) return integrate_ball(f, center, r_out, bp, cfg);
    if (bp.n > 4) {
        // difference of two Monte Carlo ball estimates
        IntegralResult outer = mc_fallback(f, center, r_out, bp, cfg);
        IntegralResult inner = mc_fallback(f, center, r_in, bp, cfg);
        IntegralResult res;
        res.value = outer.value - inner.value;
        res.error_estimate = outer.error_estimate + inner.error_estimate;
        res.method = IntegralMethod::monte_carlo;
        enforce_tolerance(res, cfg, "integrate_annulus");
        return res;
    }
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    IntegralResult outer =
        integrate_ball_kernel(f, center, r_out, Kernel{}, geo, cfg, true);
    IntegralResult inner =
        integrate_ball_kernel(f, center, r_in, Kernel{}, geo, cfg, true);
    IntegralResult res;
    res.value = outer.value - inner.value;
    res.error_estimate = outer.error_estimate + inner.error_estimate;
    res.annuli_used = outer.annuli_used + inner.annuli_used;
    enforce_tolerance(res, cfg, "integrate_annulus");
    return res;
}

McResult mc_integrate_ball(const ScalarField& f, const Point& center, double r,
                           const BetaParams& bp, Rng& rng,
                           std::size_t nsamples) {
    if (static_cast<int>(center.size()) != bp.n)
        throw ContractError("mc_integrate_ball: center dimension mismatch");
    if (!(r > 0)) throw DomainError("mc_integrate_ball: r must be positive");
    if (nsamples == 0) throw ContractError("mc_integrate_ball: nsamples == 0");
    std::vector<double> h(bp.n);
    double boxvol = 1;
    for (int i = 0; i < bp.n; ++i) {
        h[i] = std::pow(r, 2 * bp.beta[i] / bp.a);
        boxvol *= 2 * h[i];
    }
    double sum = 0, sum2 = 0;
    std::size_t accepted = 0;
    Point y(bp.n);
    for (std::size_t kk = 0; kk < nsamples; ++kk) {
        for (int i = 0; i < bp.n; ++i)
            y[i] = center[i] + (2 * rng.uniform() - 1) * h[i];
        double v = 0;
        if (in_ball(y, center, r, bp)) {
            v = f(y);
            ++accepted;
        }
        sum += v;
        sum2 += v * v;
    }
    const double ns = static_cast<double>(nsamples);
    const double mean = sum / ns;
    const double var = std::max(0.0, sum2 / ns - mean * mean);
    McResult res;
    res.value = boxvol * mean;
    res.std_error = boxvol * std::sqrt(var / ns);
    res.samples = nsamples;
    res.accepted = accepted;
    return res;
}

}  // namespace betapot
