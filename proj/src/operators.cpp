#include "betapot/operators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "betapot/rng.hpp"

namespace betapot {

namespace {

bool near_same_point(const Point& x, const Point& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - y[i]) > 1e-12) return false;
    return true;
}

double conv_scale(const BetaParams& bp, ExponentConvention conv) {
    return conv == ExponentConvention::generalized ? bp.a : 1.0;
}

/// Reduced-order copy for inner operator evaluations inside nested integrals.
QuadratureConfig lighten(QuadratureConfig cfg, int ang, int rad, int depth) {
    cfg.angular_order = std::max(4, std::min(cfg.angular_order, ang));
    cfg.radial_order = std::max(4, std::min(cfg.radial_order, rad));
    cfg.ladder_depth = std::max(4, std::min(cfg.ladder_depth, depth));
    return cfg;
}

/// int_{B(y0,r)} g(x) V(x) dx for smooth g, by dyadic shells about y0 plus a
/// core where g is frozen at y0: analytic when V is singular at y0 with an
/// exact model, g(y0) V(y0) vol otherwise. Error from a reduced-order rerun.
double product_ball_integral(const std::function<double(const Point&)>& g,
                             const ScalarField& V, const Point& y0, double r,
                             const BetaParams& bp, const QuadratureConfig& cfg,
                             double* err_out) {
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    const Singularity* s0 = nullptr;
    for (const Singularity& s : V.singularities)
        if (near_same_point(s.location, y0)) s0 = &s;
    auto fn = [&](const Point& x, double) { return g(x) * V(x); };
    const double t_stop = r * std::pow(2.0, -cfg.ladder_depth);
    auto run = [&](bool coarse) {
        double acc = 0.0;
        for (int k = 0; k < cfg.ladder_depth; ++k) {
            double t_hi = r * std::pow(2.0, -k);
            double t_lo = r * std::pow(2.0, -k - 1);
            acc += geo.shell_integral(y0, t_lo, t_hi, nullptr, fn, cfg.radial_order,
                                      coarse);
        }
        double g0 = g(y0);
        if (s0) {
            if (!s0->exact_model)
                throw NumericsError("product_ball_integral: singular center of " +
                                    V.id + " lacks an exact model");
            double tmax = std::min(t_stop, s0->model_radius);
            Kernel none;
            acc += g0 * radial_model_kernel_integral(s0->model, none, tmax, geo);
            if (tmax < t_stop)
                acc += geo.shell_integral(y0, tmax, t_stop, nullptr, fn,
                                          cfg.radial_order, coarse);
        } else {
            acc += g0 * V(y0) * geo.ball_volume(t_stop);
        }
        return acc;
    };
    double fine = run(false);
    if (err_out) *err_out = std::abs(fine - run(true));
    return fine;
}

}  // namespace

double covering_radius(const ScalarField& f, const Point& x, const BetaParams& bp) {
    if (x.size() != static_cast<std::size_t>(bp.n))
        throw ContractError("covering_radius: point dimension mismatch");
    if (f.support_ball) {
        double d = beta_distance(x, f.support_ball->center, bp);
        if (d < 1e-15) return f.support_ball->radius;
        return bp.k * (d + f.support_ball->radius);
    }
    if (f.support_box) {
        std::size_t n = x.size();
        Point mid(n), half(n);
        for (std::size_t i = 0; i < n; ++i) {
            mid[i] = 0.5 * (f.support_box->lo[i] + f.support_box->hi[i]);
            half[i] = 0.5 * (f.support_box->hi[i] - f.support_box->lo[i]);
        }
        double rbox = beta_norm(half, bp);
        double d = beta_distance(x, mid, bp);
        if (d < 1e-15) return rbox;
        return bp.k * (d + rbox);
    }
    throw ContractError("covering_radius: field " + f.id +
                        " has no declared compact support");
}

IntegralResult frac_integral(const ScalarField& f, double p, const Point& x,
                             const BetaParams& bp, const QuadratureConfig& cfg,
                             ExponentConvention conv) {
    cfg.validate();
    if (bp.n > 4)
        throw NumericsError("frac_integral: tensor chart limited to n <= 4");
    if (!(p > 0) || !(p <= bp.n + 1e-12))
        throw ContractError("frac_integral: p must lie in (0, n]");
    Kernel ker;
    ker.s = kernel_exponent(p, bp, conv);
    double R = covering_radius(f, x, bp) * (1.0 + 1e-9);
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    return integrate_ball_kernel(abs_field(f), x, R, ker, geo, cfg, true);
}

IntegralResult gen_frac_integral(const ScalarField& f, double p, const WeightFn& h,
                                 const Point& x, const BetaParams& bp,
                                 const QuadratureConfig& cfg,
                                 ExponentConvention conv) {
    cfg.validate();
    if (bp.n > 4)
        throw NumericsError("gen_frac_integral: tensor chart limited to n <= 4");
    if (!(p > 0) || !(p <= bp.n + 1e-12))
        throw ContractError("gen_frac_integral: p must lie in (0, n]");
    WeightFn hinv = pow_weight(h, -1.0);  // the weight divides the kernel
    Kernel ker;
    ker.s = kernel_exponent(p, bp, conv);
    ker.weight = &hinv;
    double R = covering_radius(f, x, bp) * (1.0 + 1e-9);
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    return integrate_ball_kernel(abs_field(f), x, R, ker, geo, cfg, true);
}

ScalarField gradient_field(const ScalarField& u) {
    ScalarField g;
    g.id = u.id + ":gradmag";
    auto base = std::make_shared<ScalarField>(u);
    g.eval_fn = [base](const Point& x) { return base->gradient_magnitude(x); };
    g.support_ball = u.support_ball;
    g.support_box = u.support_box;
    g.nonnegative = true;
    return g;
}

MuCurve mu_curve(const ModulusCurve& eta, double gamma, double C) {
    if (!(gamma > 0) || !(gamma < 1))
        throw ContractError("mu_curve: gamma must lie in (0, 1)");
    if (!(C > 0)) throw ContractError("mu_curve: C must be positive");
    if (eta.radii.size() < 2) throw ContractError("mu_curve: need >= 2 rungs");
    WeightFn g = make_curve_weight(eta.radii, eta.values, 1.0 - gamma, "eta^(1-gamma)");
    const double ln2 = std::log(2.0);
    const int K = 40;
    MuCurve out;
    out.C = C;
    out.mu.kind = "mu";
    out.mu.radii = eta.radii;
    out.mu.values.resize(eta.radii.size());
    out.mu.argmax.assign(eta.radii.size(), -1);
    out.lower.resize(eta.radii.size());
    out.upper.resize(eta.radii.size());
    for (std::size_t j = 0; j < eta.radii.size(); ++j) {
        double r = eta.radii[j];
        // The log-2-weighted dyadic sums bracket the integral because the
        // integrand's non-1/t factor is nondecreasing.
        double sum_lo = 0.0, sum_hi = 0.0;
        for (int k = 0; k < K; ++k) {
            double gk = g(r * std::pow(2.0, -k));
            double gk1 = g(r * std::pow(2.0, -k - 1));
            sum_hi += ln2 * gk;
            sum_lo += ln2 * gk1;
        }
        double tail = weighted_log_power_tail(-1.0, 0.0, &g, r * std::pow(2.0, -K));
        double direct = weighted_log_power_tail(-1.0, 0.0, &g, r);
        out.mu.values[j] = (2.0 / C) * direct;
        out.lower[j] = (2.0 / C) * (sum_lo + tail);
        out.upper[j] = (2.0 / C) * (sum_hi + tail);
    }
    return out;
}

Lemma3Result check_lemma3(const ScalarField& f, double p, double gamma,
                          const BetaParams& bp, const CenterGrid& grid,
                          double r_max, int J, const QuadratureConfig& cfg,
                          ExponentConvention conv) {
    if (!(gamma > 0) || !(gamma < 1))
        throw ContractError("check_lemma3: gamma must lie in (0, 1)");
    Lemma3Result out;
    out.eta = stummel_modulus(f, p, bp, grid, r_max, J, cfg, nullptr, conv);
    // Rungs below the representable floor cannot enter the weight curve.
    std::size_t keep = out.eta.values.size();
    while (keep > 0 && out.eta.values[keep - 1] < 1e-300) --keep;
    if (keep < 3) {
        out.skipped = true;
        out.reason = "eta vanishes on the ladder: no scale range to compare";
        return out;
    }
    ModulusCurve eta = out.eta;
    eta.radii.resize(keep);
    eta.values.resize(keep);
    eta.errors.resize(keep);
    eta.argmax.resize(keep);
    out.doubling = doubling_constant(eta);
    double C = 1.0 / out.doubling;
    try {
        out.mu = mu_curve(eta, gamma, C);
    } catch (const DivergenceError& e) {
        out.skipped = true;
        out.reason = std::string("mu integral diverges (eta does not vanish fast "
                                 "enough): ") +
                     e.what();
        return out;
    }
    out.sandwich_ok = true;
    for (std::size_t j = 0; j < out.mu.mu.rungs(); ++j) {
        double slack = 1e-9 * out.mu.upper[j] + 1e-300;
        if (out.mu.lower[j] > out.mu.mu.values[j] + slack ||
            out.mu.mu.values[j] > out.mu.upper[j] + slack)
            out.sandwich_ok = false;
    }
    WeightFn wg = make_curve_weight(eta.radii, eta.values, gamma, "eta^gamma");
    out.xi = stummel_modulus(f, p, bp, grid, eta.radii[0],
                             static_cast<int>(keep) - 1, cfg, &wg, conv);
    out.pass = out.sandwich_ok;
    for (std::size_t j = 0; j < out.xi.rungs(); ++j) {
        double mu_j = out.mu.mu.values[j];
        double tol = 2.0 * out.xi.errors[j] + 1e-9 * mu_j;
        double ratio = mu_j > 0 ? out.xi.values[j] / mu_j
                                : (out.xi.values[j] > 0 ? HUGE_VAL : 0.0);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.worst_rung = static_cast<int>(j);
        }
        if (out.xi.values[j] > mu_j + tol) out.pass = false;
    }
    return out;
}

double GrowthFunction::Phi(double eps) const {
    if (!(eps > 0)) throw ContractError("GrowthFunction::Phi: eps must be positive");
    return std::pow(eps, snp) * phi(eps);
}

double GrowthFunction::Phi_inv(double y) const {
    if (!(y >= phi_lo_val_) || !(y <= phi_hi_val_))
        throw NumericsError("GrowthFunction::Phi_inv: " + format12(y) +
                            " outside the bracket range [" + format12(phi_lo_val_) +
                            ", " + format12(phi_hi_val_) + "]");
    double lo = std::log(eps_lo_), hi = std::log(eps_hi_);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        if (Phi(std::exp(mid)) < y)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double GrowthFunction::psi(double t) const {
    if (!(t > 0)) throw ContractError("GrowthFunction::psi: t must be positive");
    double eps = Phi_inv(1.0 / t);
    return 2.0 / (std::pow(eps, snp) * std::pow(phi(eps), sigma));
}

double GrowthFunction::G(double s) const {
    if (s <= 0) return 0.0;
    if (s < s_floor_) return t_floor_ * (s / s_floor_);  // linear overestimate
    if (!(s <= s_ceil_))
        throw NumericsError("GrowthFunction::G: argument " + format12(s) +
                            " beyond the constructed range");
    double lo = std::log(t_floor_), hi = std::log(t_ceil_);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        if (psi(std::exp(mid)) < s)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double GrowthFunction::roundtrip_max_rel_err(int npoints) const {
    double lo = std::log(t_floor_) + 1e-6, hi = std::log(t_ceil_) - 1e-6;
    double worst = 0.0;
    for (int i = 0; i < npoints; ++i) {
        double t = std::exp(lo + (hi - lo) * i / (npoints - 1));
        double back = G(psi(t));
        worst = std::max(worst, std::abs(back - t) / t);
    }
    return worst;
}

bool GrowthFunction::superlinear(double s_lo, double s_hi, int npoints) const {
    s_lo = std::max(s_lo, s_floor_ * (1 + 1e-9));
    s_hi = std::min(s_hi, s_ceil_ * (1 - 1e-9));
    if (!(s_lo < s_hi)) return false;
    double prev = -HUGE_VAL;
    for (int i = 0; i < npoints; ++i) {
        double s = std::exp(std::log(s_lo) +
                            (std::log(s_hi) - std::log(s_lo)) * i / (npoints - 1));
        double ratio = G(s) / s;
        if (ratio < prev * (1 - 1e-9)) return false;
        prev = ratio;
    }
    return true;
}

GrowthFunction build_growth_function(const WeightFn& phi, double sigma, double p,
                                     const BetaParams& bp, ExponentConvention conv) {
    if (!(sigma > 0) || !(sigma < 1))
        throw ContractError("build_growth_function: sigma must lie in (0, 1)");
    if (!(p > 0) || !(p <= bp.n + 1e-12))
        throw ContractError("build_growth_function: p must lie in (0, n]");
    GrowthFunction gf;
    gf.phi = phi;
    gf.sigma = sigma;
    gf.snp = kernel_exponent(p, bp, conv);
    if (phi.domain_max > 0) gf.eps_hi_ = std::min(gf.eps_hi_, phi.domain_max);
    gf.phi_lo_val_ = gf.Phi(gf.eps_lo_);
    gf.phi_hi_val_ = gf.Phi(gf.eps_hi_);
    double prev = -HUGE_VAL;
    for (int i = 0; i < 50; ++i) {
        double e = std::exp(std::log(gf.eps_lo_) +
                            (std::log(gf.eps_hi_) - std::log(gf.eps_lo_)) * i / 49.0);
        double v = gf.Phi(e);
        if (v <= prev)
            throw NumericsError("build_growth_function: Phi is not strictly "
                                "increasing on the bracket (phi '" +
                                phi.id + "')");
        prev = v;
    }
    gf.t_floor_ = 1.0 / gf.phi_hi_val_;
    gf.t_ceil_ = 1.0 / gf.phi_lo_val_;
    gf.s_floor_ = gf.psi(gf.t_floor_ * (1 + 1e-12));
    gf.s_ceil_ = gf.psi(gf.t_ceil_ * (1 - 1e-12));
    double rt = gf.roundtrip_max_rel_err(50);
    if (rt > 1e-8)
        throw NumericsError("build_growth_function: round trip G(psi(t)) = t "
                            "fails, max rel err " +
                            format12(rt));
    return gf;
}

BalanceCheck growth_balance(const GrowthFunction& gf, double fnorm_p, double Iphi) {
    if (!(fnorm_p > 0) || !(Iphi > 0))
        throw ContractError("growth_balance: both masses must be positive");
    BalanceCheck out;
    out.eps_star = gf.Phi_inv(fnorm_p / Iphi);
    double pe = gf.phi(out.eps_star);
    out.term1 = std::pow(pe, 1.0 - gf.sigma) * Iphi;
    out.term2 = std::pow(out.eps_star, -gf.snp) * std::pow(pe, -gf.sigma) * fnorm_p;
    out.rel_err = std::abs(out.term1 - out.term2) / std::max(out.term1, out.term2);
    return out;
}

Theorem1Result check_theorem1(const ScalarField& f, const ScalarField& V,
                              const WeightFn& phi, double sigma, double p, double r,
                              const BetaParams& bp, const CenterGrid& grid, int J,
                              const QuadratureConfig& cfg, ExponentConvention conv) {
    Theorem1Result out;
    GrowthFunction gf = build_growth_function(phi, sigma, p, bp, conv);
    out.roundtrip_max_err = gf.roundtrip_max_rel_err(50);
    out.roundtrip_ok = out.roundtrip_max_err <= 1e-8;
    // superlinearity probed across the top two decades of the constructed range
    out.superlinear_ok = gf.superlinear(gf.s_ceil() / 100.0, gf.s_ceil(), 25);

    if (!f.support_ball)
        throw ContractError("check_theorem1: f needs a declared support ball");
    ScalarField fp = pow_field(abs_field(f), p);
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    Kernel none;
    out.fnorm_p = integrate_ball_kernel(fp, f.support_ball->center,
                                        f.support_ball->radius * (1 + 1e-9), none,
                                        geo, cfg, false)
                      .value;
    if (!(out.fnorm_p > 0))
        throw ContractError("check_theorem1: ||f||_p^p must be positive");

    double Iphi0 = gen_frac_integral(fp, p, phi, f.support_ball->center, bp, cfg, conv)
                       .value;
    BalanceCheck bal = growth_balance(gf, out.fnorm_p, Iphi0);
    out.balance_rel_err = bal.rel_err;
    out.balance_ok = bal.rel_err <= 1e-6;

    bool xi_ok = false;
    try {
        out.xi = stummel_modulus(V, p, bp, grid, r, J, cfg, &phi, conv);
        xi_ok = true;
    } catch (const DivergenceError& e) {
        out.divergence_detected = true;
        out.skipped = true;
        out.reason = std::string("phi-weighted modulus of ") + V.id +
                     " diverges; the weighted-class hypothesis fails: " + e.what();
    }

    QuadratureConfig inner = lighten(cfg, 16, 16, 12);
    QuadratureConfig outer = lighten(cfg, 12, 8, 14);
    WeightFn phis = pow_weight(phi, sigma);
    auto I_op = [&](const Point& x) {
        return gen_frac_integral(fp, p, phis, x, bp, inner, conv).value;
    };

    Point origin(static_cast<std::size_t>(bp.n), 0.0);
    if (xi_ok) {
        auto g = [&](const Point& x) { return gf.G(I_op(x) / out.fnorm_p); };
        out.lhs = product_ball_integral(g, V, origin, r, bp, outer, &out.lhs_err);
        out.rhs = out.xi.values.front();
        out.rhs_err = out.xi.errors.front();
        double tol = 2.0 * (out.lhs_err + out.rhs_err) + 5e-3 * out.rhs;
        out.pass = out.roundtrip_ok && out.superlinear_ok && out.balance_ok &&
                   out.lhs <= out.rhs + tol;
    } else {
        out.pass = out.roundtrip_ok && out.superlinear_ok && out.balance_ok;
        out.fubini_ok = true;  // hypothesis void; nothing to cross-check
        return out;
    }

    // Fubini cross-check of the nested quadrature, valid when spt V lies in
    // the integration ball about the origin and the swapped inner integral
    // stays inside the weight's domain of definition for every base point.
    bool v_inside = V.support_ball &&
                    beta_norm(V.support_ball->center, bp) < 1e-12 &&
                    V.support_ball->radius <= r * (1 + 1e-12);
    if (v_inside && phis.domain_max > 0) {
        double dcc =
            beta_distance(f.support_ball->center, V.support_ball->center, bp);
        double probe = bp.k * (bp.k * (dcc + f.support_ball->radius) +
                               V.support_ball->radius);
        if (probe > phis.domain_max) v_inside = false;
    }
    if (v_inside) {
        double errA = 0;
        double A = product_ball_integral(I_op, V, origin, r, bp, outer, &errA);
        auto Jv = [&](const Point& y) {
            return gen_frac_integral(V, p, phis, y, bp, inner, conv).value;
        };
        ScalarField fb;
        fb.id = "fubini-swap";
        fb.eval_fn = [&](const Point& y) { return fp(y) * Jv(y); };
        fb.support_ball = fp.support_ball;
        IntegralResult bres = integrate_ball_kernel(fb, f.support_ball->center,
                                                    f.support_ball->radius * (1 + 1e-9),
                                                    none, geo, outer, true);
        double B = bres.value;
        double errB = bres.error_estimate;
        out.fubini_rel_err = std::abs(A - B) / std::max(std::abs(A), std::abs(B));
        out.fubini_ok =
            out.fubini_rel_err <= std::max(5e-3, 4.0 * (errA + errB) /
                                                     std::max(std::abs(A), 1e-300));
        if (!out.fubini_ok) out.pass = false;
    } else {
        out.fubini_ok = true;  // not applicable for this geometry
    }
    return out;
}

double lemma4_ratio(const ScalarField& f, double p, const WeightFn& h,
                    const Point& x, const BetaParams& bp, const QuadratureConfig& cfg,
                    ExponentConvention conv) {
    if (!(p > 1) || !(p <= bp.n + 1e-12))
        throw ContractError("lemma4_ratio: p must lie in (1, n]");
    double m = conv_scale(bp, conv);
    double R = covering_radius(f, x, bp) * (1.0 + 1e-9);
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    ScalarField af = abs_field(f);
    Kernel k1;
    k1.s = (bp.n - 1) * m;
    double lhs = integrate_ball_kernel(af, x, R, k1, geo, cfg, false).value;
    if (lhs == 0) return 0.0;
    WeightFn hinv = pow_weight(h, -1.0);
    Kernel kp;
    kp.s = (bp.n - p) * m;
    kp.weight = &hinv;
    ScalarField fp = pow_field(af, p);
    double i_ph = integrate_ball_kernel(fp, x, R, kp, geo, cfg, false).value;
    double pp = p / (p - 1.0);
    WeightFn hq = pow_weight(h, pp / p);
    double E = (bp.n - 1) - bp.n * m;
    double dini = geo.coarea_constant() * weighted_log_power_tail(E, 0.0, &hq, R);
    double rhs = std::pow(i_ph, 1.0 / p) * std::pow(dini, 1.0 / pp);
    if (rhs == 0) return HUGE_VAL;
    return lhs / rhs;
}

Lemma4Result check_lemma4(const ScalarField& f, double p, const WeightFn& h,
                          const BetaParams& bp, const QuadratureConfig& cfg,
                          int npoints, std::uint64_t seed, ExponentConvention conv) {
    if (npoints < 1) throw ContractError("check_lemma4: npoints must be >= 1");
    Lemma4Result out;
    out.npoints = npoints;
    out.tolerance = 1e-3;
    std::size_t n = static_cast<std::size_t>(bp.n);
    Point center(n, 0.0), halfw(n, 1.0);
    if (f.support_ball) {
        center = f.support_ball->center;
        for (std::size_t i = 0; i < n; ++i)
            halfw[i] = std::pow(f.support_ball->radius, 2.0 * bp.beta[i] / bp.a);
    } else if (f.support_box) {
        for (std::size_t i = 0; i < n; ++i) {
            center[i] = 0.5 * (f.support_box->lo[i] + f.support_box->hi[i]);
            halfw[i] = 0.5 * (f.support_box->hi[i] - f.support_box->lo[i]);
        }
    } else {
        throw ContractError("check_lemma4: f needs a declared compact support");
    }
    Rng rng(seed);
    out.pass = true;
    for (int i = 0; i < npoints; ++i) {
        Point x(n);
        for (std::size_t d = 0; d < n; ++d)
            x[d] = center[d] + (2.0 * rng.uniform() - 1.0) * 1.2 * halfw[d];
        if (f.is_singular_at(x)) continue;
        double ratio = lemma4_ratio(f, p, h, x, bp, cfg, conv);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.worst_point = x;
        }
        if (ratio > 1.0 + out.tolerance) {
            ++out.violations;
            out.pass = false;
        }
    }
    return out;
}

SobolevResult check_sobolev_pointwise(const ScalarField& u, const BetaParams& bp,
                                      const QuadratureConfig& cfg, int npoints,
                                      std::uint64_t seed, ExponentConvention conv) {
    if (npoints < 1) throw ContractError("check_sobolev_pointwise: npoints >= 1");
    SobolevResult out;
    out.npoints = npoints;
    if (!u.support_ball)
        throw ContractError("check_sobolev_pointwise: u needs a support ball");
    ScalarField g = gradient_field(u);
    std::size_t n = static_cast<std::size_t>(bp.n);
    const Point& c0 = u.support_ball->center;
    Point halfw(n);
    for (std::size_t i = 0; i < n; ++i)
        halfw[i] = std::pow(u.support_ball->radius, 2.0 * bp.beta[i] / bp.a);
    auto ratio_at = [&](const Point& x, const QuadratureConfig& qc) {
        if (u.is_singular_at(x)) return 0.0;
        double uv = std::abs(u(x));
        if (uv == 0) return 0.0;
        double iv = frac_integral(g, 1.0, x, bp, qc, conv).value;
        return iv > 0 ? uv / iv : HUGE_VAL;
    };
    Rng rng(seed);
    std::vector<Point> pts;
    pts.push_back(c0);
    for (int i = 1; i < npoints; ++i) {
        Point x(n);
        for (std::size_t d = 0; d < n; ++d)
            x[d] = c0[d] + (2.0 * rng.uniform() - 1.0) * halfw[d];
        pts.push_back(x);
    }
    for (const Point& x : pts)
        out.measured = std::max(out.measured, ratio_at(x, cfg));
    out.center_ratio = ratio_at(c0, cfg);
    if (bp.isotropic(1e-12) && bp.n == 2) {
        out.oracle = 1.0 / (2.0 * std::acos(-1.0));
        out.pass = out.measured <= out.oracle * 1.2 && out.measured >= out.oracle * 0.8;
        out.note = "isotropic n=2: compared with the closed form 1/(2 pi)";
    } else {
        QuadratureConfig fine = cfg;
        fine.angular_order = cfg.angular_order + cfg.angular_order / 2;
        fine.radial_order = cfg.radial_order + cfg.radial_order / 2;
        for (const Point& x : pts)
            out.refined = std::max(out.refined, ratio_at(x, fine));
        double rel = std::abs(out.refined - out.measured) /
                     std::max(out.measured, 1e-300);
        out.pass = rel <= 0.10;
        out.note = "refinement stability: rel change " + format12(rel);
    }
    return out;
}

EmbeddingResult check_corollary1_and_prop1(const ScalarField& u, const ScalarField& V,
                                           const WeightFn& phi, double sigma, double p,
                                           double r, const BetaParams& bp,
                                           const CenterGrid& grid, int J,
                                           const QuadratureConfig& cfg, double gamma,
                                           ExponentConvention conv) {
    if (!(p > 1) || !(p <= bp.n + 1e-12))
        throw ContractError("check_corollary1_and_prop1: p must lie in (1, n]");
    if (!u.support_ball)
        throw ContractError("check_corollary1_and_prop1: u needs a support ball");
    EmbeddingResult out;
    double pp = p / (p - 1.0);
    out.gamma_default = gamma <= 0;
    out.gamma = out.gamma_default ? 1.0 / (1.0 + sigma * pp / p) : gamma;

    ScalarField f = gradient_field(u);
    ScalarField fp = pow_field(f, p);
    const BetaGeometry& geo = geometry_for(bp, cfg.angular_order);
    Kernel none;
    double N = integrate_ball_kernel(fp, u.support_ball->center,
                                     u.support_ball->radius * (1 + 1e-9), none, geo,
                                     cfg, false)
                   .value;
    if (!(N > 0))
        throw ContractError("check_corollary1_and_prop1: ||grad u||_p^p must be positive");

    SobolevResult sob =
        check_sobolev_pointwise(u, bp, lighten(cfg, 16, 16, 12), 24, 3, conv);
    out.sobolev_ratio = sob.measured;

    double m = conv_scale(bp, conv);
    double R_D = bp.k * (r + u.support_ball->radius) * (1 + 1e-9);
    double E = (bp.n - 1) - bp.n * m;
    QuadratureConfig outer = lighten(cfg, 12, 8, 14);

    // --- corollary side: weight phi, modulus xi ---
    try {
        WeightFn hq = pow_weight(phi, sigma * pp / p);
        double dini = geo.coarea_constant() * weighted_log_power_tail(E, 0.0, &hq, R_D);
        out.hoelder_factor = std::pow(dini, 1.0 / pp);
        out.cor_constant = std::pow(out.sobolev_ratio, p) * std::pow(out.hoelder_factor, p);
        GrowthFunction gf = build_growth_function(phi, sigma, p, bp, conv);
        out.xi = stummel_modulus(V, p, bp, grid, r, J, cfg, &phi, conv);
        auto g = [&](const Point& x) {
            return gf.G(std::pow(std::abs(u(x)), p) / N);
        };
        double lhs_err = 0;
        out.cor_lhs = product_ball_integral(g, V, Point(static_cast<std::size_t>(bp.n), 0.0),
                                            r, bp, outer, &lhs_err);
        out.cor_rhs = out.cor_constant * out.xi.values.front();
        double tol = 2.0 * (lhs_err + out.cor_constant * out.xi.errors.front()) +
                     5e-3 * out.cor_rhs;
        out.cor_pass = out.cor_lhs <= out.cor_rhs + tol;
    } catch (const DivergenceError& e) {
        out.cor_skipped = true;
        out.cor_reason = std::string("hypothesis fails (divergent modulus or "
                                     "tail): ") +
                         e.what();
    }

    // --- proposition side: weight eta^gamma, bound mu ---
    try {
        out.eta = stummel_modulus(V, p, bp, grid, r, J, cfg, nullptr, conv);
        std::size_t keep = out.eta.values.size();
        while (keep > 0 && out.eta.values[keep - 1] < 1e-300) --keep;
        if (keep < 3) {
            out.prop_skipped = true;
            out.prop_reason = "eta vanishes on the ladder";
            return out;
        }
        ModulusCurve eta = out.eta;
        eta.radii.resize(keep);
        eta.values.resize(keep);
        eta.errors.resize(keep);
        eta.argmax.resize(keep);
        double Cd = doubling_constant(eta);
        out.mu = mu_curve(eta, out.gamma, 1.0 / Cd);
        WeightFn phig = make_curve_weight(eta.radii, eta.values, out.gamma, "eta^gamma");
        WeightFn hq = pow_weight(phig, sigma * pp / p);
        double dini = geo.coarea_constant() * weighted_log_power_tail(E, 0.0, &hq, R_D);
        out.prop_constant = std::pow(out.sobolev_ratio, p) * std::pow(dini, p / pp);
        GrowthFunction gf = build_growth_function(phig, sigma, p, bp, conv);
        auto g = [&](const Point& x) {
            return gf.G(std::pow(std::abs(u(x)), p) / N);
        };
        double lhs_err = 0;
        out.prop_lhs = product_ball_integral(g, V, Point(static_cast<std::size_t>(bp.n), 0.0),
                                             r, bp, outer, &lhs_err);
        out.prop_rhs = out.prop_constant * out.mu.mu.values.front();
        double tol = 2.0 * lhs_err + 5e-3 * out.prop_rhs;
        out.prop_pass = out.prop_lhs <= out.prop_rhs + tol;
    } catch (const DivergenceError& e) {
        out.prop_skipped = true;
        out.prop_reason = std::string("hypothesis fails (divergent modulus or "
                                      "tail): ") +
                          e.what();
    }
    return out;
}

}  // namespace betapot
