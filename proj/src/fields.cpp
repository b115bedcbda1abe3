#include "betapot/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace betapot {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Point origin_point(int n) { return Point(n, 0.0); }

double sq_norm(const Point& x, const Point& c) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return s;
}

/// Certified beta-radius of a ball covering the Euclidean ball |y - c| <= R.
double covering_beta_radius(double R, const BetaParams& bp) {
    double s = 0;
    for (double b : bp.beta) s += std::pow(R, 1.0 / b);
    return std::pow(s, bp.abs_beta / bp.n);
}

}  // namespace

double RadialModel::eval(double t) const {
    if (!(t > 0)) throw DomainError("RadialModel: t must be positive");
    double v = coeff * std::pow(t, -power);
    if (log_power != 0.0) {
        if (t >= 1.0) throw DomainError("RadialModel: log factor requires t < 1");
        v *= std::pow(-std::log(t), -log_power);
    }
    return v;
}

double ScalarField::operator()(const Point& x) const {
    for (const auto& s : singularities) {
        bool hit = s.location.size() == x.size();
        for (std::size_t i = 0; hit && i < x.size(); ++i)
            if (x[i] != s.location[i]) hit = false;
        if (hit)
            throw DomainError("ScalarField(" + id + "): evaluation at singular point");
    }
    if (support_box) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < support_box->lo[i] || x[i] > support_box->hi[i]) return 0.0;
    }
    return eval_fn(x);
}

bool ScalarField::is_singular_at(const Point& x) const {
    for (const auto& s : singularities) {
        bool hit = s.location.size() == x.size();
        for (std::size_t i = 0; hit && i < x.size(); ++i)
            if (x[i] != s.location[i]) hit = false;
        if (hit) return true;
    }
    return false;
}

double ScalarField::gradient_magnitude(const Point& x, double h) const {
    if (is_singular_at(x))
        throw DomainError("gradient_magnitude(" + id + "): singular point");
    if (grad_mag_fn) return grad_mag_fn(x);
    double s = 0;
    Point xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double d = ((*this)(xp) - (*this)(xm)) / (2 * h);
        s += d * d;
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return std::sqrt(s);
}

bool ScalarField::support_misses_ball(const Point& center, double r,
                                      const BetaParams& bp) const {
    Point sc;
    double sr = 0;
    if (support_ball) {
        sc = support_ball->center;
        sr = support_ball->radius;
    } else if (support_box) {
        sc.resize(support_box->lo.size());
        Point half(sc.size());
        for (std::size_t i = 0; i < sc.size(); ++i) {
            sc[i] = 0.5 * (support_box->lo[i] + support_box->hi[i]);
            half[i] = 0.5 * (support_box->hi[i] - support_box->lo[i]);
        }
        sr = beta_norm(half, bp);
    } else {
        return false;
    }
    // d(center, sc) <= k (|y-center| + |y-sc|): any y in the ball that also
    // meets the support would force d/k - r <= sr.
    const double d = beta_distance(center, sc, bp);
    return d / bp.k - r >= sr;
}

ScalarField make_field(const std::string& id,
                       const std::map<std::string, double>& params,
                       const BetaParams& bp) {
    const int n = bp.n;
    ScalarField f;
    f.id = id;
    if (id == "const") {
        const double c = get_param(params, "c", 1.0);
        if (!(c >= 0)) throw ContractError("const field: c must be >= 0");
        f.eval_fn = [c](const Point&) { return c; };
        f.grad_mag_fn = [](const Point&) { return 0.0; };
        f.beta_radial_profile = RadialModel{c, 0.0, 0.0};
        f.profile_center = origin_point(n);
        f.profile_radius = std::numeric_limits<double>::infinity();
    } else if (id == "boxconst") {
        const double c = get_param(params, "c", 1.0);
        const double half = get_param(params, "half", 1.0);
        if (!(half > 0)) throw ContractError("boxconst field: half must be > 0");
        f.eval_fn = [c](const Point&) { return c; };
        f.support_box = SupportBox{Point(n, -half), Point(n, half)};
    } else if (id == "ballconst") {
        const double c = get_param(params, "c", 1.0);
        const double radius = get_param(params, "radius", 1.0);
        if (!(radius > 0)) throw ContractError("ballconst field: radius must be > 0");
        const BetaParams bpc = bp;
        f.eval_fn = [c, radius, bpc](const Point& x) {
            return beta_norm(x, bpc) < radius ? c : 0.0;
        };
        f.grad_mag_fn = [](const Point&) { return 0.0; };
        f.support_ball = SupportBall{origin_point(n), radius};
        f.beta_radial_profile = RadialModel{c, 0.0, 0.0};
        f.profile_center = origin_point(n);
        f.profile_radius = radius;
    } else if (id == "gaussian") {
        const double amp = get_param(params, "amp", 1.0);
        const double w = get_param(params, "width", 0.5);
        if (!(w > 0)) throw ContractError("gaussian field: width must be > 0");
        Point c = origin_point(n);
        const double inv_w2 = 1.0 / (w * w);
        f.eval_fn = [amp, inv_w2, c](const Point& x) {
            return amp * std::exp(-sq_norm(x, c) * inv_w2);
        };
        f.grad_mag_fn = [amp, inv_w2, c](const Point& x) {
            const double r2 = sq_norm(x, c);
            return amp * std::exp(-r2 * inv_w2) * 2.0 * std::sqrt(r2) * inv_w2;
        };
    } else if (id == "power") {
        const double s = get_param(params, "s", 0.25);
        const double radius = get_param(params, "radius", 1.0);
        if (!(s > 0)) throw ContractError("power field: s must be > 0");
        if (!(radius > 0)) throw ContractError("power field: radius must be > 0");
        const BetaParams bpc = bp;
        f.eval_fn = [s, radius, bpc](const Point& x) {
            const double t = beta_norm(x, bpc);
            return t < radius ? std::pow(t, -s) : 0.0;
        };
        f.support_ball = SupportBall{origin_point(n), radius};
        f.singularities.push_back(
            Singularity{origin_point(n), RadialModel{1.0, s, 0.0}, radius, true});
        f.beta_radial_profile = RadialModel{1.0, s, 0.0};
        f.profile_center = origin_point(n);
        f.profile_radius = radius;
    } else if (id == "example1") {
        return make_example1_field(bp, get_param(params, "delta", -1.0));
    } else if (id == "bump") {
        const double R = get_param(params, "radius", 0.5);
        const double amp = get_param(params, "amp", 1.0);
        if (!(R > 0)) throw ContractError("bump field: radius must be > 0");
        Point c = origin_point(n);
        const double R2 = R * R;
        f.eval_fn = [amp, R2, c](const Point& x) {
            const double r2 = sq_norm(x, c);
            if (r2 >= R2) return 0.0;
            return amp * std::exp(1.0 - R2 / (R2 - r2));
        };
        f.grad_mag_fn = [amp, R2, c](const Point& x) {
            const double r2 = sq_norm(x, c);
            if (r2 >= R2) return 0.0;
            const double d = R2 - r2;
            return amp * std::exp(1.0 - R2 / d) * 2.0 * R2 * std::sqrt(r2) / (d * d);
        };
        f.support_ball = SupportBall{c, covering_beta_radius(R, bp)};
    } else if (id == "quadratic") {
        const double q = get_param(params, "q", 1.0);
        const double c0 = get_param(params, "c", 0.0);
        Point l(n, 0.0);
        for (int i = 0; i < n; ++i)
            l[i] = get_param(params, "l" + std::to_string(i), 0.0);
        f.eval_fn = [q, c0, l](const Point& x) {
            double v = c0;
            for (std::size_t i = 0; i < x.size(); ++i) v += q * x[i] * x[i] + l[i] * x[i];
            return v;
        };
        f.grad_mag_fn = [q, l](const Point& x) {
            double s = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double g = 2 * q * x[i] + l[i];
                s += g * g;
            }
            return std::sqrt(s);
        };
        f.nonnegative = false;
    } else {
        throw ContractError("make_field: unknown field id '" + id + "'");
    }
    return f;
}

ScalarField make_example1_field(const BetaParams& bp, double delta) {
    if (delta <= 0) delta = std::exp(-3.0);
    if (delta >= 1.0)
        throw ContractError("example1 field: delta must be < 1 (log factor)");
    const int n = bp.n;
    ScalarField f;
    f.id = "example1";
    const BetaParams bpc = bp;
    f.eval_fn = [bpc, delta](const Point& x) {
        const double t = beta_norm(x, bpc);
        if (t >= delta) return 0.0;
        const double lg = -std::log(t);
        return 1.0 / (t * t * std::pow(lg, 6.0));
    };
    f.support_ball = SupportBall{origin_point(n), delta};
    f.singularities.push_back(
        Singularity{origin_point(n), RadialModel{1.0, 2.0, 6.0}, delta, true});
    f.beta_radial_profile = RadialModel{1.0, 2.0, 6.0};
    f.profile_center = origin_point(n);
    f.profile_radius = delta;
    return f;
}

ScalarField pow_field(const ScalarField& f, double p) {
    if (!(p > 0)) throw ContractError("pow_field: p must be > 0");
    auto base = std::make_shared<ScalarField>(f);
    ScalarField g;
    g.id = f.id + "^" + format12(p);
    g.eval_fn = [base, p](const Point& x) {
        const double v = (*base)(x);
        if (v < 0) throw DomainError("pow_field: negative base value");
        return v == 0.0 ? 0.0 : std::pow(v, p);
    };
    g.support_ball = f.support_ball;
    g.support_box = f.support_box;
    g.nonnegative = true;
    for (const auto& s : f.singularities) {
        Singularity t = s;
        t.model = RadialModel{std::pow(s.model.coeff, p), s.model.power * p,
                              s.model.log_power * p};
        g.singularities.push_back(std::move(t));
    }
    if (f.beta_radial_profile) {
        const RadialModel& m = *f.beta_radial_profile;
        g.beta_radial_profile =
            RadialModel{std::pow(m.coeff, p), m.power * p, m.log_power * p};
        g.profile_center = f.profile_center;
        g.profile_radius = f.profile_radius;
    }
    return g;
}

ScalarField abs_field(const ScalarField& f) {
    if (f.nonnegative) return f;
    auto base = std::make_shared<ScalarField>(f);
    ScalarField g;
    g.id = "|" + f.id + "|";
    g.eval_fn = [base](const Point& x) { return std::abs((*base)(x)); };
    g.support_ball = f.support_ball;
    g.support_box = f.support_box;
    g.nonnegative = true;
    return g;
}

GridData read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("read_grid: cannot open " + path);
    GridData g;
    std::string line;
    // header lines: optional comments, then n/dims/origin/spacing in order
    auto next_tokens = [&](const std::string& expect) {
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            std::string key;
            ss >> key;
            if (key != expect)
                throw ContractError("read_grid: expected '" + expect + "', got '" + key + "'");
            std::vector<double> vals;
            double v;
            while (ss >> v) vals.push_back(v);
            return vals;
        }
        throw ContractError("read_grid: truncated header, missing '" + expect + "'");
    };
    auto nv = next_tokens("n");
    if (nv.size() != 1 || nv[0] < 1) throw ContractError("read_grid: bad n");
    g.n = static_cast<int>(nv[0]);
    auto dv = next_tokens("dims");
    if (static_cast<int>(dv.size()) != g.n) throw ContractError("read_grid: bad dims");
    std::size_t total = 1;
    for (double d : dv) {
        if (d < 2) throw ContractError("read_grid: each dim must be >= 2");
        g.dims.push_back(static_cast<int>(d));
        total *= static_cast<std::size_t>(d);
    }
    g.origin = next_tokens("origin");
    g.spacing = next_tokens("spacing");
    if (static_cast<int>(g.origin.size()) != g.n ||
        static_cast<int>(g.spacing.size()) != g.n)
        throw ContractError("read_grid: origin/spacing size mismatch");
    for (double s : g.spacing)
        if (!(s > 0)) throw ContractError("read_grid: spacing must be positive");
    g.values.reserve(total);
    double v;
    while (in >> v) g.values.push_back(v);
    if (g.values.size() != total)
        throw ContractError("read_grid: expected " + std::to_string(total) +
                            " values, got " + std::to_string(g.values.size()));
    return g;
}

void write_grid(const std::string& path, const GridData& g) {
    std::ofstream out(path);
    if (!out) throw ContractError("write_grid: cannot open " + path);
    out << "# betapot grid v1\n";
    out << "n " << g.n << "\n";
    out << "dims";
    for (int d : g.dims) out << " " << d;
    out << "\norigin";
    for (double o : g.origin) out << " " << format12(o);
    out << "\nspacing";
    for (double s : g.spacing) out << " " << format12(s);
    out << "\n";
    const int last = g.dims.back();
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        out << format12(g.values[i]);
        out << (((i + 1) % static_cast<std::size_t>(last) == 0) ? '\n' : ' ');
    }
}

ScalarField make_grid_field(GridData g) {
    const int n = g.n;
    SupportBox box;
    box.lo = g.origin;
    box.hi.resize(n);
    for (int i = 0; i < n; ++i)
        box.hi[i] = g.origin[i] + g.spacing[i] * (g.dims[i] - 1);
    auto data = std::make_shared<GridData>(std::move(g));
    ScalarField f;
    f.id = "grid";
    f.support_box = box;
    f.eval_fn = [data, n](const Point& x) {
        // multilinear interpolation; clamp to the boundary cell
        std::vector<int> base(n);
        std::vector<double> frac(n);
        for (int i = 0; i < n; ++i) {
            double u = (x[i] - data->origin[i]) / data->spacing[i];
            u = std::clamp(u, 0.0, static_cast<double>(data->dims[i] - 1));
            int b = std::min(static_cast<int>(u), data->dims[i] - 2);
            base[i] = b;
            frac[i] = u - b;
        }
        double acc = 0;
        const int corners = 1 << n;
        for (int m = 0; m < corners; ++m) {
            double w = 1;
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i) {
                const int bit = (m >> i) & 1;
                w *= bit ? frac[i] : 1.0 - frac[i];
                idx = idx * static_cast<std::size_t>(data->dims[i]) +
                      static_cast<std::size_t>(base[i] + bit);
            }
            acc += w * data->values[idx];
        }
        return acc;
    };
    return f;
}

double WeightFn::operator()(double t) const {
    if (!(t > 0)) throw DomainError("WeightFn(" + id + "): t must be positive");
    if (domain_max > 0) {
        if (t > domain_max * (1 + 1e-9))
            throw DomainError("WeightFn(" + id + "): t exceeds domain_max");
        t = std::min(t, domain_max);  // absorb quadrature-node roundoff
    }
    return eval_fn(t);
}

WeightFn make_weight(const std::string& id,
                     const std::map<std::string, double>& params) {
    WeightFn w;
    w.id = id;
    if (id == "one") {
        w.eval_fn = [](double) { return 1.0; };
        w.limit_zero = false;
        w.near_zero = RadialModel{1.0, 0.0, 0.0};
    } else if (id == "power") {
        const double alpha = get_param(params, "alpha", 0.5);
        w.eval_fn = [alpha](double t) { return std::pow(t, alpha); };
        w.monotone_nondecreasing = alpha >= 0;
        w.limit_zero = alpha > 0;
        w.near_zero = RadialModel{1.0, -alpha, 0.0};
    } else if (id == "logpow") {
        const double alpha = get_param(params, "alpha", 0.0);
        const double m = get_param(params, "m", 1.0);
        w.eval_fn = [alpha, m](double t) {
            return std::pow(t, alpha) * std::pow(-std::log(t), -m);
        };
        w.domain_max = std::exp(-1.0);
        w.monotone_nondecreasing = alpha >= 0 && m >= 0;
        w.limit_zero = alpha > 0 || (alpha == 0 && m > 0);
        w.near_zero = RadialModel{1.0, -alpha, m};
    } else {
        throw ContractError("make_weight: unknown weight id '" + id + "'");
    }
    return w;
}

WeightFn pow_weight(const WeightFn& w, double q) {
    if (q == 0.0) throw ContractError("pow_weight: q must be nonzero");
    auto base = std::make_shared<WeightFn>(w);
    WeightFn g;
    g.id = w.id + "^" + format12(q);
    g.eval_fn = [base, q](double t) { return std::pow((*base)(t), q); };
    g.near_zero = RadialModel{std::pow(w.near_zero.coeff, q),
                              w.near_zero.power * q, w.near_zero.log_power * q};
    g.exact_below = w.exact_below;
    g.domain_max = w.domain_max;
    g.monotone_nondecreasing = (q > 0) == w.monotone_nondecreasing;
    g.limit_zero = q > 0 && w.limit_zero;
    return g;
}

WeightFn make_curve_weight(const std::vector<double>& radii,
                           const std::vector<double>& values, double gamma,
                           const std::string& id) {
    if (radii.size() != values.size() || radii.size() < 2)
        throw ContractError("make_curve_weight: need >= 2 matching samples");
    for (std::size_t j = 0; j + 1 < radii.size(); ++j)
        if (!(radii[j] > radii[j + 1]))
            throw ContractError("make_curve_weight: radii must be strictly decreasing");
    for (double v : values)
        if (!(v > 0)) throw NumericsError("make_curve_weight: curve values must be positive");
    auto lr = std::make_shared<std::vector<double>>(radii.size());
    auto lv = std::make_shared<std::vector<double>>(values.size());
    for (std::size_t j = 0; j < radii.size(); ++j) {
        (*lr)[j] = std::log(radii[j]);
        (*lv)[j] = std::log(values[j]);
    }
    const std::size_t J = radii.size() - 1;
    WeightFn w;
    w.id = id;
    w.eval_fn = [lr, lv, gamma, J](double t) {
        const double lt = std::log(t);
        std::size_t hi;  // interpolate on [hi, hi-1] in ladder indexing
        if (lt >= (*lr)[0]) hi = 1;
        else if (lt <= (*lr)[J]) hi = J;
        else {
            // radii descending => log radii descending; binary search
            std::size_t lo = 0, up = J;
            while (up - lo > 1) {
                const std::size_t mid = (lo + up) / 2;
                if ((*lr)[mid] > lt) lo = mid; else up = mid;
            }
            hi = up;
        }
        const double slope = ((*lv)[hi - 1] - (*lv)[hi]) / ((*lr)[hi - 1] - (*lr)[hi]);
        const double lw = (*lv)[hi] + slope * (lt - (*lr)[hi]);
        return std::exp(gamma * lw);
    };
    const double bottom_slope =
        ((*lv)[J - 1] - (*lv)[J]) / ((*lr)[J - 1] - (*lr)[J]);
    w.near_zero.log_power = 0.0;
    w.near_zero.power = -gamma * bottom_slope;
    w.near_zero.coeff =
        std::exp(gamma * ((*lv)[J] - bottom_slope * (*lr)[J]));
    w.exact_below = radii[J];  // below the ladder the power-law continuation is exact
    w.monotone_nondecreasing = true;
    for (std::size_t j = 0; j + 1 < values.size(); ++j)
        if (values[j] < values[j + 1] * (1.0 - 1e-12)) w.monotone_nondecreasing = false;
    w.limit_zero = bottom_slope > 0;
    return w;
}

}  // namespace betapot
