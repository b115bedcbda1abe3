#include "betapot/cli_config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "betapot/operators.hpp"
#include "betapot/report.hpp"

namespace betapot {

const std::vector<FlagSpec>& cli_flag_table() {
    static const std::vector<FlagSpec> table = {
        {"--beta", "beta", "anisotropy exponents beta_1,...,beta_n (each >= 1/2)", 'v'},
        {"--x", "x", "first point, comma-separated coordinates", 'v'},
        {"--y", "y", "second point, comma-separated coordinates", 'v'},
        {"--point", "point", "evaluation point (defaults to the origin)", 'v'},
        {"--p", "p", "integrability exponent p of the kernel t^{-(n-p)a}", 'd'},
        {"--lambda", "lambda", "Morrey exponent lambda in r^{-a lambda}", 'd'},
        {"--sigma", "sigma", "interpolation exponent sigma in (0,1)", 'd'},
        {"--gamma", "gamma", "exponent applied to --curve-file values used as a weight", 'd'},
        {"--epsilon", "epsilon", "offset above the critical Morrey exponent n-2", 'd'},
        {"--radius", "radius", "ball radius", 'd'},
        {"--rmax", "rmax", "top radius of the dyadic ladder", 'd'},
        {"-J,--rungs", "rungs", "number of dyadic halvings below --rmax", 'i'},
        {"--field", "field", "field id: const, boxconst, ballconst, gaussian, power, example1, bump, quadratic", 's'},
        {"--field-params", "field_params", "field parameters as k1=v1,k2=v2", 's'},
        {"--grid-file", "grid_file", "tabulated field file (as written by the tool) used instead of --field", 's'},
        {"--weight", "weight", "kernel weight id: one, power, logpow", 's'},
        {"--weight-params", "weight_params", "weight parameters as k1=v1,k2=v2", 's'},
        {"--curve-file", "curve_file", "curve CSV (as written by the tool) used as the kernel weight", 's'},
        {"--suite", "suite", "verification suite id, or 'all'", 's'},
        {"--seed", "seed", "RNG seed for sampling and Monte Carlo", 'u'},
        {"--convention", "convention", "kernel exponent convention: auto, generalized, classical", 's'},
        {"--angular-order", "angular_order", "Gauss-Legendre points per angular axis", 'i'},
        {"--radial-order", "radial_order", "Gauss-Legendre points per radial panel", 'i'},
        {"--ladder-depth", "ladder_depth", "dyadic annuli resolved before the analytic core", 'i'},
        {"--rel-tol", "rel_tol", "relative tolerance of adaptive integration", 'd'},
        {"--abs-tol", "abs_tol", "absolute tolerance of adaptive integration", 'd'},
        {"--mc-budget", "mc_budget", "Monte Carlo sample budget", 'u'},
        {"--metric-triples", "metric_triples", "random triples for the metric-axioms suite", 'i'},
        {"--lemma4-points", "lemma4_points", "sample points for the pointwise-split suite", 'i'},
        {"--sobolev-points", "sobolev_points", "sample points for the pointwise-Sobolev suite", 'i'},
        {"--csv-dir", "csv_dir", "directory for per-claim curve CSV side files", 's'},
        {"--timings", "timings", "include per-entry runtimes in reports (breaks byte determinism)", 'b'},
        {"--format", "format", "report format: json or text", 's'},
        {"--out", "out_file", "write the primary output to this file instead of stdout", 's'},
    };
    return table;
}

std::vector<std::string> run_config_field_names() {
    return {"beta", "x", "y", "point", "p", "lambda", "sigma", "gamma",
            "epsilon", "radius", "rmax", "rungs", "field", "field_params",
            "grid_file", "weight", "weight_params", "curve_file", "suite",
            "seed", "convention", "angular_order", "radial_order",
            "ladder_depth", "rel_tol", "abs_tol", "mc_budget", "metric_triples",
            "lemma4_points", "sobolev_points", "csv_dir", "timings", "format",
            "out_file"};
}

std::vector<std::string> command_names() {
    return {"dist", "ball-volume", "morrey-norm", "stummel", "frac-integral",
            "growth-fn", "verify", "example1"};
}

const std::map<std::string, std::vector<std::string>>& command_fields() {
    static const std::vector<std::string> quad = {
        "angular_order", "radial_order", "ladder_depth", "rel_tol", "abs_tol"};
    static const auto with = [](std::vector<std::string> base,
                                const std::vector<std::string>& extra) {
        base.insert(base.end(), extra.begin(), extra.end());
        return base;
    };
    static const std::map<std::string, std::vector<std::string>> fields = {
        {"dist", {"beta", "x", "y"}},
        {"ball-volume", {"beta", "radius", "angular_order"}},
        {"morrey-norm",
         with({"beta", "lambda", "field", "field_params", "grid_file", "rmax",
               "rungs", "seed", "out_file"},
              quad)},
        {"stummel",
         with({"beta", "p", "field", "field_params", "grid_file", "weight",
               "weight_params", "curve_file", "gamma", "rmax", "rungs",
               "convention", "seed", "out_file"},
              quad)},
        {"frac-integral",
         with({"beta", "p", "field", "field_params", "grid_file", "point",
               "weight", "weight_params", "curve_file", "gamma", "convention",
               "seed"},
              quad)},
        {"growth-fn",
         {"beta", "p", "sigma", "weight", "weight_params", "curve_file",
          "gamma", "convention", "out_file"}},
        {"verify",
         with({"suite", "seed", "rungs", "convention", "metric_triples",
               "lemma4_points", "sobolev_points", "epsilon", "rmax", "csv_dir",
               "timings", "format", "out_file", "mc_budget"},
              quad)},
        {"example1",
         with({"beta", "seed", "convention", "epsilon", "rmax", "csv_dir",
               "timings", "format", "out_file"},
              quad)},
    };
    return fields;
}

RunConfig make_run_config(const std::string& command) {
    RunConfig rc;
    if (command == "verify" || command == "example1") rc.rmax = std::exp(-3.0);
    if (command == "growth-fn") {
        rc.weight = "power";
        rc.weight_params = "alpha=1";
    }
    return rc;
}

void attach_flags(CLI::App& app, RunConfig& rc,
                  const std::vector<std::string>& fields) {
    for (const std::string& f : fields) {
        const FlagSpec* spec = nullptr;
        for (const FlagSpec& s : cli_flag_table())
            if (f == s.field) {
                spec = &s;
                break;
            }
        if (!spec) throw ContractError("attach_flags: unknown field '" + f + "'");
        CLI::Option* opt = nullptr;
        if (f == "beta")
            opt = app.add_option(spec->flag, rc.beta, spec->help)->delimiter(',');
        else if (f == "x")
            opt = app.add_option(spec->flag, rc.x, spec->help)->delimiter(',');
        else if (f == "y")
            opt = app.add_option(spec->flag, rc.y, spec->help)->delimiter(',');
        else if (f == "point")
            opt = app.add_option(spec->flag, rc.point, spec->help)->delimiter(',');
        else if (f == "p")
            opt = app.add_option(spec->flag, rc.p, spec->help);
        else if (f == "lambda")
            opt = app.add_option(spec->flag, rc.lambda, spec->help);
        else if (f == "sigma")
            opt = app.add_option(spec->flag, rc.sigma, spec->help);
        else if (f == "gamma")
            opt = app.add_option(spec->flag, rc.gamma, spec->help);
        else if (f == "epsilon")
            opt = app.add_option(spec->flag, rc.epsilon, spec->help);
        else if (f == "radius")
            opt = app.add_option(spec->flag, rc.radius, spec->help);
        else if (f == "rmax")
            opt = app.add_option(spec->flag, rc.rmax, spec->help);
        else if (f == "rungs")
            opt = app.add_option(spec->flag, rc.rungs, spec->help);
        else if (f == "field")
            opt = app.add_option(spec->flag, rc.field, spec->help);
        else if (f == "field_params")
            opt = app.add_option(spec->flag, rc.field_params, spec->help);
        else if (f == "grid_file")
            opt = app.add_option(spec->flag, rc.grid_file, spec->help);
        else if (f == "weight")
            opt = app.add_option(spec->flag, rc.weight, spec->help);
        else if (f == "weight_params")
            opt = app.add_option(spec->flag, rc.weight_params, spec->help);
        else if (f == "curve_file")
            opt = app.add_option(spec->flag, rc.curve_file, spec->help);
        else if (f == "suite")
            opt = app.add_option(spec->flag, rc.suite, spec->help);
        else if (f == "seed")
            opt = app.add_option(spec->flag, rc.seed, spec->help)
                      ->envname("BETAPOT_SEED");
        else if (f == "convention")
            opt = app.add_option(spec->flag, rc.convention, spec->help);
        else if (f == "angular_order")
            opt = app.add_option(spec->flag, rc.angular_order, spec->help);
        else if (f == "radial_order")
            opt = app.add_option(spec->flag, rc.radial_order, spec->help);
        else if (f == "ladder_depth")
            opt = app.add_option(spec->flag, rc.ladder_depth, spec->help);
        else if (f == "rel_tol")
            opt = app.add_option(spec->flag, rc.rel_tol, spec->help);
        else if (f == "abs_tol")
            opt = app.add_option(spec->flag, rc.abs_tol, spec->help);
        else if (f == "mc_budget")
            opt = app.add_option(spec->flag, rc.mc_budget, spec->help);
        else if (f == "metric_triples")
            opt = app.add_option(spec->flag, rc.metric_triples, spec->help);
        else if (f == "lemma4_points")
            opt = app.add_option(spec->flag, rc.lemma4_points, spec->help);
        else if (f == "sobolev_points")
            opt = app.add_option(spec->flag, rc.sobolev_points, spec->help);
        else if (f == "csv_dir")
            opt = app.add_option(spec->flag, rc.csv_dir, spec->help);
        else if (f == "timings")
            opt = app.add_flag(spec->flag, rc.timings, spec->help);
        else if (f == "format")
            opt = app.add_option(spec->flag, rc.format, spec->help);
        else if (f == "out_file")
            opt = app.add_option(spec->flag, rc.out_file, spec->help);
        else
            throw ContractError("attach_flags: unbound field '" + f + "'");
        if (spec->kind != 'b' && spec->kind != 'v') opt->capture_default_str();
    }
}

std::map<std::string, double> parse_params(const std::string& spec) {
    std::map<std::string, double> out;
    if (spec.empty()) return out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ContractError("parse_params: expected k=v, got '" + item + "'");
        try {
            std::size_t used = 0;
            double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1)
                throw ContractError("parse_params: bad number in '" + item + "'");
            out[item.substr(0, eq)] = v;
        } catch (const std::logic_error&) {
            throw ContractError("parse_params: bad number in '" + item + "'");
        }
    }
    return out;
}

QuadratureConfig quad_from(const RunConfig& rc) {
    QuadratureConfig q;
    q.rel_tol = rc.rel_tol;
    q.abs_tol = rc.abs_tol;
    q.ladder_depth = rc.ladder_depth;
    q.angular_order = rc.angular_order;
    q.radial_order = rc.radial_order;
    q.mc_budget = static_cast<std::size_t>(rc.mc_budget);
    q.seed = rc.seed;
    q.validate();
    return q;
}

namespace {

std::pair<ExponentConvention, bool> convention_from(const RunConfig& rc) {
    if (rc.convention == "auto") return {ExponentConvention::generalized, false};
    if (rc.convention == "generalized")
        return {ExponentConvention::generalized, true};
    if (rc.convention == "classical")
        return {ExponentConvention::classical, true};
    throw ContractError("--convention must be auto, generalized or classical; got '" +
                        rc.convention + "'");
}

/// Direct computations (not suites) default to the generalized exponent.
ExponentConvention direct_convention(const RunConfig& rc) {
    auto [conv, forced] = convention_from(rc);
    return forced ? conv : ExponentConvention::generalized;
}

}  // namespace

SuiteConfig suite_config_from(const RunConfig& rc) {
    SuiteConfig s;
    s.seed = rc.seed;
    s.quad = quad_from(rc);
    auto [conv, forced] = convention_from(rc);
    s.convention = conv;
    s.convention_forced = forced;
    s.J = rc.rungs;
    s.metric_triples = rc.metric_triples;
    s.lemma4_points = rc.lemma4_points;
    s.sobolev_points = rc.sobolev_points;
    s.example1_epsilon = rc.epsilon;
    s.example1_rmax = rc.rmax;
    s.csv_dir = rc.csv_dir;
    s.timings = rc.timings;
    return s;
}

ScalarField field_from(const RunConfig& rc, const BetaParams& bp) {
    if (!rc.grid_file.empty()) return make_grid_field(read_grid(rc.grid_file));
    return make_field(rc.field, parse_params(rc.field_params), bp);
}

bool has_weight(const RunConfig& rc) {
    return !rc.curve_file.empty() || rc.weight != "one" || !rc.weight_params.empty();
}

WeightFn weight_from(const RunConfig& rc) {
    if (!rc.curve_file.empty()) {
        ModulusCurve c = read_curve_csv(rc.curve_file);
        return make_curve_weight(c.radii, c.values, rc.gamma, "curve");
    }
    return make_weight(rc.weight, parse_params(rc.weight_params));
}

std::string scalar12(double x) {
    std::string s = format12(x);
    if (s.find_first_of(".eE") == std::string::npos && std::isfinite(x)) s += ".0";
    return s;
}

namespace {

void emit(const RunConfig& rc, const std::string& payload, std::ostream& out) {
    if (rc.out_file.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(rc.out_file);
    if (!f) throw ContractError("cannot open output file " + rc.out_file);
    f << payload;
    if (!f) throw ContractError("write failed for " + rc.out_file);
}

Point point_or_origin(const std::vector<double>& p, std::size_t n,
                      const char* flag) {
    if (p.empty()) return Point(n, 0.0);
    if (p.size() != n)
        throw ContractError(std::string(flag) + " must have the same dimension as --beta");
    return p;
}

int cmd_dist(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    if (rc.x.size() != rc.beta.size() || rc.y.size() != rc.beta.size())
        throw ContractError("dist: --x and --y must have the same dimension as --beta");
    out << scalar12(beta_distance(rc.x, rc.y, bp)) << "\n";
    return 0;
}

int cmd_ball_volume(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    if (!(rc.radius > 0)) throw ContractError("ball-volume: --radius must be positive");
    out << scalar12(geometry_for(bp, rc.angular_order).ball_volume(rc.radius)) << "\n";
    return 0;
}

int cmd_morrey_norm(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    BetaParams bp = make_beta_params(rc.beta);
    ScalarField f = field_from(rc, bp);
    CenterGrid grid = make_center_grid(f, bp, 3, std::max(1.0, rc.rmax));
    MorreyResult r = morrey_quotient(f, rc.lambda, bp, grid, rc.rmax, rc.rungs,
                                     quad_from(rc));
    ordered_json j;
    j["command"] = "morrey-norm";
    j["lambda"] = rc.lambda;
    j["norm-lower-bound"] = r.norm;
    j["growing"] = r.growing;
    j["fitted-exponent"] = r.fitted_exponent;
    if (!rc.out_file.empty()) {
        write_curve_csv(r.quotient, rc.out_file);
        j["curve-file"] = rc.out_file;
    }
    out << round_json(j).dump(2) << "\n";
    if (r.growing) {
        ordered_json e;
        e["error"] = "divergence";
        e["message"] = "Morrey quotient grows as r -> 0; the norm is infinite";
        err << e.dump(2) << "\n";
        return 3;
    }
    return 0;
}

int cmd_stummel(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    ScalarField f = field_from(rc, bp);
    CenterGrid grid = make_center_grid(f, bp, 3, std::max(1.0, rc.rmax));
    std::optional<WeightFn> w;
    if (has_weight(rc)) w = weight_from(rc);
    ModulusCurve eta = stummel_modulus(f, rc.p, bp, grid, rc.rmax, rc.rungs,
                                       quad_from(rc), w ? &*w : nullptr,
                                       direct_convention(rc));
    std::ostringstream csv;
    write_curve_csv(eta, csv);
    emit(rc, csv.str(), out);
    return 0;
}

int cmd_frac_integral(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    ScalarField f = field_from(rc, bp);
    Point x = point_or_origin(rc.point, rc.beta.size(), "frac-integral: --point");
    ExponentConvention conv = direct_convention(rc);
    IntegralResult r;
    if (has_weight(rc)) {
        WeightFn h = weight_from(rc);
        r = gen_frac_integral(f, rc.p, h, x, bp, quad_from(rc), conv);
    } else {
        r = frac_integral(f, rc.p, x, bp, quad_from(rc), conv);
    }
    ordered_json j;
    j["command"] = "frac-integral";
    j["p"] = rc.p;
    j["point"] = x;
    j["value"] = r.value;
    j["error-estimate"] = r.error_estimate;
    out << round_json(j).dump(2) << "\n";
    return 0;
}

int cmd_growth_fn(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    if (!(rc.sigma > 0 && rc.sigma < 1))
        throw ContractError("growth-fn: --sigma must lie in (0,1)");
    WeightFn phi = weight_from(rc);
    GrowthFunction gf =
        build_growth_function(phi, rc.sigma, rc.p, bp, direct_convention(rc));
    ModulusCurve g;
    g.kind = "G";
    const int npts = 50;
    double lo = std::log(gf.s_floor() * (1 + 1e-9));
    double hi = std::log(gf.s_ceil() * (1 - 1e-9));
    for (int i = 0; i < npts; ++i) {
        double s = std::exp(lo + (hi - lo) * i / (npts - 1));
        g.radii.push_back(s);
        g.values.push_back(gf.G(s));
        g.argmax.push_back(-1);
    }
    std::ostringstream csv;
    write_curve_csv(g, csv);
    if (rc.out_file.empty()) {
        out << csv.str();
        return 0;
    }
    emit(rc, csv.str(), out);
    ordered_json j;
    j["command"] = "growth-fn";
    j["curve-file"] = rc.out_file;
    j["t-floor"] = gf.t_floor();
    j["t-ceil"] = gf.t_ceil();
    j["s-floor"] = gf.s_floor();
    j["s-ceil"] = gf.s_ceil();
    j["roundtrip-max-rel-err"] = gf.roundtrip_max_rel_err();
    out << round_json(j).dump(2) << "\n";
    return 0;
}

int cmd_report(const RunConfig& rc, const VerificationReport& rep,
               std::ostream& out) {
    if (rc.format != "json" && rc.format != "text")
        throw ContractError("--format must be json or text; got '" + rc.format + "'");
    std::string payload = rc.format == "text"
                              ? rep.to_text()
                              : rep.to_json(rc.timings).dump(2) + "\n";
    emit(rc, payload, out);
    return rep.all_passed() ? 0 : 1;
}

int cmd_verify(const RunConfig& rc, std::ostream& out) {
    return cmd_report(rc, run_suite(rc.suite, suite_config_from(rc)), out);
}

int cmd_example1(const RunConfig& rc, std::ostream& out) {
    BetaParams bp = make_beta_params(rc.beta);
    return cmd_report(rc, run_example1(bp, suite_config_from(rc)), out);
}

int fail_json(std::ostream& err, const char* kind, const std::string& what,
              int code) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = what;
    err << j.dump(2) << "\n";
    return code;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& rc,
                std::ostream& out, std::ostream& err) {
    try {
        if (command == "dist") return cmd_dist(rc, out);
        if (command == "ball-volume") return cmd_ball_volume(rc, out);
        if (command == "morrey-norm") return cmd_morrey_norm(rc, out, err);
        if (command == "stummel") return cmd_stummel(rc, out);
        if (command == "frac-integral") return cmd_frac_integral(rc, out);
        if (command == "growth-fn") return cmd_growth_fn(rc, out);
        if (command == "verify") return cmd_verify(rc, out);
        if (command == "example1") return cmd_example1(rc, out);
        throw ContractError("unknown command '" + command + "'");
    } catch (const ContractError& e) {
        return fail_json(err, "usage", e.what(), 2);
    } catch (const DomainError& e) {
        return fail_json(err, "usage", e.what(), 2);
    } catch (const DivergenceError& e) {
        return fail_json(err, "divergence", e.what(), 3);
    } catch (const NumericsError& e) {
        return fail_json(err, "numerics", e.what(), 3);
    } catch (const std::exception& e) {
        return fail_json(err, "internal", e.what(), 3);
    }
}

}  // namespace betapot
