#pragma once
/// Command-line plumbing shared by the tool and its tests: the flag table
/// (single source of truth for the flag <-> RunConfig field bijection),
/// attachment of flags to CLI11 apps, per-command defaults, and the
/// subcommand implementations themselves.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betapot/fields.hpp"
#include "betapot/verify.hpp"

namespace betapot {

/// Every value the CLI can set. One instance per subcommand so defaults can
/// differ between commands (see make_run_config).
struct RunConfig {
    std::vector<double> beta{0.5, 0.5};
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> point;
    double p = 2.0;
    double lambda = 1.0;
    double sigma = 0.5;
    double gamma = 1.0;  ///< exponent applied to --curve-file values
    double epsilon = 0.25;
    double radius = 1.0;
    double rmax = 1.0;
    int rungs = 10;
    std::string field = "const";
    std::string field_params;
    std::string grid_file;
    std::string weight = "one";
    std::string weight_params;
    std::string curve_file;
    std::string suite = "all";
    std::uint64_t seed = 0;
    std::string convention = "auto";  ///< auto | generalized | classical
    int angular_order = 32;
    int radial_order = 64;
    int ladder_depth = 20;
    double rel_tol = 1e-4;
    double abs_tol = 1e-12;
    std::uint64_t mc_budget = 1000000;
    int metric_triples = 100000;
    int lemma4_points = 100;
    int sobolev_points = 40;
    std::string csv_dir;
    bool timings = false;
    std::string format = "json";  ///< json | text
    std::string out_file;
};

/// One CLI flag bound to one RunConfig field.
struct FlagSpec {
    const char* flag;   ///< CLI11 option name(s), e.g. "-J,--rungs"
    const char* field;  ///< RunConfig member name
    const char* help;
    char kind;  ///< d=double i=int u=uint64 v=vector<double> s=string b=bool
};

const std::vector<FlagSpec>& cli_flag_table();

/// Declared RunConfig member names, in declaration order; the bijection test
/// compares this list against the flag table.
std::vector<std::string> run_config_field_names();

std::vector<std::string> command_names();

/// Fields (hence flags) each subcommand exposes.
const std::map<std::string, std::vector<std::string>>& command_fields();

/// Per-command defaulted config (e.g. the verification commands default
/// --rmax to exp(-3), the top radius of the singular-field suite).
RunConfig make_run_config(const std::string& command);

/// Attach the named fields' flags to the app; unknown names throw
/// ContractError.
void attach_flags(CLI::App& app, RunConfig& rc, const std::vector<std::string>& fields);

/// "k1=v1,k2=v2" -> map; empty string -> empty map; malformed -> ContractError.
std::map<std::string, double> parse_params(const std::string& spec);

QuadratureConfig quad_from(const RunConfig& rc);
SuiteConfig suite_config_from(const RunConfig& rc);

/// Field from the registry id + params, or from --grid-file when set.
ScalarField field_from(const RunConfig& rc, const BetaParams& bp);

/// True when a kernel weight is configured (non-trivial --weight or
/// --curve-file).
bool has_weight(const RunConfig& rc);

/// Weight from the registry id + params, or from --curve-file (log-log
/// interpolant of the curve raised to --gamma).
WeightFn weight_from(const RunConfig& rc);

/// format12 plus a trailing ".0" for integral values, so scalar output is
/// unambiguously floating point.
std::string scalar12(double x);

/// Execute one subcommand; all output on the given streams. Returns the
/// process exit code: 0 success, 1 verification failure, 2 usage error,
/// 3 numerical divergence. Errors are also emitted as JSON on err.
int run_command(const std::string& command, const RunConfig& rc,
                std::ostream& out, std::ostream& err);

}  // namespace betapot
