#pragma once

#include <map>
#include <string>
#include <vector>

#include "betapot/metric.hpp"
#include "betapot/quadrature.hpp"
#include "betapot/report.hpp"
#include "betapot/spaces.hpp"

namespace betapot {

/// Knobs shared by every suite; hashed into each report entry.
struct SuiteConfig {
    std::uint64_t seed = 0;
    QuadratureConfig quad;
    ExponentConvention convention = ExponentConvention::generalized;
    bool convention_forced = false;  ///< true: use `convention` everywhere,
                                     ///< false: example suite switches to classical
    int J = 10;                      ///< ladder depth for modulus curves
    int metric_triples = 100000;     ///< total random triples across (n, beta) combos
    int lemma4_points = 100;
    int sobolev_points = 40;
    double example1_epsilon = 0.25;  ///< Morrey offset for the example's claim (iii)
    double example1_rmax = 0.049787068367863944;  ///< e^-3
    std::string csv_dir;             ///< curves written here when non-empty
    bool timings = false;            ///< serialize per-entry runtimes (breaks byte determinism)
};

/// The ten suite ids, in canonical execution order ("all" is accepted by
/// run_suite but is not itself listed).
std::vector<std::string> suite_ids();

/// Which check_* operations each suite owns; the union covers every check_*
/// operation exactly once (enforced by a meta-test).
const std::map<std::string, std::vector<std::string>>& suite_checks();

std::string suite_config_hash(const SuiteConfig& cfg);

/// Runs one suite (or "all") sequentially; entries are ordered by claim id.
/// Unknown suite ids raise ContractError.
VerificationReport run_suite(const std::string& suite_id, const SuiteConfig& cfg);

/// The worked-example suite on its own geometry (n in {2,3}; default callers
/// pass isotropic n=2). Entries: (i) decay of the modulus curve under a
/// closed-form dominator, (ii) dyadic integral bound, (iii) unbounded Morrey
/// quotient at the singular center, plus the epsilon=0 boundary case
/// (inconclusive) and the exponent-convention coincidence check.
VerificationReport run_example1(const BetaParams& bp, const SuiteConfig& cfg);

}  // namespace betapot
