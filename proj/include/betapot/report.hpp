#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "betapot/common.hpp"

namespace betapot {

using ordered_json = nlohmann::ordered_json;

enum class CheckStatus { pass, fail, skipped, inconclusive };

std::string to_string(CheckStatus s);

/// Round every number inside a json tree to 12 significant digits so that
/// serialized reports are reproducible bit for bit.
ordered_json round_json(const ordered_json& j);

/// Constant annotated with where its value comes from
/// ("closed-form", "measured", "configured").
ordered_json make_constant(double value, const std::string& origin);

/// One verified claim: both sides of the bound at the worst case, the witness
/// attaining it, and every constant that entered the comparison.
struct CheckEntry {
    std::string claim;
    CheckStatus status = CheckStatus::skipped;
    double lhs = 0.0;
    double rhs = 0.0;
    double max_ratio = 0.0;
    ordered_json witness;
    ordered_json constants;
    ordered_json traces;
    std::string note;
    double runtime_ms = 0.0;  ///< serialized only on request (breaks reproducibility)
    std::uint64_t seed = 0;
    std::string config_hash;

    ordered_json to_json(bool with_timings) const;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<CheckEntry> entries;

    /// True when no entry failed (skipped/inconclusive entries do not fail).
    bool all_passed() const;
    ordered_json to_json(bool with_timings) const;
    std::string to_text() const;
};

}  // namespace betapot
