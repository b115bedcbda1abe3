#include "betapot/report.hpp"

#include <cctype>
#include <sstream>

namespace betapot {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

ordered_json round_json(const ordered_json& j) {
    if (j.is_number_float()) return round12(j.get<double>());
    if (j.is_object()) {
        ordered_json out = ordered_json::object();
        for (auto it = j.begin(); it != j.end(); ++it)
            out[it.key()] = round_json(it.value());
        return out;
    }
    if (j.is_array()) {
        ordered_json out = ordered_json::array();
        for (const auto& v : j) out.push_back(round_json(v));
        return out;
    }
    return j;
}

ordered_json make_constant(double value, const std::string& origin) {
    ordered_json c;
    c["value"] = round12(value);
    c["origin"] = origin;
    return c;
}

ordered_json CheckEntry::to_json(bool with_timings) const {
    ordered_json e;
    e["claim"] = claim;
    e["status"] = to_string(status);
    e["lhs"] = round12(lhs);
    e["rhs"] = round12(rhs);
    e["max-ratio"] = round12(max_ratio);
    if (!witness.is_null()) e["witness"] = round_json(witness);
    if (!constants.is_null()) e["constants"] = round_json(constants);
    if (!traces.is_null()) e["traces"] = round_json(traces);
    if (!note.empty()) e["note"] = note;
    e["seed"] = seed;
    e["config-hash"] = config_hash;
    if (with_timings) e["runtime-ms"] = runtime_ms;
    return e;
}

bool VerificationReport::all_passed() const {
    for (const CheckEntry& e : entries)
        if (e.status == CheckStatus::fail) return false;
    return true;
}

ordered_json VerificationReport::to_json(bool with_timings) const {
    ordered_json r;
    r["suite"] = suite;
    r["seed"] = seed;
    r["config-hash"] = config_hash;
    r["all-passed"] = all_passed();
    ordered_json arr = ordered_json::array();
    for (const CheckEntry& e : entries) arr.push_back(e.to_json(with_timings));
    r["entries"] = arr;
    return r;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << "suite " << suite << " (seed " << seed << ", config " << config_hash
       << ")\n";
    for (const CheckEntry& e : entries) {
        std::string tag = to_string(e.status);
        for (char& c : tag) c = static_cast<char>(std::toupper(c));
        os << "  [" << tag << "] " << e.claim << "  lhs=" << format12(e.lhs)
           << " rhs=" << format12(e.rhs) << " ratio=" << format12(e.max_ratio);
        if (!e.note.empty()) os << "  -- " << e.note;
        os << "\n";
    }
    os << (all_passed() ? "ALL PASSED" : "FAILURES PRESENT") << "\n";
    return os.str();
}

}  // namespace betapot
