#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "betapot/report.hpp"
#include "betapot/verify.hpp"

using namespace betapot;

TEST_CASE("JSON rounding to 12 significant digits, recursively") {
    ordered_json j;
    j["a"] = 0.12345678901234567;
    j["b"] = {1.0, 2.999999999999999999};
    j["c"]["d"] = 3.14159265358979323846;
    ordered_json r = round_json(j);
    CHECK(r["a"].get<double>() == doctest::Approx(0.123456789012).epsilon(1e-13));
    CHECK(r["b"][1].get<double>() == 3.0);
    CHECK(r["c"]["d"].get<double>() == doctest::Approx(3.14159265359).epsilon(1e-13));
}

TEST_CASE("12-digit text formatting") {
    CHECK(format12(3.14159265358979323846) == "3.14159265359");
    CHECK(format12(5.0) == "5");
    CHECK(round12(0.12345678901234567) == doctest::Approx(0.123456789012).epsilon(1e-14));
}

TEST_CASE("check entries serialize with stable keys and optional timing") {
    CheckEntry e;
    e.claim = "demo/01";
    e.status = CheckStatus::pass;
    e.lhs = 1.0;
    e.rhs = 2.0;
    e.seed = 7;
    e.config_hash = "abc";
    e.runtime_ms = 12.5;
    ordered_json j = e.to_json(false);
    CHECK(j["claim"] == "demo/01");
    CHECK(j["status"] == "pass");
    CHECK_FALSE(j.contains("runtime-ms"));
    ordered_json jt = e.to_json(true);
    CHECK(jt.contains("runtime-ms"));
}

TEST_CASE("report pass/fail semantics: only failures fail") {
    VerificationReport rep;
    rep.suite = "demo";
    CheckEntry a;
    a.claim = "demo/01";
    a.status = CheckStatus::pass;
    CheckEntry b;
    b.claim = "demo/02";
    b.status = CheckStatus::skipped;
    CheckEntry c;
    c.claim = "demo/03";
    c.status = CheckStatus::inconclusive;
    rep.entries = {a, b, c};
    CHECK(rep.all_passed());
    CheckEntry d;
    d.claim = "demo/04";
    d.status = CheckStatus::fail;
    rep.entries.push_back(d);
    CHECK_FALSE(rep.all_passed());
    CHECK(rep.to_text().find("FAILURES PRESENT") != std::string::npos);
}

TEST_CASE("every deep check is referenced by exactly one suite") {
    const std::set<std::string> expected = {
        "check_lemma1",        "check_lemma1_converse",
        "check_lemma3",        "check_theorem1",
        "check_lemma4",        "check_sobolev_pointwise",
        "check_corollary1_and_prop1"};
    std::map<std::string, int> seen;
    for (const std::string& id : suite_ids()) {
        REQUIRE(suite_checks().count(id) == 1);
        for (const std::string& op : suite_checks().at(id)) ++seen[op];
    }
    for (const std::string& op : expected) {
        CHECK(seen.count(op) == 1);
        if (seen.count(op)) CHECK(seen.at(op) == 1);
    }
    for (const auto& [op, count] : seen) CHECK(expected.count(op) == 1);
}

TEST_CASE("unknown suites are usage errors") {
    SuiteConfig cfg;
    CHECK_THROWS_AS(run_suite("nope", cfg), ContractError);
}

TEST_CASE("suite config hashes distinguish configurations") {
    SuiteConfig a, b;
    b.seed = 1;
    SuiteConfig c;
    c.J = 11;
    CHECK(suite_config_hash(a) == suite_config_hash(SuiteConfig{}));
    CHECK(suite_config_hash(a) != suite_config_hash(b));
    CHECK(suite_config_hash(a) != suite_config_hash(c));
}

TEST_CASE("metric-axioms suite passes and is byte-deterministic") {
    SuiteConfig cfg;
    cfg.metric_triples = 3000;
    VerificationReport r1 = run_suite("metric-axioms", cfg);
    CHECK(r1.all_passed());
    CHECK(r1.entries.size() == 4);
    CHECK(std::is_sorted(r1.entries.begin(), r1.entries.end(),
                         [](const CheckEntry& x, const CheckEntry& y) {
                             return x.claim < y.claim;
                         }));
    for (const CheckEntry& e : r1.entries) {
        CHECK(e.seed == cfg.seed);
        CHECK(e.config_hash == suite_config_hash(cfg));
    }
    VerificationReport r2 = run_suite("metric-axioms", cfg);
    CHECK(r1.to_json(false).dump(2) == r2.to_json(false).dump(2));
}

TEST_CASE("isotropic-reduction suite passes at a light configuration") {
    SuiteConfig cfg;
    cfg.quad.angular_order = 24;
    cfg.quad.radial_order = 32;
    VerificationReport r = run_suite("isotropic-reduction", cfg);
    CHECK(r.all_passed());
    CHECK(r.entries.size() == 3);
}

TEST_CASE("timing serialization is the only nondeterministic report field") {
    SuiteConfig cfg;
    cfg.metric_triples = 1500;
    VerificationReport r = run_suite("metric-axioms", cfg);
    std::string with = r.to_json(true).dump(2);
    CHECK(with.find("runtime-ms") != std::string::npos);
    CHECK(r.to_json(false).dump(2).find("runtime-ms") == std::string::npos);
}
