#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "betapot/cli_config.hpp"
#include "betapot/report.hpp"

using namespace betapot;

namespace {

RunConfig light(const std::string& cmd) {
    RunConfig rc = make_run_config(cmd);
    rc.angular_order = 24;
    rc.radial_order = 32;
    return rc;
}

}  // namespace

TEST_CASE("flag table and RunConfig fields are in bijection") {
    std::set<std::string> fields, flags;
    for (const FlagSpec& s : cli_flag_table()) {
        CHECK(fields.insert(s.field).second);  // no duplicate field
        CHECK(flags.insert(s.flag).second);    // no duplicate flag
        CHECK(std::string(s.help).size() > 0);
    }
    std::vector<std::string> declared = run_config_field_names();
    CHECK(declared.size() == cli_flag_table().size());
    for (const std::string& f : declared) CHECK(fields.count(f) == 1);
}

TEST_CASE("every command's flags attach, and every field is reachable") {
    std::set<std::string> used;
    for (const std::string& cmd : command_names()) {
        REQUIRE(command_fields().count(cmd) == 1);
        const std::vector<std::string>& fs = command_fields().at(cmd);
        CHECK(fs.size() > 0);
        RunConfig rc = make_run_config(cmd);
        CLI::App app{cmd};
        attach_flags(app, rc, fs);
        // every field surfaced as an option (+ the automatic --help)
        CHECK(app.get_options().size() == fs.size() + 1);
        for (const std::string& f : fs) used.insert(f);
    }
    for (const std::string& f : run_config_field_names()) CHECK(used.count(f) == 1);

    RunConfig rc;
    CLI::App app{"x"};
    CHECK_THROWS_AS(attach_flags(app, rc, {"no_such_field"}), ContractError);
}

TEST_CASE("flags parse into the bound fields") {
    RunConfig rc = make_run_config("stummel");
    CLI::App app{"stummel"};
    attach_flags(app, rc, command_fields().at("stummel"));
    app.parse("--beta 0.5,0.5 --p 1.5 --field const --rmax 1 -J 10");
    CHECK(rc.beta == std::vector<double>{0.5, 0.5});
    CHECK(rc.p == 1.5);
    CHECK(rc.field == "const");
    CHECK(rc.rmax == 1.0);
    CHECK(rc.rungs == 10);
}

TEST_CASE("parameter list parsing") {
    auto m = parse_params("alpha=1,m=4.5");
    CHECK(m.at("alpha") == 1.0);
    CHECK(m.at("m") == 4.5);
    CHECK(parse_params("").empty());
    CHECK_THROWS_AS(parse_params("oops"), ContractError);
    CHECK_THROWS_AS(parse_params("a=1,b=zz"), ContractError);
}

TEST_CASE("scalar output always shows a decimal form") {
    CHECK(scalar12(5.0) == "5.0");
    CHECK(scalar12(2.5) == "2.5");
    CHECK(scalar12(std::acos(-1.0)) == "3.14159265359");
}

TEST_CASE("dist prints the Euclidean value for isotropic beta") {
    RunConfig rc = make_run_config("dist");
    rc.beta = {0.5, 0.5};
    rc.x = {0, 0};
    rc.y = {3, 4};
    std::ostringstream out, err;
    CHECK(run_command("dist", rc, out, err) == 0);
    CHECK(out.str() == "5.0\n");

    rc.y = {3, 4, 5};
    std::ostringstream out2, err2;
    CHECK(run_command("dist", rc, out2, err2) == 2);
    ordered_json j = ordered_json::parse(err2.str());
    CHECK(j["error"] == "usage");
}

TEST_CASE("ball-volume prints the closed-form area") {
    RunConfig rc = light("ball-volume");
    std::ostringstream out, err;
    CHECK(run_command("ball-volume", rc, out, err) == 0);
    CHECK(out.str() == "3.14159265359\n");
}

TEST_CASE("stummel emits a re-ingestable CSV matching the closed form") {
    RunConfig rc = light("stummel");
    rc.p = 1.5;
    rc.field = "boxconst";
    rc.rmax = 1.0;
    rc.rungs = 5;
    std::ostringstream out, err;
    REQUIRE(run_command("stummel", rc, out, err) == 0);
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_cli_eta.csv").string();
    {
        std::ofstream f(path);
        f << out.str();
    }
    ModulusCurve eta = read_curve_csv(path);
    std::remove(path.c_str());
    REQUIRE(eta.rungs() == 6);
    const double pi = std::acos(-1.0);
    for (std::size_t j = 0; j < eta.rungs(); ++j)
        CHECK(eta.values[j] ==
              doctest::Approx((4.0 * pi / 3.0) * std::pow(eta.radii[j], 1.5))
                  .epsilon(5e-3));
}

TEST_CASE("a curve emitted by the tool feeds back in as a weight") {
    // build the weight w(t) = t as a sampled curve file
    ModulusCurve c;
    c.kind = "w";
    for (int j = 0; j <= 8; ++j) {
        c.radii.push_back(std::ldexp(1.0, -j));
        c.values.push_back(c.radii.back());
        c.argmax.push_back(-1);
    }
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_cli_w.csv").string();
    write_curve_csv(c, path);

    RunConfig rc = light("stummel");
    rc.p = 1.5;
    rc.field = "boxconst";
    rc.rmax = 0.5;
    rc.rungs = 4;
    rc.curve_file = path;
    rc.gamma = 1.0;
    std::ostringstream out, err;
    REQUIRE(run_command("stummel", rc, out, err) == 0);
    std::remove(path.c_str());
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "radius,value,center_argmax_index");
    const double pi = std::acos(-1.0);
    double r, v;
    char comma;
    int am;
    while (in >> r >> comma >> v >> comma >> am)
        CHECK(v == doctest::Approx(4.0 * pi * std::sqrt(r)).epsilon(1e-2));
}

TEST_CASE("frac-integral reports a JSON value and detects divergence") {
    RunConfig rc = light("frac-integral");
    rc.p = 1.5;
    rc.field = "ballconst";
    rc.field_params = "radius=1";
    std::ostringstream out, err;
    REQUIRE(run_command("frac-integral", rc, out, err) == 0);
    ordered_json j = ordered_json::parse(out.str());
    CHECK(j["value"].get<double>() ==
          doctest::Approx(4.0 * std::acos(-1.0) / 3.0).epsilon(1e-4));

    RunConfig rd = light("frac-integral");
    rd.p = 1.5;
    rd.field = "example1";
    std::ostringstream out2, err2;
    CHECK(run_command("frac-integral", rd, out2, err2) == 3);
    ordered_json e = ordered_json::parse(err2.str());
    CHECK(e["error"] == "divergence");
}

TEST_CASE("growth-fn writes a curve matching the closed form plus a summary") {
    RunConfig rc = make_run_config("growth-fn");
    rc.p = 1.5;
    rc.sigma = 0.5;
    CHECK(rc.weight == "power");  // per-command default phi(t) = t
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_cli_G.csv").string();
    rc.out_file = path;
    std::ostringstream out, err;
    REQUIRE(run_command("growth-fn", rc, out, err) == 0);
    ordered_json j = ordered_json::parse(out.str());
    CHECK(j["curve-file"] == path);
    CHECK(j["roundtrip-max-rel-err"].get<double>() <= 1e-8);
    ModulusCurve g = read_curve_csv(path);
    std::remove(path.c_str());
    REQUIRE(g.rungs() == 50);
    for (std::size_t i = 10; i < 40; ++i)  // interior: G(s) = (s/2)^{3/2}
        CHECK(g.values[i] ==
              doctest::Approx(std::pow(g.radii[i] / 2.0, 1.5)).epsilon(1e-5));
}

TEST_CASE("grid files feed back in as fields") {
    GridData grid;
    grid.n = 2;
    grid.dims = {9, 9};
    grid.origin = {-1.0, -1.0};
    grid.spacing = {0.25, 0.25};
    grid.values.assign(81, 1.0);
    std::string path =
        (std::filesystem::temp_directory_path() / "betapot_cli_grid.json").string();
    write_grid(path, grid);

    RunConfig rc = light("frac-integral");
    rc.p = 1.5;
    rc.grid_file = path;
    std::ostringstream out, err;
    REQUIRE(run_command("frac-integral", rc, out, err) == 0);
    std::remove(path.c_str());
    ordered_json j = ordered_json::parse(out.str());
    // f = 1 on the box containing B(0,1): integral >= the ball closed form
    CHECK(j["value"].get<double>() >=
          doctest::Approx(4.0 * std::acos(-1.0) / 3.0).epsilon(1e-2));
}

TEST_CASE("verify: unknown suite is a usage error, valid suite verifies") {
    RunConfig rc = make_run_config("verify");
    rc.suite = "bogus";
    std::ostringstream out, err;
    CHECK(run_command("verify", rc, out, err) == 2);
    ordered_json e = ordered_json::parse(err.str());
    CHECK(e["error"] == "usage");

    RunConfig rv = make_run_config("verify");
    rv.suite = "metric-axioms";
    rv.metric_triples = 2000;
    std::ostringstream out2, err2;
    CHECK(run_command("verify", rv, out2, err2) == 0);
    ordered_json rep = ordered_json::parse(out2.str());
    CHECK(rep["suite"] == "metric-axioms");
    CHECK(rep["all-passed"] == true);
    CHECK(rep["entries"].size() == 4);

    rv.format = "text";
    std::ostringstream out3, err3;
    CHECK(run_command("verify", rv, out3, err3) == 0);
    CHECK(out3.str().find("ALL PASSED") != std::string::npos);
}

TEST_CASE("verification-command defaults point at the singular-field scale") {
    CHECK(make_run_config("verify").rmax == doctest::Approx(std::exp(-3.0)));
    CHECK(make_run_config("example1").rmax == doctest::Approx(std::exp(-3.0)));
    CHECK(make_run_config("stummel").rmax == 1.0);
}

TEST_CASE("suite config carries the CLI quadrature and sampling overrides") {
    RunConfig rc = make_run_config("verify");
    rc.seed = 9;
    rc.rungs = 7;
    rc.epsilon = 0.5;
    rc.timings = true;
    rc.convention = "classical";
    SuiteConfig s = suite_config_from(rc);
    CHECK(s.seed == 9);
    CHECK(s.J == 7);
    CHECK(s.example1_epsilon == 0.5);
    CHECK(s.timings);
    CHECK(s.convention_forced);
    CHECK(s.convention == ExponentConvention::classical);
    rc.convention = "nope";
    CHECK_THROWS_AS(suite_config_from(rc), ContractError);
}
