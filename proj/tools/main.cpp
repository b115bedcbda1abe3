#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "betapot/cli_config.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions = {
    {"dist", "distance between two points in the anisotropic metric"},
    {"ball-volume", "Lebesgue volume of a metric ball"},
    {"morrey-norm", "Morrey quotient ladder and norm lower bound of a field"},
    {"stummel", "Stummel-type modulus curve of a field (CSV)"},
    {"frac-integral", "fractional integral of a field at a point"},
    {"growth-fn", "growth function G built from a weight (CSV curve)"},
    {"verify", "run a verification suite and emit its report"},
    {"example1", "run the worked singular-field example end to end"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic potential-theory toolkit: distances, Morrey and "
                 "Stummel classes, fractional integrals, and their "
                 "verification suites."};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file; command-line flags win over file values");

    std::map<std::string, betapot::RunConfig> configs;
    for (const std::string& name : betapot::command_names()) {
        configs.emplace(name, betapot::make_run_config(name));
        CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
        betapot::attach_flags(*sub, configs.at(name),
                              betapot::command_fields().at(name));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        betapot::ordered_json j;
        j["error"] = "usage";
        j["message"] = e.what();
        std::cerr << j.dump(2) << "\n";
        return 2;
    }

    for (const CLI::App* sub : app.get_subcommands())
        return betapot::run_command(sub->get_name(), configs.at(sub->get_name()),
                                    std::cout, std::cerr);
    return 2;
}
