#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkage/config.hpp"
#include "linkage/scenario.hpp"

namespace {

void report_error(const std::string& stage, const std::string& message) {
    nlohmann::json err;
    err["error"] = message;
    err["stage"] = stage;
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-plane simulator for multinational location choice under "
                 "input-output linkages"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = -1;
    double dt = 0.0;
    double horizon = 0.0;
    int resolution = 0;

    const std::vector<std::string> commands = {"loci",    "equilibria", "phase", "basin",
                                               "shock",   "statics",    "het",   "timing",
                                               "ext",     "sweep"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads (0 = auto)");
        sub->add_option("--dt", dt, "integrator step size");
        sub->add_option("--horizon", horizon, "integration horizon");
        sub->add_option("--resolution", resolution, "grid resolution");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    linkage::Scenario scenario;
    try {
        const linkage::ConfigNode cfg = linkage::parse_config_file(config_path);
        scenario = linkage::scenario_from_config(cfg, command, out_dir);
    } catch (const std::exception& e) {
        report_error("config", e.what());
        return 2;
    }

    if (threads < 0) {
        if (const char* env = std::getenv("LINKAGE_SIM_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) scenario.threads = threads;
    if (dt > 0.0) scenario.dyn.dt = dt;
    if (horizon > 0.0) scenario.dyn.horizon = horizon;
    if (resolution > 0) scenario.resolution = resolution;

    try {
        const auto written = linkage::run_scenario(scenario);
        for (const auto& path : written) std::cout << path << "\n";
    } catch (const std::exception& e) {
        report_error("run", e.what());
        return 1;
    }
    return 0;
}
