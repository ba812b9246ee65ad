#pragma once

#include <string>
#include <utility>

#include "linkage/config.hpp"
#include "linkage/dynamics.hpp"
#include "linkage/params.hpp"

namespace linkage {

/// One CLI run: a command, the model, optional extension blocks (kept as the
/// raw config tree) and the numeric options.
struct Scenario {
    std::string command;
    std::string out_dir;
    ModelParams model{};
    ConfigNode raw;
    IntegrationOptions dyn;
    int resolution = 200;
    int threads = 0;
};

/// Builds a scenario from a parsed config. `command_override` and
/// `out_override` come from the command line and win over the config file.
/// Throws ConfigError on malformed or inconsistent input.
Scenario scenario_from_config(const ConfigNode& cfg, const std::string& command_override,
                              const std::string& out_override);

ModelParams model_from_config(const ConfigNode& model_block);

/// Executes the scenario and writes its artifacts under out_dir.
/// Returns the paths written. Throws on validation or I/O failure.
std::vector<std::string> run_scenario(const Scenario& s);

/// "S1-only", "multiple" or "S2-only" per the position of F between the
/// regime thresholds.
std::string regime_label(const ModelParams& p);

/// Locates the two regime boundaries in F by bisection on the regime label,
/// to relative tolerance `rel_tol`. Returns {F_a_hat, F_b_hat}.
std::pair<double, double> regime_boundaries(const ModelParams& p, double rel_tol = 1e-12);

}  // namespace linkage
