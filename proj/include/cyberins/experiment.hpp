/**
 * @file experiment.hpp
 * @brief The run pipeline behind the command-line tool: solve the selected
 * scenarios, play the network game under the resulting contracts, run the
 * requested sweeps and write every report into one output directory.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyberins/analysis.hpp"
#include "cyberins/config.hpp"

namespace cyberins {

/// Contracts, induced investments, profit, slacks, VI, mode and diagnostics.
nlohmann::ordered_json to_json(const ContractSolution& solution, double r);

struct RunResult {
    std::vector<std::string> files;     ///< names relative to the output directory, sorted
    std::vector<ClaimReport> reports;
    bool any_no_market = false;
};

/**
 * Run everything the config asks for and write into cfg.output_dir:
 *   solution_<S>.json        one per selected scenario
 *   profile_<S>.csv          network equilibrium under the scenario's contracts
 *   degree_sweep_<label>.csv when degree_sweep.degrees is nonempty
 *   sweep_<parameter>.csv    one per parameter sweep
 *   verdicts.json            all claim reports
 *   manifest.json            config echo, engine version, seed, file list
 * With emit_plots, each degree-sweep CSV also gets a .dat and .svg companion.
 * Identical configs give byte-identical files.
 */
RunResult run_experiment(const ExperimentConfig& cfg, bool emit_plots = false);

/// Engine version string compiled into the library.
std::string engine_version();

}  // namespace cyberins
