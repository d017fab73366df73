/**
 * @file cyberins.cpp
 * @brief Command-line harness: load a config, apply flag overrides, run the
 * pipeline and write reports. Also turns a sweep CSV into plot data.
 */

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyberins/config.hpp"
#include "cyberins/experiment.hpp"
#include "cyberins/io.hpp"
#include "cyberins/plot.hpp"

namespace {

/// "1,2,5" or "1-10" or a mix such as "0,2-4".
std::vector<int> parse_degree_list(const std::string& text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw cyberins::ConfigError("--sweep-degrees", "empty list item");
        try {
            std::size_t used = 0;
            const auto dash = item.find('-', 1);
            if (dash == std::string::npos) {
                out.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } else {
                const int lo = std::stoi(item.substr(0, dash), &used);
                if (used != dash) throw std::invalid_argument(item);
                const std::string hi_text = item.substr(dash + 1);
                const int hi = std::stoi(hi_text, &used);
                if (used != hi_text.size() || hi < lo) throw std::invalid_argument(item);
                for (int d = lo; d <= hi; ++d) out.push_back(d);
            }
        } catch (const std::logic_error&) {
            throw cyberins::ConfigError("--sweep-degrees", "cannot parse '" + item + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyber-insurance contract and network-game experiments"};
    app.set_version_flag("--version", cyberins::engine_version());

    std::string config_path;
    std::optional<std::string> out_dir, scenario, mode, sweep_degrees;
    std::optional<std::uint64_t> seed;
    bool emit_plots = false;
    std::string plot_csv;

    app.add_option("--config", config_path, "Experiment config (JSON)");
    app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
    app.add_option("--scenario", scenario, "A, B, C or all")
        ->check(CLI::IsMember({"A", "B", "C", "all"}));
    app.add_option("--mode", mode, "monopoly or fair")
        ->check(CLI::IsMember({"monopoly", "fair", "fair_premium"}));
    app.add_option("--sweep-degrees", sweep_degrees, "Degrees for the degree sweep, e.g. 1-10");
    app.add_option("--seed", seed, "Network seed (overrides network.seed)");
    app.add_flag("--emit-plots", emit_plots, "Write .dat and .svg companions for degree sweeps");
    app.add_option("--plot-csv", plot_csv,
                   "Only convert this sweep CSV into plot data (written next to it or into --out)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!plot_csv.empty()) {
            std::filesystem::path csv(plot_csv);
            std::filesystem::path dir = out_dir ? std::filesystem::path(*out_dir) : csv.parent_path();
            if (!dir.empty()) std::filesystem::create_directories(dir);
            const auto files = cyberins::emit_plot_data(csv, dir / ("plot_" + csv.stem().string()));
            std::cout << files.dat.string() << '\n' << files.svg.string() << '\n';
            return 0;
        }
        if (config_path.empty()) {
            std::cerr << "error: --config is required\n";
            return 2;
        }

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(cyberins::read_file(config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw cyberins::ConfigError("<root>", std::string("malformed JSON: ") + e.what());
        } catch (const std::runtime_error& e) {
            throw cyberins::ConfigError("<file>", e.what());
        }
        if (!j.is_object()) throw cyberins::ConfigError("<root>", "expected an object");
        if (out_dir) j["output_dir"] = *out_dir;
        if (scenario) j["scenario"] = *scenario;
        if (mode) j["mode"] = *mode;
        if (seed) {
            if (!j.contains("network")) j["network"] = nlohmann::json::object();
            j["network"]["seed"] = *seed;
        }
        if (sweep_degrees) {
            if (!j.contains("degree_sweep")) j["degree_sweep"] = nlohmann::json::object();
            j["degree_sweep"]["degrees"] = parse_degree_list(*sweep_degrees);
        }
        const cyberins::ExperimentConfig cfg = cyberins::parse_config(j);

        const auto result = cyberins::run_experiment(cfg, emit_plots);
        for (const auto& rep : result.reports) {
            std::cout << rep.claim << ": " << cyberins::to_string(rep.verdict) << '\n';
        }
        if (result.any_no_market) std::cout << "note: at least one scenario has no market\n";
        std::cout << "wrote " << result.files.size() << " files to " << cfg.output_dir << '\n';
        return 0;
    } catch (const cyberins::ConfigError& e) {
        std::cerr << "invalid config field " << e.field() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
