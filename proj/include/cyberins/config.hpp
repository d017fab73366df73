/**
 * @file config.hpp
 * @brief Experiment configuration: one JSON record holding every economic,
 * solver and output parameter of a run. Parsing is strict; unknown keys and
 * out-of-range values are rejected with the dotted path of the field.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyberins/contract.hpp"
#include "cyberins/game.hpp"
#include "cyberins/network.hpp"

namespace cyberins {

/// Thrown on any invalid config; field() is the dotted path, e.g. "wealth.r".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct NetworkConfig {
    std::string kind = "regular";  ///< erdos_renyi | regular | star | complete | edge_list
    std::size_t n = 24;
    std::uint64_t seed = 0;
    double p_edge = 0.1;           ///< erdos_renyi only
    std::size_t degree = 4;        ///< regular only
    std::string edges_file;        ///< edge_list only

    TopologyKind topology() const;
};

/// One-parameter sweep: rerun the selected scenarios for each value.
struct ParameterSweep {
    std::string parameter;         ///< dotted path of a numeric field, e.g. "utility.lambda"
    std::vector<double> values;
};

struct ExperimentConfig {
    NetworkConfig network{};
    ClassMix mix{};
    UtilitySpec utility{};
    WealthState wealth{};
    double s_nbr = 0.0;            ///< externality used for the stand-alone contract programs
    std::string scenario = "all";  ///< A | B | C | all
    Mode mode = Mode::monopoly;
    bool mandatory = false;
    SolverOptions solver{};        ///< mode and mandatory are mirrored from above
    AgentOptions agent{};
    EquilibriumOptions equilibrium{};
    std::vector<int> sweep_degrees;
    std::size_t sweep_n = 24;      ///< users in each degree-sweep graph
    std::vector<ParameterSweep> sweeps;
    std::string output_dir = "out";

    std::vector<Scenario> scenarios() const;
    SolverOptions solver_options() const;
    MarketModel market_model() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Copy of cfg with the numeric field at a dotted path replaced, re-validated.
ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& path, double value);

}  // namespace cyberins
