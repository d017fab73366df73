#include "cyberins/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "cyberins/io.hpp"

namespace cyberins {

namespace {

using nlohmann::json;

/// Walks one JSON object, remembering which keys were consumed.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(label(), "expected an object");
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) throw ConfigError(field(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
        }
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
            if (v->is_number_unsigned()) {
                const auto u = v->get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
                    throw ConfigError(field(key), "out of range");
                }
                out = static_cast<Int>(u);
            } else {
                const auto s = v->get<std::int64_t>();
                if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()) ||
                    (s > 0 && static_cast<std::uint64_t>(s) >
                                  static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))) {
                    throw ConfigError(field(key), "out of range");
                }
                out = static_cast<Int>(s);
            }
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) throw ConfigError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
        }
    }

private:
    std::string label() const { return path_.empty() ? "<root>" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_class(const json& j, const std::string& path, RiskClassSpec& spec) {
    ObjectReader r(j, path);
    r.number("p0", spec.p0);
    r.number("beta", spec.beta);
    r.number("binv", spec.binv);
    r.finish();
    if (auto f = spec.invalid_field(); !f.empty()) {
        throw ConfigError(path + "." + f, "out of range");
    }
}

std::string mix_field(const std::string& property) {
    if (property == "theta in [0, 1]") return "mix.theta";
    if (property == "p_HC > p_LC" || property == "p_HC < 1") return "mix.hc.p0";
    if (property == "p_LC > 0") return "mix.lc.p0";
    if (property == "equal base investment") return "mix.lc.binv";
    if (property == "derivative ordering") return "mix.hc.beta";
    return "mix";
}

void validate_mix(const ClassMix& mix) {
    if (!(mix.theta >= 0.0 && mix.theta <= 1.0)) throw ConfigError("mix.theta", "must lie in [0, 1]");
    const auto violations = validate(mix);
    if (!violations.empty()) {
        throw ConfigError(mix_field(violations.front().property),
                          "class ordering violated (" + violations.front().property + ")");
    }
}

std::vector<int> read_degrees(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& v = j[k];
        const std::string f = path + "[" + std::to_string(k) + "]";
        if (!v.is_number_integer()) throw ConfigError(f, "expected an integer");
        const auto d = v.get<std::int64_t>();
        if (d < 0 || d > 100000) throw ConfigError(f, "out of range");
        if (!out.empty() && d <= out.back()) throw ConfigError(f, "degrees must increase");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

const std::set<std::string>& sweepable() {
    static const std::set<std::string> names = {
        "mix.theta",     "mix.hc.p0",      "mix.hc.beta",    "mix.hc.binv",   "mix.lc.p0",
        "mix.lc.beta",   "mix.lc.binv",    "utility.a",      "utility.gamma", "utility.kappa",
        "utility.lambda", "wealth.w0",     "wealth.r",       "s_nbr",         "network.p_edge"};
    return names;
}

}  // namespace

TopologyKind NetworkConfig::topology() const {
    if (kind == "erdos_renyi") return topology::ErdosRenyi{p_edge};
    if (kind == "regular") return topology::Regular{degree};
    if (kind == "star") return topology::Star{};
    if (kind == "complete") return topology::Complete{};
    if (kind == "edge_list") {
        return topology::FromEdges{load_edge_list_file(edges_file, n).edges()};
    }
    throw ConfigError("network.kind", "unknown topology '" + kind + "'");
}

std::vector<Scenario> ExperimentConfig::scenarios() const {
    if (scenario == "all") return {Scenario::A, Scenario::B, Scenario::C};
    return {parse_scenario(scenario)};
}

SolverOptions ExperimentConfig::solver_options() const {
    SolverOptions o = solver;
    o.mode = mode;
    o.mandatory = mandatory;
    return o;
}

MarketModel ExperimentConfig::market_model() const {
    MarketModel m;
    m.utility = utility;
    m.mix = mix;
    m.wealth = wealth;
    m.s_nbr = s_nbr;
    m.agent = agent;
    return m;
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    ObjectReader root(j, "");

    if (const json* v = root.get("network")) {
        ObjectReader r(*v, "network");
        r.string("kind", cfg.network.kind);
        r.integer("n", cfg.network.n);
        r.integer("seed", cfg.network.seed);
        r.number("p_edge", cfg.network.p_edge);
        r.integer("degree", cfg.network.degree);
        r.string("edges_file", cfg.network.edges_file);
        r.finish();
        const auto& k = cfg.network.kind;
        if (k != "erdos_renyi" && k != "regular" && k != "star" && k != "complete" &&
            k != "edge_list") {
            throw ConfigError("network.kind", "unknown topology '" + k + "'");
        }
        if (cfg.network.n == 0) throw ConfigError("network.n", "must be positive");
        if (!(cfg.network.p_edge >= 0.0 && cfg.network.p_edge <= 1.0)) {
            throw ConfigError("network.p_edge", "must lie in [0, 1]");
        }
        if (k == "regular" && cfg.network.degree >= cfg.network.n) {
            throw ConfigError("network.degree", "must be below network.n");
        }
        if (k == "edge_list" && cfg.network.edges_file.empty()) {
            throw ConfigError("network.edges_file", "required for kind edge_list");
        }
    }

    if (const json* v = root.get("mix")) {
        ObjectReader r(*v, "mix");
        r.number("theta", cfg.mix.theta);
        if (const json* hc = r.get("hc")) read_class(*hc, "mix.hc", cfg.mix.hc);
        if (const json* lc = r.get("lc")) read_class(*lc, "mix.lc", cfg.mix.lc);
        r.finish();
    }
    validate_mix(cfg.mix);

    if (const json* v = root.get("utility")) {
        ObjectReader r(*v, "utility");
        r.number("a", cfg.utility.a);
        r.number("gamma", cfg.utility.gamma);
        r.number("kappa", cfg.utility.kappa);
        r.number("lambda", cfg.utility.lambda);
        r.finish();
        if (auto f = cfg.utility.invalid_field(); !f.empty()) {
            throw ConfigError("utility." + f, "out of range");
        }
    }

    if (const json* v = root.get("wealth")) {
        ObjectReader r(*v, "wealth");
        r.number("w0", cfg.wealth.w0);
        r.number("r", cfg.wealth.r);
        r.finish();
        if (auto f = cfg.wealth.invalid_field(); !f.empty()) {
            throw ConfigError("wealth." + f, f == "r" ? "must satisfy 0 < r < w0" : "must be positive");
        }
    }

    root.number("s_nbr", cfg.s_nbr);
    if (cfg.s_nbr < 0.0) throw ConfigError("s_nbr", "must be nonnegative");

    root.string("scenario", cfg.scenario);
    if (cfg.scenario != "A" && cfg.scenario != "B" && cfg.scenario != "C" &&
        cfg.scenario != "all") {
        throw ConfigError("scenario", "expected A, B, C or all");
    }

    if (const json* v = root.get("mode")) {
        if (!v->is_string()) throw ConfigError("mode", "expected a string");
        try {
            cfg.mode = parse_mode(v->get<std::string>());
        } catch (const std::invalid_argument&) {
            throw ConfigError("mode", "expected monopoly or fair_premium");
        }
    }
    root.boolean("mandatory", cfg.mandatory);

    if (const json* v = root.get("solver")) {
        ObjectReader r(*v, "solver");
        r.integer("contract_grid", cfg.solver.contract_grid);
        r.integer("fair_grid", cfg.solver.fair_grid);
        r.integer("fair_grid_2d", cfg.solver.fair_grid_2d);
        r.integer("refine_iterations", cfg.solver.refine_iterations);
        r.finish();
        if (cfg.solver.contract_grid < 2) throw ConfigError("solver.contract_grid", "must be >= 2");
        if (cfg.solver.fair_grid < 2) throw ConfigError("solver.fair_grid", "must be >= 2");
        if (cfg.solver.fair_grid_2d < 2) throw ConfigError("solver.fair_grid_2d", "must be >= 2");
        if (cfg.solver.refine_iterations < 0) {
            throw ConfigError("solver.refine_iterations", "must be nonnegative");
        }
    }

    if (const json* v = root.get("agent")) {
        ObjectReader r(*v, "agent");
        r.number("x_max", cfg.agent.x_max);
        r.integer("grid_points", cfg.agent.grid_points);
        r.number("x_tol", cfg.agent.x_tol);
        r.finish();
        const double binv = std::max(cfg.mix.hc.binv, cfg.mix.lc.binv);
        if (!(cfg.agent.x_max > binv)) throw ConfigError("agent.x_max", "must exceed binv");
        if (cfg.agent.grid_points < 3) throw ConfigError("agent.grid_points", "must be >= 3");
        if (!(cfg.agent.x_tol > 0.0)) throw ConfigError("agent.x_tol", "must be positive");
    }

    if (const json* v = root.get("equilibrium")) {
        ObjectReader r(*v, "equilibrium");
        std::string dyn = "round_robin";
        r.string("dynamics", dyn);
        if (dyn == "round_robin") {
            cfg.equilibrium.dynamics = Dynamics::round_robin;
        } else if (dyn == "synchronous") {
            cfg.equilibrium.dynamics = Dynamics::synchronous;
        } else {
            throw ConfigError("equilibrium.dynamics", "expected round_robin or synchronous");
        }
        r.number("tol", cfg.equilibrium.tol);
        r.integer("max_iter", cfg.equilibrium.max_iter);
        r.finish();
        if (!(cfg.equilibrium.tol > 0.0)) throw ConfigError("equilibrium.tol", "must be positive");
        if (cfg.equilibrium.max_iter < 1) throw ConfigError("equilibrium.max_iter", "must be >= 1");
    }
    cfg.equilibrium.agent = cfg.agent;

    if (const json* v = root.get("degree_sweep")) {
        ObjectReader r(*v, "degree_sweep");
        if (const json* d = r.get("degrees")) cfg.sweep_degrees = read_degrees(*d, "degree_sweep.degrees");
        r.integer("n", cfg.sweep_n);
        r.finish();
        for (std::size_t k = 0; k < cfg.sweep_degrees.size(); ++k) {
            if (static_cast<std::size_t>(cfg.sweep_degrees[k]) >= cfg.sweep_n) {
                throw ConfigError("degree_sweep.degrees[" + std::to_string(k) + "]",
                                  "must be below degree_sweep.n");
            }
        }
    }

    if (const json* v = root.get("sweeps")) {
        if (!v->is_array()) throw ConfigError("sweeps", "expected an array");
        for (std::size_t k = 0; k < v->size(); ++k) {
            const std::string path = "sweeps[" + std::to_string(k) + "]";
            ObjectReader r((*v)[k], path);
            ParameterSweep s;
            r.string("parameter", s.parameter);
            if (!sweepable().count(s.parameter)) {
                throw ConfigError(path + ".parameter", "not a sweepable parameter");
            }
            if (const json* vals = r.get("values")) {
                if (!vals->is_array() || vals->empty()) {
                    throw ConfigError(path + ".values", "expected a nonempty array of numbers");
                }
                for (const auto& x : *vals) {
                    if (!x.is_number() || !std::isfinite(x.get<double>())) {
                        throw ConfigError(path + ".values", "expected finite numbers");
                    }
                    s.values.push_back(x.get<double>());
                }
            } else {
                throw ConfigError(path + ".values", "required");
            }
            r.finish();
            cfg.sweeps.push_back(std::move(s));
        }
    }

    root.string("output_dir", cfg.output_dir);
    root.finish();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("<file>", e.what());
    }
    return parse_config_text(text);
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["network"] = {{"kind", cfg.network.kind},
                    {"n", cfg.network.n},
                    {"seed", cfg.network.seed},
                    {"p_edge", cfg.network.p_edge},
                    {"degree", cfg.network.degree},
                    {"edges_file", cfg.network.edges_file}};
    auto cls = [](const RiskClassSpec& s) {
        return nlohmann::ordered_json{{"p0", s.p0}, {"beta", s.beta}, {"binv", s.binv}};
    };
    j["mix"] = {{"theta", cfg.mix.theta}, {"hc", cls(cfg.mix.hc)}, {"lc", cls(cfg.mix.lc)}};
    j["utility"] = {{"a", cfg.utility.a},
                    {"gamma", cfg.utility.gamma},
                    {"kappa", cfg.utility.kappa},
                    {"lambda", cfg.utility.lambda}};
    j["wealth"] = {{"w0", cfg.wealth.w0}, {"r", cfg.wealth.r}};
    j["s_nbr"] = cfg.s_nbr;
    j["scenario"] = cfg.scenario;
    j["mode"] = to_string(cfg.mode);
    j["mandatory"] = cfg.mandatory;
    j["solver"] = {{"contract_grid", cfg.solver.contract_grid},
                   {"fair_grid", cfg.solver.fair_grid},
                   {"fair_grid_2d", cfg.solver.fair_grid_2d},
                   {"refine_iterations", cfg.solver.refine_iterations}};
    j["agent"] = {{"x_max", cfg.agent.x_max},
                  {"grid_points", cfg.agent.grid_points},
                  {"x_tol", cfg.agent.x_tol}};
    j["equilibrium"] = {
        {"dynamics",
         cfg.equilibrium.dynamics == Dynamics::round_robin ? "round_robin" : "synchronous"},
        {"tol", cfg.equilibrium.tol},
        {"max_iter", cfg.equilibrium.max_iter}};
    j["degree_sweep"] = {{"degrees", cfg.sweep_degrees}, {"n", cfg.sweep_n}};
    auto sweeps = nlohmann::ordered_json::array();
    for (const auto& s : cfg.sweeps) {
        sweeps.push_back({{"parameter", s.parameter}, {"values", s.values}});
    }
    j["sweeps"] = sweeps;
    j["output_dir"] = cfg.output_dir;
    return j;
}

ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& path,
                                double value) {
    if (!sweepable().count(path)) throw ConfigError(path, "not a sweepable parameter");
    json j = json::parse(to_json(cfg).dump());
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = value;
    return parse_config(j);
}

}  // namespace cyberins
