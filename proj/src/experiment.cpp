#include "cyberins/experiment.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "cyberins/io.hpp"
#include "cyberins/plot.hpp"

namespace cyberins {

namespace {

using ojson = nlohmann::ordered_json;

ojson contract_json(const Contract& c, double r) {
    return {{"premium", c.z},
            {"net_coverage", c.c},
            {"gross_coverage", c.gross()},
            {"deductible", deductible(c, r)}};
}

ojson optional_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

/// HC with probability theta, drawn from the network seed.
std::vector<RiskClass> assign_classes(std::size_t n, double theta, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<RiskClass> out(n);
    for (auto& c : out) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        c = u < theta ? RiskClass::HC : RiskClass::LC;
    }
    return out;
}

struct ProfileRun {
    InvestmentProfile profile;
    double verification = 0.0;
};

ProfileRun play_network(const ExperimentConfig& cfg, const Network& net, Scenario scenario,
                        const ContractSolution& sol, const std::vector<RiskClass>& classes,
                        std::vector<std::string>& labels) {
    const std::size_t n = net.size();
    std::vector<RiskFunction> risks;
    std::vector<Contract> contracts;
    risks.reserve(n);
    contracts.reserve(n);
    labels.clear();
    const RiskFunction alpha = blend_alpha(cfg.mix);
    for (std::size_t i = 0; i < n; ++i) {
        if (scenario == Scenario::A) {
            risks.push_back(alpha);
            labels.push_back("alpha");
        } else {
            risks.push_back(cfg.mix.risk(classes[i]));
            labels.push_back(to_string(classes[i]));
        }
        if (scenario == Scenario::C) {
            contracts.push_back(classes[i] == RiskClass::HC ? sol.contract_hc : sol.contract_lc);
        } else {
            contracts.push_back(sol.contract_hc);
        }
    }
    ProfileRun run;
    run.profile = solve_equilibrium(net, cfg.utility, risks, contracts, cfg.wealth, cfg.equilibrium);
    run.verification = verification_sweep(net, cfg.utility, risks, contracts, cfg.wealth,
                                          run.profile.x, cfg.agent);
    return run;
}

std::string sweep_filename(const std::string& parameter) {
    std::string s = parameter;
    std::replace(s.begin(), s.end(), '.', '_');
    return "sweep_" + s + ".csv";
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string engine_version() { return CYBERINS_VERSION; }

nlohmann::ordered_json to_json(const ContractSolution& s, double r) {
    ojson j;
    j["scenario"] = to_string(s.scenario);
    j["mode"] = to_string(s.mode);
    j["feasible"] = s.feasible;
    j["market"] = s.market;
    j["mandatory_contradiction"] = s.mandatory_contradiction;
    j["equilibrium"] = to_string(classify_equilibrium(s));
    j["contracts"] = {{"HC", contract_json(s.contract_hc, r)}, {"LC", contract_json(s.contract_lc, r)}};
    auto classes = ojson::array();
    for (const auto& c : s.classes) {
        classes.push_back({{"label", c.label},
                           {"weight", c.weight},
                           {"contract", contract_json(c.contract, r)},
                           {"investment", c.x},
                           {"expected_utility", c.eu},
                           {"investment_uninsured", c.x_null},
                           {"expected_utility_uninsured", c.eu_null},
                           {"ir_slack", c.ir_slack},
                           {"profit", c.profit}});
    }
    j["classes"] = classes;
    j["insurer_profit"] = s.insurer_profit;
    j["objective"] = s.objective;
    j["ic_slack_hc"] = optional_json(s.ic_slack_hc);
    j["ic_slack_lc"] = optional_json(s.ic_slack_lc);
    j["value_of_information"] = optional_json(s.vi);
    j["diagnostics"] = {{"grid_steps", s.diagnostics.grid_steps},
                        {"grid_step_size", s.diagnostics.grid_steps > 0
                                               ? r / s.diagnostics.grid_steps
                                               : 0.0},
                        {"candidates", s.diagnostics.candidates},
                        {"feasible_candidates", s.diagnostics.feasible_candidates},
                        {"refinement_steps", s.diagnostics.refinement_steps},
                        {"lifts", s.diagnostics.lifts},
                        {"best_responses", s.diagnostics.best_responses}};
    return j;
}

RunResult run_experiment(const ExperimentConfig& cfg, bool emit_plots) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    RunResult result;
    auto write = [&](const std::string& name, const std::string& content) {
        write_file_atomic(dir / name, content);
        result.files.push_back(name);
    };

    const double r = cfg.wealth.r;
    const MarketModel model = cfg.market_model();
    const SolverOptions opts = cfg.solver_options();
    const auto scenarios = cfg.scenarios();

    const Network net = generate(cfg.network.topology(), cfg.network.n, cfg.network.seed);
    const auto classes = assign_classes(net.size(), cfg.mix.theta, cfg.network.seed);

    std::vector<std::pair<std::string, ContractSolution>> solutions;
    ojson equilibria = ojson::object();
    for (Scenario sc : scenarios) {
        const ContractSolution sol = optimize(sc, model, opts);
        const std::string name = to_string(sc);
        write("solution_" + name + ".json", dump(to_json(sol, r)));
        result.any_no_market = result.any_no_market || !sol.market;

        std::vector<std::string> labels;
        const ProfileRun run = play_network(cfg, net, sc, sol, classes, labels);
        std::ostringstream csv;
        write_profile_csv(csv, net, run.profile, labels);
        write("profile_" + name + ".csv", csv.str());
        equilibria[name] = {{"converged", run.profile.converged},
                            {"iterations", run.profile.iterations},
                            {"max_delta", run.profile.max_delta},
                            {"verification_delta", run.verification}};
        solutions.emplace_back(name, sol);
    }

    for (const auto& [name, sol] : solutions) {
        if (sol.scenario == Scenario::A) result.reports.push_back(check_lemma1(sol, r));
        if (sol.scenario == Scenario::B) result.reports.push_back(check_lemma2(sol, r));
        if (sol.scenario == Scenario::C) result.reports.push_back(check_lemma3(sol, r));
    }
    result.reports.push_back(check_market_existence(solutions, cfg.mandatory));

    if (!cfg.sweep_degrees.empty()) {
        SweepSetup setup;
        setup.model = model;
        setup.solver = opts;
        setup.equilibrium = cfg.equilibrium;
        setup.n = cfg.sweep_n;
        setup.seed = cfg.network.seed;
        for (Scenario sc : scenarios) {
            for (const auto& sweep : degree_sweep(setup, sc, cfg.sweep_degrees)) {
                std::ostringstream csv;
                write_sweep_csv(csv, sweep);
                const std::string stem = "degree_sweep_" + sweep.label;
                write(stem + ".csv", csv.str());
                result.reports.push_back(check_lemma4(sweep, 1e-2 * r));
                if (emit_plots) {
                    emit_plot_data(dir / (stem + ".csv"), dir / ("plot_" + stem));
                    result.files.push_back("plot_" + stem + ".dat");
                    result.files.push_back("plot_" + stem + ".svg");
                }
            }
        }
    }

    for (const auto& sweep : cfg.sweeps) {
        std::ostringstream csv;
        csv << "value,scenario,feasible,market,premium_hc,net_coverage_hc,deductible_hc,"
               "premium_lc,net_coverage_lc,deductible_lc,insurer_profit\n";
        for (double v : sweep.values) {
            const ExperimentConfig point = with_parameter(cfg, sweep.parameter, v);
            const double rp = point.wealth.r;
            for (Scenario sc : scenarios) {
                const ContractSolution sol =
                    optimize(sc, point.market_model(), point.solver_options());
                csv << format_csv_number(v) << ',' << to_string(sc) << ','
                    << (sol.feasible ? 1 : 0) << ',' << (sol.market ? 1 : 0) << ','
                    << format_csv_number(sol.contract_hc.z) << ','
                    << format_csv_number(sol.contract_hc.c) << ','
                    << format_csv_number(deductible(sol.contract_hc, rp)) << ','
                    << format_csv_number(sol.contract_lc.z) << ','
                    << format_csv_number(sol.contract_lc.c) << ','
                    << format_csv_number(deductible(sol.contract_lc, rp)) << ','
                    << format_csv_number(sol.insurer_profit) << '\n';
            }
        }
        write(sweep_filename(sweep.parameter), csv.str());
    }

    ojson verdicts;
    auto claims = ojson::array();
    for (const auto& rep : result.reports) claims.push_back(to_json(rep));
    verdicts["claims"] = claims;
    const auto find = [&](Scenario sc) -> const ContractSolution* {
        for (const auto& [name, sol] : solutions) {
            if (sol.scenario == sc) return &sol;
        }
        return nullptr;
    };
    auto comparisons = ojson::array();
    if (const auto *a = find(Scenario::A), *c = find(Scenario::C); a && c) {
        comparisons.push_back({{"comparison", "insurer_profit_without_vs_with_private_information"},
                               {"mode", to_string(cfg.mode)},
                               {"profit_A", a->insurer_profit},
                               {"profit_C", c->insurer_profit},
                               {"insurer_worse_off_in_C", c->insurer_profit < a->insurer_profit}});
    }
    verdicts["comparisons"] = comparisons;
    write("verdicts.json", dump(verdicts));

    ojson manifest;
    manifest["engine"] = "cyberins";
    manifest["version"] = engine_version();
    manifest["seed"] = cfg.network.seed;
    manifest["config"] = to_json(cfg);
    manifest["config"].erase("output_dir");
    manifest["network"] = {{"users", net.size()}, {"edges", net.edge_count()}};
    manifest["equilibria"] = equilibria;
    auto files = result.files;
    files.push_back("manifest.json");
    std::sort(files.begin(), files.end());
    manifest["files"] = files;
    write("manifest.json", dump(manifest));

    std::sort(result.files.begin(), result.files.end());
    return result;
}

}  // namespace cyberins
