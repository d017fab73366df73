/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance run. Prints one PASS/FAIL line per criterion
 * with the measured quantities and wall time, then a summary line.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cyberins/analysis.hpp"
#include "cyberins/config.hpp"
#include "cyberins/contract.hpp"
#include "cyberins/experiment.hpp"
#include "cyberins/game.hpp"
#include "oracles.hpp"

using namespace cyberins;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  ///< seconds; 0 means none
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

SolverOptions fair_mode() {
    SolverOptions o;
    o.mode = Mode::fair_premium;
    return o;
}

Outcome criterion1() {
    const MarketModel m;
    const double r = m.wealth.r;
    const auto sol = optimize_scenario_A(m, fair_mode());
    const double ded = deductible(sol.contract_lc, r);
    const bool pooling = classify_equilibrium(sol) == EquilibriumKind::pooling;
    const bool pass = sol.feasible && sol.contract_lc.gross() < r && ded >= 0.01 * r && pooling;
    return {pass, "gross=" + fmt(sol.contract_lc.gross()) + " deductible=" + fmt(ded) +
                      " (need >= " + fmt(0.01 * r) + ") pooling=" + (pooling ? "yes" : "no")};
}

Outcome criterion2() {
    MarketModel m;
    const double r = m.wealth.r;
    m.mix.theta = 1.0;
    const auto one = optimize_scenario_B(m, fair_mode());
    const bool full = one.feasible && std::abs(one.contract_lc.gross() - r) <= 1e-3 * r;
    m.mix.theta = 0.5;
    const auto half = optimize_scenario_B(m, fair_mode());
    const double vi = half.vi.value_or(0.0);
    const bool partial = half.feasible && vi > 0.0 && half.contract_lc.gross() < r - 0.01 * r;
    return {full && partial, "theta=1: |gross-r|=" + fmt(std::abs(one.contract_lc.gross() - r)) +
                                 (full ? " ok" : " FAIL") + "; theta=0.5: VI=" + fmt(vi) +
                                 " deductible=" + fmt(deductible(half.contract_lc, r)) +
                                 " (need > " + fmt(0.01 * r) + ")" + (partial ? " ok" : " FAIL")};
}

Outcome criterion3() {
    const MarketModel m;
    const double r = m.wealth.r;
    const auto sol = optimize_scenario_C(m, fair_mode());
    const double gap = std::max({std::abs(sol.contract_hc.z - sol.contract_lc.z),
                                 std::abs(sol.contract_hc.c - sol.contract_lc.c)});
    const double ic_hc = sol.ic_slack_hc.value_or(-1.0);
    const double ic_lc = sol.ic_slack_lc.value_or(-1.0);
    const bool separating = sol.feasible && gap > 1e-3 * r && ic_hc >= -1e-9 && ic_lc >= -1e-9 &&
                            sol.contract_hc.gross() < r && sol.contract_lc.gross() < r;

    const auto mono = optimize_scenario_C(m);
    const auto grid = oracle::menu_grid(m.utility, m.mix, m.wealth, m.s_nbr, 40);
    const bool mono_ok = mono.feasible && grid.found &&
                         mono.insurer_profit >= grid.profit - 1e-9 &&
                         mono.ic_slack_hc.value_or(-1.0) >= -1e-9 &&
                         mono.ic_slack_lc.value_or(-1.0) >= -1e-9 &&
                         verify_solution(m, mono).empty();
    return {separating && mono_ok,
            "fair: gap=" + fmt(gap) + " ic=(" + fmt(ic_hc) + "," + fmt(ic_lc) + ") gross=(" +
                fmt(sol.contract_hc.gross()) + "," + fmt(sol.contract_lc.gross()) +
                "); monopoly profit=" + fmt(mono.insurer_profit) + " vs menu grid " + fmt(grid.profit)};
}

Outcome criterion4() {
    SweepSetup setup;
    setup.solver = fair_mode();
    std::vector<int> degrees;
    for (int d = 1; d <= 10; ++d) degrees.push_back(d);
    const double tol = 1e-2 * setup.model.wealth.r;
    bool pass = true;
    std::string detail;
    for (Scenario s : {Scenario::A, Scenario::B, Scenario::C}) {
        for (const auto& sweep : degree_sweep(setup, s, degrees)) {
            const auto report = check_lemma4(sweep, tol);
            pass = pass && report.verdict == Verdict::holds;
            const auto [lo, hi] = std::minmax_element(sweep.deductible.begin(), sweep.deductible.end());
            detail += sweep.label + "=" + to_string(report.verdict) + "[" + fmt(*lo) + ".." + fmt(*hi) + "] ";
        }
    }
    return {pass, detail};
}

Outcome criterion5() {
    std::mt19937_64 rng(20240601);
    auto U = [&](double lo, double hi) { return oracle::uniform(rng, lo, hi); };
    SolverOptions opts;
    opts.mandatory = true;
    int feasible = 0;
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        MarketModel m;
        m.mix.theta = U(0.05, 0.95);
        const double beta = U(0.5, 2.0);
        const double binv = U(0.0, 1.0);
        const double p_hc = U(0.5, 0.95);
        m.mix.hc = {p_hc, beta, binv};
        m.mix.lc = {U(0.1, p_hc - 0.05), beta, binv};
        m.utility = {U(0.1, 1.0), U(0.0, 2.0), U(0.2, 1.0), U(0.0, 1.0)};
        const double w0 = U(5.0, 20.0);
        m.wealth = {w0, U(0.2, 0.8) * w0};
        m.s_nbr = U(0.0, 5.0);
        if (!validate(m.mix).empty()) ++violations;
        bool all = true;
        for (Scenario s : {Scenario::A, Scenario::B, Scenario::C}) {
            const auto sol = optimize(s, m, opts);
            all = all && sol.feasible && sol.market && !sol.mandatory_contradiction;
            violations += static_cast<int>(verify_solution(m, sol).size());
        }
        feasible += all ? 1 : 0;
    }
    return {feasible >= 95 && violations == 0,
            "feasible with a market in all scenarios: " + std::to_string(feasible) +
                "/100, invariant violations: " + std::to_string(violations)};
}

Outcome criterion6() {
    std::mt19937_64 rng(606);
    auto U = [&](double lo, double hi) { return oracle::uniform(rng, lo, hi); };
    const UtilitySpec u;
    const WealthState w;
    const ClassMix base;
    double worst_x = 0.0;
    double worst_eu = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double c = U(0.0, w.r);
        const Contract k{U(0.0, w.r - c), c};
        const double s = U(0.0, 10.0);
        const int kind = static_cast<int>(rng() % 3);
        RiskFunction risk = blend_alpha(base);
        oracle::ProbFn p = oracle::blended_probability(base);
        if (kind == 0) {
            risk = RiskFunction(base.hc);
            p = oracle::class_probability(base.hc);
        } else if (kind == 1) {
            risk = RiskFunction(base.lc);
            p = oracle::class_probability(base.lc);
        }
        const auto br = best_response(u, risk, k, s, w);
        const auto grid = oracle::grid_best_response(u, p, k, s, w);
        worst_x = std::max(worst_x, std::abs(br.x_opt - grid.x));
        worst_eu = std::max(worst_eu, std::abs(br.eu_opt - grid.value));
    }
    return {worst_x <= 1e-2 && worst_eu <= 1e-8,
            "max |dx|=" + fmt(worst_x) + " max |dEU|=" + fmt(worst_eu)};
}

Outcome criterion7() {
    std::mt19937_64 rng(707);
    auto U = [&](double lo, double hi) { return oracle::uniform(rng, lo, hi); };
    MarketModel m;
    double min_vi = 0.0;
    double max_degenerate = 0.0;
    for (int i = 0; i < 200; ++i) {
        m.mix.theta = U(0.0, 1.0);
        const double c = U(0.0, m.wealth.r);
        const Contract k{U(0.0, m.wealth.r - c), c};
        min_vi = std::min(min_vi, value_of_information(m, k));
        for (double theta : {0.0, 1.0}) {
            MarketModel d = m;
            d.mix.theta = theta;
            max_degenerate = std::max(max_degenerate, std::abs(value_of_information(d, k)));
        }
    }
    return {min_vi >= -1e-9 && max_degenerate <= 1e-12,
            "min VI=" + fmt(min_vi) + " max |VI| at theta in {0,1}=" + fmt(max_degenerate)};
}

Outcome criterion8() {
    const UtilitySpec u;
    const PayoffGrid grid = PayoffGrid::standard();
    const bool sub = check_submodularity(u, grid);
    const bool ext = check_positive_externality(u, grid);

    double worst = 0.0;
    auto compare = [&](double numeric, double analytic) {
        worst = std::max(worst, std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-3));
    };
    const ClassMix mix;
    const WealthState w;
    for (const RiskFunction& risk : {RiskFunction(mix.hc), RiskFunction(mix.lc), blend_alpha(mix)}) {
        auto p = [&](double x) { return risk.value(x); };
        auto dp = [&](double x) { return risk.derivative(x); };
        for (double x : {0.25, 1.0, 2.5, 5.0}) {
            compare(oracle::central_difference(p, x), risk.derivative(x));
            compare(oracle::central_difference(dp, x), risk.second_derivative(x));
            for (const Contract& k : {kNullContract, Contract{1.0, 3.0}, Contract{0.3, 4.5}}) {
                auto eu = [&](double xx) { return expected_utility(u, risk, k, xx, 1.0, w); };
                compare(oracle::central_difference(eu, x), expected_utility_dx(u, risk, k, x, 1.0, w));
            }
        }
    }
    auto uw = [&](double v) { return wealth_utility(u, v); };
    for (double v : {0.5, 5.0, 10.0}) compare(oracle::central_difference(uw, v), wealth_utility_derivative(u, v));

    return {sub && ext && worst <= 1e-6, std::string("submodular=") + (sub ? "yes" : "no") +
                                             " externality=" + (ext ? "yes" : "no") +
                                             " worst derivative error=" + fmt(worst)};
}

Outcome criterion9() {
    const UtilitySpec u;
    const WealthState w;
    const RiskFunction alpha = blend_alpha(ClassMix{});
    EquilibriumOptions opts;
    int worst_iter = 0;
    double worst_move = 0.0;
    bool all = true;
    for (std::size_t n : {25, 50, 100}) {
        for (std::uint64_t seed : {1, 2, 3}) {
            const Network net = generate(topology::ErdosRenyi{0.1}, n, seed);
            for (const Contract& k : {kNullContract, Contract{0.05, 2.0}}) {
                const std::vector<RiskFunction> risks(n, alpha);
                const std::vector<Contract> ks(n, k);
                const auto prof = solve_equilibrium(net, u, risks, ks, w, opts);
                const double move = verification_sweep(net, u, risks, ks, w, prof.x);
                all = all && prof.converged && prof.iterations <= 200 && move <= opts.tol;
                worst_iter = std::max(worst_iter, prof.iterations);
                worst_move = std::max(worst_move, move);
            }
        }
    }
    return {all, "18 equilibria, max iterations=" + std::to_string(worst_iter) +
                     " max verification move=" + fmt(worst_move)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / "cyberins_acceptance";
    fs::remove_all(root);
    auto cfg = parse_config_text(R"({
        "network": {"kind": "erdos_renyi", "n": 50, "seed": 7, "p_edge": 0.1},
        "degree_sweep": {"degrees": [1, 2, 3], "n": 24},
        "sweeps": [{"parameter": "utility.lambda", "values": [0.25, 0.5]}]
    })");
    std::vector<RunResult> runs;
    for (const char* name : {"first", "second"}) {
        cfg.output_dir = (root / name).string();
        runs.push_back(run_experiment(cfg, true));
    }
    bool same = runs[0].files == runs[1].files && !runs[0].files.empty();
    std::size_t compared = 0;
    for (const auto& f : runs[0].files) {
        if (slurp(root / "first" / f) != slurp(root / "second" / f)) same = false;
        ++compared;
    }
    fs::remove_all(root);
    return {same, std::to_string(compared) + " files compared byte for byte"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "partial coverage, pooling (scenario A, fair premiums)", 10, criterion1},
        {2, "full vs partial coverage by value of information (scenario B)", 20, criterion2},
        {3, "separating partial menu (scenario C) with menu grid cross-check", 60, criterion3},
        {4, "deductible concave-increasing in degree, all scenarios", 300, criterion4},
        {5, "market existence over 100 random configs", 0, criterion5},
        {6, "best response vs exhaustive grid", 0, criterion6},
        {7, "value of information sign and degenerate mixes", 0, criterion7},
        {8, "submodularity, externality, derivatives", 0, criterion8},
        {9, "network equilibrium fixed point", 30, criterion9},
        {10, "determinism across runs", 0, criterion10},
    };
    int passed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += " [over time limit " + fmt(c.time_limit) + " s]";
        }
        passed += o.pass ? 1 : 0;
        std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%zu criteria pass\n", passed, criteria.size());
    return 0;
}
