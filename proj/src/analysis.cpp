#include "cyberins/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cyberins/io.hpp"

namespace cyberins {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::not_applicable: return "not_applicable";
    }
    return "?";
}

std::string to_string(EquilibriumKind k) {
    return k == EquilibriumKind::pooling ? "pooling" : "separating";
}

nlohmann::ordered_json to_json(const ClaimReport& report) {
    nlohmann::ordered_json j;
    j["claim"] = report.claim;
    j["verdict"] = to_string(report.verdict);
    auto& ws = j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : report.witnesses) {
        nlohmann::ordered_json wj;
        wj["config"] = w.config;
        auto& vals = wj["values"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : w.values) vals[k] = v;
        ws.push_back(wj);
    }
    auto& tol = j["tolerances"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.tolerances) tol[k] = v;
    return j;
}

double deductible(const Contract& contract, double r) { return r - contract.c - contract.z; }

EquilibriumKind classify_equilibrium(const ContractSolution& solution) {
    const bool same = std::abs(solution.contract_hc.z - solution.contract_lc.z) <= 1e-9 &&
                      std::abs(solution.contract_hc.c - solution.contract_lc.c) <= 1e-9;
    return same ? EquilibriumKind::pooling : EquilibriumKind::separating;
}

namespace {

void append(DegreeSweep& s, int d, const Contract& c, double r, double x, double profit,
            bool market, double gap) {
    s.degrees.push_back(d);
    s.premium.push_back(c.z);
    s.net_coverage.push_back(c.c);
    s.gross_coverage.push_back(c.gross());
    s.deductible.push_back(deductible(c, r));
    s.investment.push_back(x);
    s.profit.push_back(profit);
    s.market.push_back(market);
    s.symmetry_gap.push_back(gap);
}

}  // namespace

std::vector<DegreeSweep> degree_sweep(const SweepSetup& setup, Scenario scenario,
                                      const std::vector<int>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("degree_sweep: no degrees given");
    for (std::size_t k = 1; k < degrees.size(); ++k) {
        if (degrees[k] <= degrees[k - 1]) {
            throw std::invalid_argument("degree_sweep: degrees must be strictly increasing");
        }
    }

    std::vector<DegreeSweep> out;
    if (scenario == Scenario::C) {
        out.resize(2);
        out[0].label = "C_LC";
        out[1].label = "C_HC";
    } else {
        out.resize(1);
        out[0].label = to_string(scenario);
    }

    const double r = setup.model.wealth.r;
    const RiskFunction alpha = blend_alpha(setup.model.mix);
    for (int d : degrees) {
        if (d < 0) throw std::invalid_argument("degree_sweep: negative degree");
        const Network net = generate(topology::Regular{static_cast<std::size_t>(d)}, setup.n, setup.seed);
        const std::vector<RiskFunction> risks(net.size(), alpha);
        std::vector<Contract> contracts(net.size(), kNullContract);

        MarketModel model = setup.model;
        ContractSolution sol;
        double s_prev = -1.0;
        InvestmentProfile profile;
        for (int outer = 0; outer < setup.max_outer; ++outer) {
            profile = solve_equilibrium(net, model.utility, risks, contracts, model.wealth,
                                        setup.equilibrium);
            const double s = externality_sum(net, profile.x, 0);
            model.s_nbr = s;
            sol = optimize(scenario, model, setup.solver);
            const Contract held = scenario == Scenario::C ? sol.contract_lc : sol.contract_hc;
            std::fill(contracts.begin(), contracts.end(), held);
            if (std::abs(s - s_prev) <= setup.outer_tol * (1.0 + s)) break;
            s_prev = s;
        }

        const double gap =
            profile.x.size() > 1 ? std::abs(profile.x[0] - profile.x[1]) : 0.0;
        if (scenario == Scenario::C) {
            const auto* lc = sol.find("LC");
            const auto* hc = sol.find("HC");
            append(out[0], d, sol.contract_lc, r, lc ? lc->x : profile.x[0],
                   lc ? lc->profit : 0.0, sol.market, gap);
            append(out[1], d, sol.contract_hc, r, hc ? hc->x : profile.x[0],
                   hc ? hc->profit : 0.0, sol.market, gap);
        } else {
            append(out[0], d, sol.contract_hc, r, profile.x[0], sol.insurer_profit, sol.market, gap);
        }
    }
    return out;
}

ClaimReport check_lemma4(const DegreeSweep& sweep, double tol) {
    ClaimReport rep;
    rep.claim = "lemma4_deductible_concave_increasing:" + sweep.label;
    rep.tolerances = {{"difference_tol", tol}};
    const auto& y = sweep.deductible;
    if (y.size() < 3) {
        rep.verdict = Verdict::not_applicable;
        return rep;
    }
    rep.verdict = Verdict::holds;
    for (std::size_t k = 1; k < y.size(); ++k) {
        const double first = y[k] - y[k - 1];
        if (first < -tol) {
            rep.verdict = Verdict::fails;
            rep.witnesses.push_back({"degrees " + std::to_string(sweep.degrees[k - 1]) + "," +
                                         std::to_string(sweep.degrees[k]),
                                     {{"first_difference", first},
                                      {"deductible_lo", y[k - 1]},
                                      {"deductible_hi", y[k]}}});
        }
    }
    for (std::size_t k = 2; k < y.size(); ++k) {
        const double second = y[k] - 2.0 * y[k - 1] + y[k - 2];
        if (second > tol) {
            rep.verdict = Verdict::fails;
            rep.witnesses.push_back({"degrees " + std::to_string(sweep.degrees[k - 2]) + "," +
                                         std::to_string(sweep.degrees[k - 1]) + "," +
                                         std::to_string(sweep.degrees[k]),
                                     {{"second_difference", second},
                                      {"deductible_0", y[k - 2]},
                                      {"deductible_1", y[k - 1]},
                                      {"deductible_2", y[k]}}});
        }
    }
    return rep;
}

ClaimReport check_market_existence(
    const std::vector<std::pair<std::string, ContractSolution>>& solutions, bool mandatory) {
    ClaimReport rep;
    rep.claim = "theorem1_market_existence";
    if (solutions.empty() || !mandatory) {
        rep.verdict = Verdict::not_applicable;
        return rep;
    }
    rep.verdict = Verdict::holds;
    for (const auto& [name, sol] : solutions) {
        if (!(sol.feasible && sol.market)) {
            rep.verdict = Verdict::fails;
            double min_slack = 0.0;
            for (const auto& c : sol.classes) min_slack = std::min(min_slack, c.ir_slack);
            rep.witnesses.push_back({name + " scenario " + to_string(sol.scenario),
                                     {{"feasible", sol.feasible ? 1.0 : 0.0},
                                      {"market", sol.market ? 1.0 : 0.0},
                                      {"min_ir_slack", min_slack},
                                      {"profit", sol.insurer_profit}}});
        }
    }
    return rep;
}

namespace {

Witness coverage_witness(const std::string& label, const Contract& c, double r) {
    return {label,
            {{"premium", c.z},
             {"net_coverage", c.c},
             {"gross_coverage", c.gross()},
             {"deductible", deductible(c, r)}}};
}

bool partial(const Contract& c, double r, const CoverageTolerances& tol) {
    return deductible(c, r) >= tol.partial_frac * r;
}

}  // namespace

ClaimReport check_lemma1(const ContractSolution& a, double r, const CoverageTolerances& tol) {
    ClaimReport rep;
    rep.claim = "lemma1_partial_pooling";
    rep.tolerances = {{"partial_deductible_frac", tol.partial_frac}};
    if (!a.feasible) {
        rep.verdict = Verdict::not_applicable;
        return rep;
    }
    const bool ok = partial(a.contract_hc, r, tol) &&
                    classify_equilibrium(a) == EquilibriumKind::pooling;
    rep.verdict = ok ? Verdict::holds : Verdict::fails;
    rep.witnesses.push_back(coverage_witness("scenario A " + to_string(a.mode), a.contract_hc, r));
    return rep;
}

ClaimReport check_lemma2(const ContractSolution& b, double r, const CoverageTolerances& tol) {
    ClaimReport rep;
    rep.claim = "lemma2_coverage_by_value_of_information";
    rep.tolerances = {{"partial_deductible_frac", tol.partial_frac},
                      {"full_coverage_frac", tol.full_frac},
                      {"vi_zero_tol", 0.0}};
    if (!b.feasible || !b.vi) {
        rep.verdict = Verdict::not_applicable;
        return rep;
    }
    const double vi = *b.vi;
    const Contract& c = b.contract_hc;
    const bool coverage_ok = vi <= 0.0 ? std::abs(c.gross() - r) <= tol.full_frac * r
                                         : partial(c, r, tol);
    const bool ok = coverage_ok && classify_equilibrium(b) == EquilibriumKind::pooling;
    rep.verdict = ok ? Verdict::holds : Verdict::fails;
    auto w = coverage_witness("scenario B " + to_string(b.mode), c, r);
    w.values.emplace_back("vi", vi);
    rep.witnesses.push_back(w);
    return rep;
}

ClaimReport check_lemma3(const ContractSolution& c, double r, const CoverageTolerances& tol) {
    ClaimReport rep;
    rep.claim = "lemma3_separating_partial";
    rep.tolerances = {{"ic_slack_tol", 1e-9}, {"distinct_gap_frac", 1e-3}};
    if (!c.feasible) {
        rep.verdict = Verdict::not_applicable;
        return rep;
    }
    const double gap = std::max(std::abs(c.contract_hc.z - c.contract_lc.z),
                                std::abs(c.contract_hc.c - c.contract_lc.c));
    const bool ic = c.ic_slack_hc.value_or(0.0) >= -1e-9 && c.ic_slack_lc.value_or(0.0) >= -1e-9;
    const bool ok = gap > tol.full_frac * r && ic && c.contract_hc.gross() < r &&
                    c.contract_lc.gross() < r;
    rep.verdict = ok ? Verdict::holds : Verdict::fails;
    auto whc = coverage_witness("scenario C " + to_string(c.mode) + " HC", c.contract_hc, r);
    whc.values.emplace_back("ic_slack", c.ic_slack_hc.value_or(0.0));
    auto wlc = coverage_witness("scenario C " + to_string(c.mode) + " LC", c.contract_lc, r);
    wlc.values.emplace_back("ic_slack", c.ic_slack_lc.value_or(0.0));
    rep.witnesses.push_back(whc);
    rep.witnesses.push_back(wlc);
    return rep;
}

void write_sweep_csv(std::ostream& out, const DegreeSweep& s) {
    out << "degree,premium,net_coverage,gross_coverage,deductible,investment,profit\n";
    for (std::size_t k = 0; k < s.degrees.size(); ++k) {
        out << s.degrees[k] << ',' << format_csv_number(s.premium[k]) << ','
            << format_csv_number(s.net_coverage[k]) << ','
            << format_csv_number(s.gross_coverage[k]) << ','
            << format_csv_number(s.deductible[k]) << ','
            << format_csv_number(s.investment[k]) << ',' << format_csv_number(s.profit[k])
            << '\n';
    }
}

DegreeSweep read_sweep_csv(std::istream& in, const std::string& label) {
    DegreeSweep s;
    s.label = label;
    std::string line;
    if (!std::getline(in, line) || line.rfind("degree,", 0) != 0) {
        throw std::invalid_argument("sweep CSV: missing header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) {
            throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) +
                                        ": expected 7 columns");
        }
        try {
            std::size_t used = 0;
            const int d = std::stoi(cells[0], &used);
            if (used != cells[0].size()) throw std::invalid_argument("degree");
            std::vector<double> v;
            for (std::size_t k = 1; k < 7; ++k) {
                v.push_back(std::stod(cells[k], &used));
                if (used != cells[k].size()) throw std::invalid_argument("number");
            }
            if (!s.degrees.empty() && d <= s.degrees.back()) {
                throw std::invalid_argument("degrees not increasing");
            }
            s.degrees.push_back(d);
            s.premium.push_back(v[0]);
            s.net_coverage.push_back(v[1]);
            s.gross_coverage.push_back(v[2]);
            s.deductible.push_back(v[3]);
            s.investment.push_back(v[4]);
            s.profit.push_back(v[5]);
            s.market.push_back(true);
            s.symmetry_gap.push_back(0.0);
        } catch (const std::exception& e) {
            throw std::invalid_argument("sweep CSV line " + std::to_string(line_no) +
                                        ": malformed (" + e.what() + ")");
        }
    }
    return s;
}

}  // namespace cyberins
