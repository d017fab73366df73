/**
 * @file contract.hpp
 * @brief The insurer's side: optimal (premium, coverage) contracts under the
 * three information scenarios, in monopoly or fair-premium mode.
 *
 * Scenario A: nobody knows the user's class; one contract for the blended
 *             class p_alpha = theta p_HC + (1 - theta) p_LC.
 * Scenario B: the user learns his class after signing; one pooling contract,
 *             class-specific investments and participation constraints.
 * Scenario C: the user knows his class before signing; a menu (C_LC, C_HC)
 *             with participation and incentive-compatibility constraints.
 *
 * Programs are solved by coarse enumeration of the contract space with nested
 * best responses, filtering on the constraints, then local refinement
 * (Nelder-Mead plus premium lifting along binding constraints).
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cyberins/agent.hpp"
#include "cyberins/contract_terms.hpp"
#include "cyberins/risk.hpp"
#include "cyberins/utility.hpp"

namespace cyberins {

enum class Scenario { A, B, C };
enum class Mode { monopoly, fair_premium };

std::string to_string(Scenario s);
std::string to_string(Mode m);
Scenario parse_scenario(const std::string& s);
Mode parse_mode(const std::string& s);

/// Everything a single user's contract program depends on.
struct MarketModel {
    UtilitySpec utility{};
    ClassMix mix{};
    WealthState wealth{};
    double s_nbr = 0.0;  ///< aggregate neighbor investment seen by the user
    AgentOptions agent{};
};

struct SolverOptions {
    Mode mode = Mode::monopoly;
    int contract_grid = 40;    ///< (z, c) grid steps per axis, step r / contract_grid
    int fair_grid = 200;       ///< gross-coverage grid steps for 1-D fair programs
    int fair_grid_2d = 40;     ///< per-axis steps for the scenario-C fair program
    int refine_iterations = 300;
    bool mandatory = false;    ///< flag a no-market outcome as a contradiction
};

/// (1 - p(x)) z - p(x) c: expected premium income minus expected net payout.
double insurer_profit(const Contract& contract, const RiskFunction& risk, double x);

/// z = p(x) c / (1 - p(x)), the zero-profit premium for net coverage c.
double fair_premium(const RiskFunction& risk, double c, double x);

/// theta EU_HC(C, x_HC) + (1 - theta) EU_LC(C, x_LC) - EU_alpha(C, x_alpha),
/// each term at its own best response to C.
double value_of_information(const MarketModel& model, const Contract& contract);

/// Separating version: theta EU_HC(C_HC) + (1 - theta) EU_LC(C_LC) - EU_alpha(C_LC).
double value_of_information(const MarketModel& model, const Contract& lc, const Contract& hc);

/// Outcome for one served type ("alpha", "HC" or "LC").
struct ClassOutcome {
    std::string label;
    double weight = 1.0;     ///< population share
    Contract contract{};
    double x = 0.0;          ///< induced investment
    double eu = 0.0;         ///< expected utility at x
    double x_null = 0.0;     ///< investment without insurance
    double eu_null = 0.0;
    double ir_slack = 0.0;   ///< eu - eu_null
    double profit = 0.0;     ///< insurer profit on this type
};

struct SolverDiagnostics {
    int grid_steps = 0;
    long candidates = 0;          ///< grid and constructed points evaluated
    long feasible_candidates = 0;
    int refinement_steps = 0;     ///< Nelder-Mead iterations
    int lifts = 0;                ///< premium/coverage lifts that improved the objective
    long best_responses = 0;
};

struct ContractSolution {
    Scenario scenario = Scenario::A;
    Mode mode = Mode::monopoly;
    bool feasible = false;        ///< all constraints hold at the returned point
    bool market = false;          ///< feasible and some served type is covered
    bool mandatory_contradiction = false;
    Contract contract_hc{};
    Contract contract_lc{};
    std::vector<ClassOutcome> classes;  ///< served types only
    double insurer_profit = 0.0;  ///< per-capita expected profit
    double objective = 0.0;       ///< profit (monopoly) or user welfare (fair)
    std::optional<double> ic_slack_hc;  ///< EU_HC(C_HC) - EU_HC(C_LC)
    std::optional<double> ic_slack_lc;  ///< EU_LC(C_LC) - EU_LC(C_HC)
    std::optional<double> vi;
    SolverDiagnostics diagnostics{};

    const ClassOutcome* find(const std::string& label) const;
};

ContractSolution optimize_scenario_A(const MarketModel& model, const SolverOptions& opts = {});
ContractSolution optimize_scenario_B(const MarketModel& model, const SolverOptions& opts = {});
ContractSolution optimize_scenario_C(const MarketModel& model, const SolverOptions& opts = {});
ContractSolution optimize(Scenario scenario, const MarketModel& model,
                          const SolverOptions& opts = {});

/// Recompute best responses, slacks, profits and VI from the stored contracts
/// and compare against the stored values. Returns human-readable violations;
/// empty means every invariant holds.
std::vector<std::string> verify_solution(const MarketModel& model,
                                         const ContractSolution& solution,
                                         double reproduce_tol = 1e-8);

}  // namespace cyberins
