/**
 * @file analysis.hpp
 * @brief Verdicts on the structural claims: partial coverage, pooling versus
 * separating menus, deductible growth with degree, market existence.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cyberins/contract.hpp"
#include "cyberins/game.hpp"

namespace cyberins {

enum class Verdict { holds, fails, not_applicable };
std::string to_string(Verdict v);

struct Witness {
    std::string config;
    std::vector<std::pair<std::string, double>> values;
};

struct ClaimReport {
    std::string claim;
    Verdict verdict = Verdict::not_applicable;
    std::vector<Witness> witnesses;
    std::vector<std::pair<std::string, double>> tolerances;
};

nlohmann::ordered_json to_json(const ClaimReport& report);

/// Uncovered part of the loss, r - c - z.
double deductible(const Contract& contract, double r);

enum class EquilibriumKind { pooling, separating };
std::string to_string(EquilibriumKind k);

/// Pooling iff the two class contracts agree within 1e-9 in both coordinates.
EquilibriumKind classify_equilibrium(const ContractSolution& solution);

/// Contract of a representative user as a function of its degree.
struct DegreeSweep {
    std::string label;  ///< "A", "B", "C_LC" or "C_HC"
    std::vector<int> degrees;
    std::vector<double> premium;
    std::vector<double> net_coverage;
    std::vector<double> gross_coverage;
    std::vector<double> deductible;
    std::vector<double> investment;
    std::vector<double> profit;
    std::vector<bool> market;
    std::vector<double> symmetry_gap;  ///< |x_0 - x_1|, zero for symmetric equilibria
};

struct SweepSetup {
    MarketModel model{};          ///< s_nbr is ignored; it comes from the equilibrium
    SolverOptions solver{};
    EquilibriumOptions equilibrium{};
    std::size_t n = 24;           ///< users in each circulant graph
    std::uint64_t seed = 0;
    int max_outer = 20;           ///< contract/equilibrium alternations
    double outer_tol = 1e-8;
};

/**
 * For each degree d build the circulant d-regular graph on n users, then
 * alternate network equilibrium and contract design until the externality
 * seen by user 0 settles. Users invest as the blended type under the contract
 * an uninformed user holds (the pooling contract, or C_LC in scenario C).
 * Returns one series for A and B, two (C_LC, C_HC) for C.
 */
std::vector<DegreeSweep> degree_sweep(const SweepSetup& setup, Scenario scenario,
                                      const std::vector<int>& degrees);

/// Deductible nondecreasing (first differences >= -tol) and concave
/// (second differences <= tol) in degree.
ClaimReport check_lemma4(const DegreeSweep& sweep, double tol);

/// Holds iff every listed solution is feasible with a served market. Empty
/// input or a non-mandatory regime is not_applicable.
ClaimReport check_market_existence(
    const std::vector<std::pair<std::string, ContractSolution>>& solutions, bool mandatory);

/// Partial coverage means deductible >= partial_frac * r; full coverage means
/// |gross - r| <= full_frac * r.
struct CoverageTolerances {
    double partial_frac = 0.01;
    double full_frac = 1e-3;
};

ClaimReport check_lemma1(const ContractSolution& a, double r, const CoverageTolerances& tol = {});
ClaimReport check_lemma2(const ContractSolution& b, double r, const CoverageTolerances& tol = {});
ClaimReport check_lemma3(const ContractSolution& c, double r, const CoverageTolerances& tol = {});

/// CSV: degree,premium,net_coverage,gross_coverage,deductible,investment,profit.
void write_sweep_csv(std::ostream& out, const DegreeSweep& sweep);
DegreeSweep read_sweep_csv(std::istream& in, const std::string& label = {});

}  // namespace cyberins
