/**
 * @file agent.hpp
 * @brief A user's optimal self-defense investment for a given contract and
 * neighbor investment level.
 */

#pragma once

#include "cyberins/contract_terms.hpp"
#include "cyberins/risk.hpp"
#include "cyberins/utility.hpp"

namespace cyberins {

struct AgentOptions {
    double x_max = 20.0;     ///< upper end of the investment search interval
    int grid_points = 200;   ///< coarse scan resolution over [binv, x_max]
    double x_tol = 1e-10;    ///< golden-section bracket width at termination
};

struct BestResponse {
    double x_opt = 0.0;
    double eu_opt = 0.0;
    double foc_residual = 0.0;  ///< dEU/dx at x_opt
    bool converged = false;
};

/**
 * Maximize EU over [binv, x_max]: coarse scan with the batched kernel, then
 * golden-section search on the bracket around the best grid point. Ties go
 * to the smaller investment.
 *
 * Throws std::invalid_argument for bad inputs and std::runtime_error when the
 * utility evaluates to a non-finite value.
 */
BestResponse best_response(const UtilitySpec& uspec, const RiskFunction& risk,
                           const Contract& contract, double s_nbr, const WealthState& wealth,
                           const AgentOptions& opts = {});

/// Best response to the null contract (no insurance).
BestResponse baseline_investment(const UtilitySpec& uspec, const RiskFunction& risk,
                                 double s_nbr, const WealthState& wealth,
                                 const AgentOptions& opts = {});

/// Full derivative dEU/dx; zero at an interior optimum.
double foc_residual(const UtilitySpec& uspec, const RiskFunction& risk,
                    const Contract& contract, double x, double s_nbr,
                    const WealthState& wealth);

}  // namespace cyberins
