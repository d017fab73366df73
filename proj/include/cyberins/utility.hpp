/**
 * @file utility.hpp
 * @brief User payoffs: CARA wealth utility, a concave security benefit that
 * includes neighbors' investments, and expected utility under a contract.
 *
 *   u(w)          = (1 - exp(-a w)) / a
 *   U(w, x, s)    = u(w - kappa x) + gamma ln(1 + x + lambda s)
 *   EU(C, x)      = p(x) U(w0 - r + c, x, s) + (1 - p(x)) U(w0 - z, x, s)
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cyberins/contract_terms.hpp"
#include "cyberins/risk.hpp"
#include "cyberins/simd/eu_kernel.hpp"

namespace cyberins {

struct UtilitySpec {
    double a = 0.5;       ///< absolute risk aversion, > 0
    double gamma = 1.0;   ///< security benefit weight, >= 0
    double kappa = 0.5;   ///< investment cost per unit, > 0
    double lambda = 0.5;  ///< externality weight, >= 0

    std::string invalid_field() const;
};

double wealth_utility(const UtilitySpec& spec, double w);
double wealth_utility_derivative(const UtilitySpec& spec, double w);

/// U(w, x, s); requires x >= 0 and s_nbr >= 0.
double total_utility(const UtilitySpec& spec, double w, double x, double s_nbr);

/// Throws std::domain_error for x < binv and std::invalid_argument for an
/// inadmissible contract.
double expected_utility(const UtilitySpec& uspec, const RiskFunction& risk,
                        const Contract& contract, double x, double s_nbr,
                        const WealthState& wealth);

/// Same as expected_utility without the argument checks; for inner loops
/// whose inputs were validated once up front.
double expected_utility_unchecked(const UtilitySpec& uspec, const RiskFunction& risk,
                                  const Contract& contract, double x, double s_nbr,
                                  const WealthState& wealth);

/// d EU / d x including the cost and security-benefit terms.
double expected_utility_dx(const UtilitySpec& uspec, const RiskFunction& risk,
                           const Contract& contract, double x, double s_nbr,
                           const WealthState& wealth);

simd::EuBatchParams make_batch_params(const UtilitySpec& uspec, const RiskFunction& risk,
                                      const Contract& contract, double s_nbr,
                                      const WealthState& wealth);

/// Sample points for the decreasing-differences and externality checks.
struct PayoffGrid {
    std::vector<double> x;  ///< own investments
    std::vector<double> s;  ///< aggregate neighbor investments
    double w = 10.0;        ///< fixed wealth

    /// x, s in {0, 0.5, ..., 5}.
    static PayoffGrid standard(double w = 10.0);
};

using Payoff = std::function<double(double x, double s)>;

/// U(x, s) - U(x', s) <= U(x, s') - U(x', s') for all x > x', s > s' on the grid.
bool has_decreasing_differences(const Payoff& payoff, const std::vector<double>& xs,
                                const std::vector<double>& ss, double tol = 1e-12);
bool check_submodularity(const UtilitySpec& spec, const PayoffGrid& grid, double tol = 1e-12);

/// U(x, s) >= U(x, s') whenever s >= s' on the grid.
bool check_positive_externality(const UtilitySpec& spec, const PayoffGrid& grid);

}  // namespace cyberins
