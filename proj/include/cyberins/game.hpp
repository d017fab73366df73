/**
 * @file game.hpp
 * @brief Network investment equilibrium via best-response dynamics.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cyberins/agent.hpp"
#include "cyberins/network.hpp"

namespace cyberins {

struct InvestmentProfile {
    std::vector<double> x;
    bool converged = false;
    /// Sweeps that changed the profile; the confirming sweep is not counted,
    /// so a decoupled game reports 1.
    int iterations = 0;
    double max_delta = 0.0;  ///< largest coordinate change in the last sweep
};

enum class Dynamics { round_robin, synchronous };

struct EquilibriumOptions {
    Dynamics dynamics = Dynamics::round_robin;
    double tol = 1e-8;
    int max_iter = 200;
    AgentOptions agent{};
};

/// Sum of neighbors' investments (lambda is applied inside the utility).
double externality_sum(const Network& net, const std::vector<double>& x, std::size_t i);

/**
 * Iterate best responses from x = binv until no coordinate moves more than tol.
 * Round-robin updates users in index order using the freshest neighbor values;
 * synchronous updates everyone from the previous sweep. Non-convergence is
 * reported through the flag, not thrown.
 */
InvestmentProfile solve_equilibrium(const Network& net, const UtilitySpec& uspec,
                                    const std::vector<RiskFunction>& risks,
                                    const std::vector<Contract>& contracts,
                                    const WealthState& wealth,
                                    const EquilibriumOptions& opts = {});

/// One best-response sweep from the given profile; returns the largest change.
double verification_sweep(const Network& net, const UtilitySpec& uspec,
                          const std::vector<RiskFunction>& risks,
                          const std::vector<Contract>& contracts, const WealthState& wealth,
                          const std::vector<double>& x, const AgentOptions& agent = {});

/// Degree -> mean equilibrium investment over users of that degree.
std::map<std::size_t, double> free_riding_index(const Network& net,
                                                const InvestmentProfile& profile);

/// CSV with header "user,degree,class,investment".
void write_profile_csv(std::ostream& out, const Network& net, const InvestmentProfile& profile,
                       const std::vector<std::string>& class_labels);

}  // namespace cyberins
