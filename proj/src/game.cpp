#include "cyberins/game.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cyberins/io.hpp"

namespace cyberins {

double externality_sum(const Network& net, const std::vector<double>& x, std::size_t i) {
    if (x.size() != net.size()) {
        throw std::invalid_argument("externality_sum: profile size does not match network");
    }
    double s = 0.0;
    for (std::size_t j : net.neighbors(i)) s += x[j];
    return s;
}

namespace {

void check_inputs(const Network& net, const std::vector<RiskFunction>& risks,
                  const std::vector<Contract>& contracts) {
    if (risks.size() != net.size() || contracts.size() != net.size()) {
        throw std::invalid_argument("solve_equilibrium: need one risk and contract per user");
    }
}

double respond(const Network& net, const UtilitySpec& uspec,
               const std::vector<RiskFunction>& risks, const std::vector<Contract>& contracts,
               const WealthState& wealth, const std::vector<double>& x, std::size_t i,
               const AgentOptions& agent) {
    const double s = externality_sum(net, x, i);
    return best_response(uspec, risks[i], contracts[i], s, wealth, agent).x_opt;
}

}  // namespace

InvestmentProfile solve_equilibrium(const Network& net, const UtilitySpec& uspec,
                                    const std::vector<RiskFunction>& risks,
                                    const std::vector<Contract>& contracts,
                                    const WealthState& wealth, const EquilibriumOptions& opts) {
    check_inputs(net, risks, contracts);
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_equilibrium: tol must be positive");

    const std::size_t n = net.size();
    InvestmentProfile profile;
    profile.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) profile.x[i] = risks[i].binv();

    std::vector<double> next(n);
    for (int sweep = 1; sweep <= opts.max_iter; ++sweep) {
        double delta = 0.0;
        if (opts.dynamics == Dynamics::round_robin) {
            for (std::size_t i = 0; i < n; ++i) {
                const double xi =
                    respond(net, uspec, risks, contracts, wealth, profile.x, i, opts.agent);
                delta = std::max(delta, std::abs(xi - profile.x[i]));
                profile.x[i] = xi;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = respond(net, uspec, risks, contracts, wealth, profile.x, i, opts.agent);
                delta = std::max(delta, std::abs(next[i] - profile.x[i]));
            }
            profile.x.swap(next);
        }
        profile.max_delta = delta;
        if (delta <= opts.tol) {
            profile.converged = true;
            profile.iterations = sweep - 1;
            return profile;
        }
    }
    profile.iterations = opts.max_iter;
    return profile;
}

double verification_sweep(const Network& net, const UtilitySpec& uspec,
                          const std::vector<RiskFunction>& risks,
                          const std::vector<Contract>& contracts, const WealthState& wealth,
                          const std::vector<double>& x, const AgentOptions& agent) {
    check_inputs(net, risks, contracts);
    double delta = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        delta = std::max(delta,
                         std::abs(respond(net, uspec, risks, contracts, wealth, x, i, agent) - x[i]));
    }
    return delta;
}

std::map<std::size_t, double> free_riding_index(const Network& net,
                                                const InvestmentProfile& profile) {
    if (profile.x.size() != net.size()) {
        throw std::invalid_argument("free_riding_index: profile size does not match network");
    }
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < net.size(); ++i) {
        auto& [sum, count] = acc[net.degree(i)];
        sum += profile.x[i];
        ++count;
    }
    std::map<std::size_t, double> out;
    for (const auto& [d, sc] : acc) out[d] = sc.first / static_cast<double>(sc.second);
    return out;
}

void write_profile_csv(std::ostream& out, const Network& net, const InvestmentProfile& profile,
                       const std::vector<std::string>& class_labels) {
    out << "user,degree,class,investment\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        out << i << ',' << net.degree(i) << ','
            << (i < class_labels.size() ? class_labels[i] : std::string("alpha")) << ','
            << format_csv_number(profile.x[i]) << '\n';
    }
}

}  // namespace cyberins
