#include "cyberins/utility.hpp"

#include <cmath>
#include <stdexcept>

namespace cyberins {

std::string WealthState::invalid_field() const {
    if (!(w0 > 0.0) || !std::isfinite(w0)) return "w0";
    if (!(r > 0.0 && r < w0)) return "r";
    return {};
}

std::string Contract::invalid_field(const WealthState& wealth) const {
    const double slack = 1e-12 * wealth.r;
    if (!(z >= 0.0) || !std::isfinite(z)) return "z";
    if (!(c >= 0.0) || !std::isfinite(c)) return "c";
    if (!(z < wealth.w0)) return "z";
    if (!(z + c <= wealth.r + slack)) return "c";
    return {};
}

std::string UtilitySpec::invalid_field() const {
    if (!(a > 0.0) || !std::isfinite(a)) return "a";
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) return "gamma";
    if (!(kappa > 0.0) || !std::isfinite(kappa)) return "kappa";
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) return "lambda";
    return {};
}

double wealth_utility(const UtilitySpec& spec, double w) {
    return (1.0 - std::exp(-spec.a * w)) / spec.a;
}

double wealth_utility_derivative(const UtilitySpec& spec, double w) {
    return std::exp(-spec.a * w);
}

double total_utility(const UtilitySpec& spec, double w, double x, double s_nbr) {
    return wealth_utility(spec, w - spec.kappa * x) +
           spec.gamma * std::log(1.0 + x + spec.lambda * s_nbr);
}

double expected_utility_unchecked(const UtilitySpec& uspec, const RiskFunction& risk,
                                  const Contract& contract, double x, double s_nbr,
                                  const WealthState& wealth) {
    const double p = risk.value(x);
    const double loss = total_utility(uspec, wealth.w0 - wealth.r + contract.c, x, s_nbr);
    const double safe = total_utility(uspec, wealth.w0 - contract.z, x, s_nbr);
    return p * loss + (1.0 - p) * safe;
}

double expected_utility(const UtilitySpec& uspec, const RiskFunction& risk,
                        const Contract& contract, double x, double s_nbr,
                        const WealthState& wealth) {
    if (auto field = contract.invalid_field(wealth); !field.empty()) {
        throw std::invalid_argument("expected_utility: inadmissible contract field " + field);
    }
    if (!(s_nbr >= 0.0)) {
        throw std::invalid_argument("expected_utility: negative neighbor investment");
    }
    return expected_utility_unchecked(uspec, risk, contract, x, s_nbr, wealth);
}

double expected_utility_dx(const UtilitySpec& uspec, const RiskFunction& risk,
                           const Contract& contract, double x, double s_nbr,
                           const WealthState& wealth) {
    const double p = risk.value(x);
    const double dp = risk.derivative(x);
    const double w_loss = wealth.w0 - wealth.r + contract.c;
    const double w_safe = wealth.w0 - contract.z;
    const double loss = total_utility(uspec, w_loss, x, s_nbr);
    const double safe = total_utility(uspec, w_safe, x, s_nbr);
    const double benefit_dx = uspec.gamma / (1.0 + x + uspec.lambda * s_nbr);
    const double loss_dx = -uspec.kappa * wealth_utility_derivative(uspec, w_loss - uspec.kappa * x) + benefit_dx;
    const double safe_dx = -uspec.kappa * wealth_utility_derivative(uspec, w_safe - uspec.kappa * x) + benefit_dx;
    return dp * (loss - safe) + p * loss_dx + (1.0 - p) * safe_dx;
}

simd::EuBatchParams make_batch_params(const UtilitySpec& uspec, const RiskFunction& risk,
                                      const Contract& contract, double s_nbr,
                                      const WealthState& wealth) {
    simd::EuBatchParams p{};
    for (int k = 0; k < 2; ++k) {
        const auto& t = risk.terms()[static_cast<std::size_t>(k)];
        p.w[k] = t.weight;
        p.p0[k] = t.spec.p0;
        p.beta[k] = t.spec.beta;
        p.binv[k] = t.spec.binv;
    }
    p.a = uspec.a;
    p.gamma = uspec.gamma;
    p.kappa = uspec.kappa;
    p.lambda = uspec.lambda;
    p.s_nbr = s_nbr;
    p.wealth_loss = wealth.w0 - wealth.r + contract.c;
    p.wealth_no_loss = wealth.w0 - contract.z;
    return p;
}

PayoffGrid PayoffGrid::standard(double w) {
    PayoffGrid g;
    for (int k = 0; k <= 10; ++k) {
        g.x.push_back(0.5 * k);
        g.s.push_back(0.5 * k);
    }
    g.w = w;
    return g;
}

bool has_decreasing_differences(const Payoff& payoff, const std::vector<double>& xs,
                                const std::vector<double>& ss, double tol) {
    for (double x_hi : xs) {
        for (double x_lo : xs) {
            if (!(x_hi > x_lo)) continue;
            for (double s_hi : ss) {
                for (double s_lo : ss) {
                    if (!(s_hi > s_lo)) continue;
                    const double diff_hi = payoff(x_hi, s_hi) - payoff(x_lo, s_hi);
                    const double diff_lo = payoff(x_hi, s_lo) - payoff(x_lo, s_lo);
                    if (diff_hi > diff_lo + tol) return false;
                }
            }
        }
    }
    return true;
}

bool check_submodularity(const UtilitySpec& spec, const PayoffGrid& grid, double tol) {
    return has_decreasing_differences(
        [&](double x, double s) { return total_utility(spec, grid.w, x, s); }, grid.x, grid.s,
        tol);
}

bool check_positive_externality(const UtilitySpec& spec, const PayoffGrid& grid) {
    for (double x : grid.x) {
        for (double s_hi : grid.s) {
            for (double s_lo : grid.s) {
                if (s_hi >= s_lo &&
                    total_utility(spec, grid.w, x, s_hi) < total_utility(spec, grid.w, x, s_lo)) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace cyberins
