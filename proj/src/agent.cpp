#include "cyberins/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cyberins {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1 / golden ratio

void require_finite(double v) {
    if (!std::isfinite(v)) {
        throw std::runtime_error("best_response: non-finite expected utility; check parameters");
    }
}

}  // namespace

BestResponse best_response(const UtilitySpec& uspec, const RiskFunction& risk,
                           const Contract& contract, double s_nbr, const WealthState& wealth,
                           const AgentOptions& opts) {
    const double lo_bound = risk.binv();
    if (!(opts.x_max > lo_bound)) {
        throw std::invalid_argument("best_response: x_max must exceed binv");
    }
    if (opts.grid_points < 3) {
        throw std::invalid_argument("best_response: need at least 3 grid points");
    }
    if (auto field = contract.invalid_field(wealth); !field.empty()) {
        throw std::invalid_argument("best_response: inadmissible contract field " + field);
    }
    if (!(s_nbr >= 0.0)) {
        throw std::invalid_argument("best_response: negative neighbor investment");
    }

    const auto n = static_cast<std::size_t>(opts.grid_points);
    thread_local std::vector<double> xs;
    thread_local std::vector<double> values;
    xs.resize(n);
    values.resize(n);
    const double step = (opts.x_max - lo_bound) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) xs[k] = lo_bound + step * static_cast<double>(k);
    xs[n - 1] = opts.x_max;

    const auto params = make_batch_params(uspec, risk, contract, s_nbr, wealth);
    simd::expected_utility_batch(params, xs, values);

    std::size_t best = 0;
    for (std::size_t k = 0; k < n; ++k) {
        require_finite(values[k]);
        if (values[k] > values[best]) best = k;
    }

    auto eu = [&](double x) {
        const double v = expected_utility_unchecked(uspec, risk, contract, x, s_nbr, wealth);
        require_finite(v);
        return v;
    };

    double best_x = xs[best];
    double best_eu = eu(best_x);
    auto consider = [&](double x, double v) {
        if (v > best_eu || (v == best_eu && x < best_x)) {
            best_x = x;
            best_eu = v;
        }
    };

    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[best + 1 == n ? n - 1 : best + 1];
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = eu(c);
    double fd = eu(d);
    consider(c, fc);
    consider(d, fd);
    int iterations = 0;
    while (b - a > opts.x_tol && iterations < 200) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = eu(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = eu(d);
            consider(d, fd);
        }
        ++iterations;
    }

    // The objective is flat near an interior maximum, so the golden section
    // only pins x to about sqrt(eps). A sign change of dEU/dx locates it to
    // full precision.
    auto dx = [&](double x) {
        return expected_utility_dx(uspec, risk, contract, x, s_nbr, wealth);
    };
    double lo = xs[best == 0 ? 0 : best - 1];
    double hi = xs[best + 1 == n ? n - 1 : best + 1];
    if (dx(lo) > 0.0 && dx(hi) < 0.0) {
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (!(mid > lo && mid < hi)) break;
            if (dx(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double root = std::abs(dx(lo)) <= std::abs(dx(hi)) ? lo : hi;
        const double v = eu(root);
        if (v >= best_eu - 4.0 * std::numeric_limits<double>::epsilon() * std::abs(best_eu)) {
            best_x = root;
            best_eu = v;
        }
    }

    BestResponse out;
    out.x_opt = best_x;
    out.eu_opt = best_eu;
    out.foc_residual = expected_utility_dx(uspec, risk, contract, best_x, s_nbr, wealth);
    out.converged = b - a <= opts.x_tol;
    return out;
}

BestResponse baseline_investment(const UtilitySpec& uspec, const RiskFunction& risk,
                                 double s_nbr, const WealthState& wealth,
                                 const AgentOptions& opts) {
    return best_response(uspec, risk, kNullContract, s_nbr, wealth, opts);
}

double foc_residual(const UtilitySpec& uspec, const RiskFunction& risk,
                    const Contract& contract, double x, double s_nbr,
                    const WealthState& wealth) {
    return expected_utility_dx(uspec, risk, contract, x, s_nbr, wealth);
}

}  // namespace cyberins
