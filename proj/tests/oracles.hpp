/**
 * @file oracles.hpp
 * @brief Brute-force reference computations used by the tests. Everything
 * here is written from the model formulas directly and shares no code with
 * the library beyond the plain parameter structs.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "cyberins/contract_terms.hpp"
#include "cyberins/risk.hpp"
#include "cyberins/utility.hpp"

namespace oracle {

using cyberins::ClassMix;
using cyberins::Contract;
using cyberins::RiskClassSpec;
using cyberins::UtilitySpec;
using cyberins::WealthState;

using ProbFn = std::function<double(double)>;

inline ProbFn class_probability(const RiskClassSpec& s) {
    return [s](double x) { return s.p0 * std::exp(-s.beta * (x - s.binv)); };
}

inline ProbFn blended_probability(const ClassMix& m) {
    return [m](double x) {
        return m.theta * m.hc.p0 * std::exp(-m.hc.beta * (x - m.hc.binv)) +
               (1.0 - m.theta) * m.lc.p0 * std::exp(-m.lc.beta * (x - m.lc.binv));
    };
}

/// U(w, x, s) = (1 - e^{-a (w - kappa x)}) / a + gamma ln(1 + x + lambda s).
inline double utility(const UtilitySpec& u, double w, double x, double s) {
    const double net = w - u.kappa * x;
    return -std::expm1(-u.a * net) / u.a + u.gamma * std::log1p(x + u.lambda * s);
}

/// EU = p U(w0 - r + c) + (1 - p) U(w0 - z).
inline double expected_utility(const UtilitySpec& u, const ProbFn& p, const Contract& k, double x,
                               double s, const WealthState& w) {
    const double q = p(x);
    return q * utility(u, w.w0 - w.r + k.c, x, s) + (1.0 - q) * utility(u, w.w0 - k.z, x, s);
}

struct GridMax {
    double x = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

/// Exhaustive scan of f on lo, lo + step, ..., hi; ties keep the smaller x.
inline GridMax grid_max(const std::function<double(double)>& f, double lo, double hi, double step) {
    GridMax best;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        const double v = f(x);
        if (v > best.value) best = {x, v};
    }
    const double v = f(hi);
    if (v > best.value) best = {hi, v};
    return best;
}

/// Best response by exhaustive grid at the given step over [binv, x_max].
inline GridMax grid_best_response(const UtilitySpec& u, const ProbFn& p, const Contract& k,
                                  double s, const WealthState& w, double binv = 0.0,
                                  double x_max = 20.0, double step = 1e-3) {
    return grid_max([&](double x) { return expected_utility(u, p, k, x, s, w); }, binv, x_max, step);
}

/// Two-level grid: step 1e-2 over the interval, then step 1e-4 around the winner.
inline GridMax nested_best_response(const UtilitySpec& u, const ProbFn& p, const Contract& k,
                                    double s, const WealthState& w, double binv = 0.0,
                                    double x_max = 20.0) {
    auto f = [&](double x) { return expected_utility(u, p, k, x, s, w); };
    const GridMax coarse = grid_max(f, binv, x_max, 1e-2);
    return grid_max(f, std::max(binv, coarse.x - 1e-2), std::min(x_max, coarse.x + 1e-2), 1e-4);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_difference(const std::function<double(double)>& f, double x, double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Literal (z, c) grid over the admissible triangle at step r / steps, with
/// nested grid best responses; monopoly profit of a single pooled type
/// subject to participation.
struct ContractGridResult {
    Contract best{};
    double profit = -std::numeric_limits<double>::infinity();
    bool found = false;
};

inline ContractGridResult pooled_contract_grid(const UtilitySpec& u, const ProbFn& p,
                                               const WealthState& w, double s, int steps) {
    ContractGridResult out;
    const double eu_null = nested_best_response(u, p, {0.0, 0.0}, s, w).value;
    const double h = w.r / steps;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
            const Contract k{j * h, i * h};
            if (!(k.z < w.w0)) continue;
            const GridMax br = nested_best_response(u, p, k, s, w);
            if (br.value < eu_null) continue;
            const double q = p(br.x);
            const double profit = (1.0 - q) * k.z - q * k.c;
            if (!out.found || profit > out.profit) out = {k, profit, true};
        }
    }
    return out;
}

/// Coverage grid at step r / steps with the premium raised by bisection to
/// the binding participation constraint (z resolved below the grid spacing).
inline ContractGridResult pooled_lifted_grid(const UtilitySpec& u, const ProbFn& p,
                                             const WealthState& w, double s, int steps) {
    ContractGridResult out;
    const double eu_null = nested_best_response(u, p, {0.0, 0.0}, s, w).value;
    const double h = w.r / steps;
    for (int i = 0; i <= steps; ++i) {
        const double c = i * h;
        auto ok = [&](double z) { return nested_best_response(u, p, {z, c}, s, w).value >= eu_null; };
        if (!ok(0.0)) continue;
        double lo = 0.0;
        double hi = w.r - c;
        if (ok(hi)) {
            lo = hi;
        } else {
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + hi);
                (ok(mid) ? lo : hi) = mid;
            }
        }
        const Contract k{lo, c};
        const GridMax br = nested_best_response(u, p, k, s, w);
        const double q = p(br.x);
        const double profit = (1.0 - q) * k.z - q * k.c;
        if (!out.found || profit > out.profit) out = {k, profit, true};
    }
    return out;
}

/// Menu grid over (z_LC, c_LC, z_HC, c_HC) at step r / steps: monopoly
/// profit subject to both participation and both incentive constraints.
struct MenuGridResult {
    Contract lc{}, hc{};
    double profit = -std::numeric_limits<double>::infinity();
    bool found = false;
};

inline MenuGridResult menu_grid(const UtilitySpec& u, const ClassMix& mix, const WealthState& w,
                                double s, int steps) {
    const ProbFn p_hc = class_probability(mix.hc);
    const ProbFn p_lc = class_probability(mix.lc);
    const double null_hc = nested_best_response(u, p_hc, {0, 0}, s, w, mix.hc.binv).value;
    const double null_lc = nested_best_response(u, p_lc, {0, 0}, s, w, mix.lc.binv).value;
    struct Cell {
        Contract k;
        GridMax hc, lc;
    };
    std::vector<Cell> cells;
    const double h = w.r / steps;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
            const Contract k{j * h, i * h};
            cells.push_back({k, nested_best_response(u, p_hc, k, s, w, mix.hc.binv),
                             nested_best_response(u, p_lc, k, s, w, mix.lc.binv)});
        }
    }
    MenuGridResult out;
    for (const Cell& L : cells) {
        if (L.lc.value < null_lc) continue;
        const double q_l = p_lc(L.lc.x);
        const double profit_l = (1.0 - q_l) * L.k.z - q_l * L.k.c;
        for (const Cell& H : cells) {
            if (H.hc.value < null_hc) continue;
            if (H.hc.value < L.hc.value || L.lc.value < H.lc.value) continue;
            const double q_h = p_hc(H.hc.x);
            const double profit =
                mix.theta * ((1.0 - q_h) * H.k.z - q_h * H.k.c) + (1.0 - mix.theta) * profit_l;
            if (!out.found || profit > out.profit) out = {L.k, H.k, profit, true};
        }
    }
    return out;
}

/// Value of information with every best response from the nested grid.
inline double value_of_information(const UtilitySpec& u, const ClassMix& mix, const WealthState& w,
                                   double s, const Contract& lc, const Contract& hc) {
    const double eu_h = nested_best_response(u, class_probability(mix.hc), hc, s, w).value;
    const double eu_l = nested_best_response(u, class_probability(mix.lc), lc, s, w).value;
    const double eu_a = nested_best_response(u, blended_probability(mix), lc, s, w).value;
    return mix.theta * eu_h + (1.0 - mix.theta) * eu_l - eu_a;
}

/// Uniform double in [lo, hi) from a 64-bit engine, identical across platforms.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace oracle
