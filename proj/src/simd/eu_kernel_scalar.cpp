#include "cyberins/simd/eu_kernel.hpp"

#include <cmath>

namespace cyberins::simd::detail {

// Same expression order as expected_utility() in utility.cpp, so the scalar
// batch and the single-point evaluator agree bit for bit.
void eu_batch_scalar(const EuBatchParams& p, const double* xs, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        double prob = 0.0;
        for (int k = 0; k < 2; ++k) {
            prob += p.w[k] * (p.p0[k] * std::exp(-p.beta[k] * (x - p.binv[k])));
        }
        const double benefit = p.gamma * std::log(1.0 + x + p.lambda * p.s_nbr);
        const double u_loss = (1.0 - std::exp(-p.a * (p.wealth_loss - p.kappa * x))) / p.a;
        const double u_safe = (1.0 - std::exp(-p.a * (p.wealth_no_loss - p.kappa * x))) / p.a;
        out[i] = prob * (u_loss + benefit) + (1.0 - prob) * (u_safe + benefit);
    }
}

}  // namespace cyberins::simd::detail
