/**
 * @file eu_kernel.hpp
 * @brief Batched expected-utility evaluation over an investment grid.
 *
 * The scalar kernel is the reference; the AVX2 kernel must agree with it to
 * within a few ulps and is only selected when the CPU reports AVX2 and FMA.
 * Set CYBERINS_ISA=scalar in the environment to force the reference path.
 */

#pragma once

#include <span>
#include <string_view>

namespace cyberins::simd {

enum class Isa { scalar, avx2 };

/// Flattened inputs of one expected-utility evaluation; only x varies per lane.
struct EuBatchParams {
    // Loss probability: sum_k w_k * p0_k * exp(-beta_k * (x - binv_k)).
    double w[2];
    double p0[2];
    double beta[2];
    double binv[2];
    // Utility.
    double a;       ///< CARA coefficient
    double gamma;   ///< security benefit weight
    double kappa;   ///< investment cost rate
    double lambda;  ///< externality weight
    double s_nbr;   ///< aggregate neighbor investment
    double wealth_loss;     ///< w0 - r + c
    double wealth_no_loss;  ///< w0 - z
};

/// out[i] = EU(xs[i]); xs and out must have equal length.
void expected_utility_batch(const EuBatchParams& p, std::span<const double> xs,
                            std::span<double> out, Isa isa);
void expected_utility_batch(const EuBatchParams& p, std::span<const double> xs,
                            std::span<double> out);

/// Best ISA the running CPU supports (ignores any override).
Isa detected_isa() noexcept;
/// ISA used by the two-argument overload.
Isa active_isa() noexcept;
void force_isa(Isa isa);
bool isa_available(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

namespace detail {
void eu_batch_scalar(const EuBatchParams& p, const double* xs, double* out, std::size_t n);
#if defined(CYBERINS_HAVE_AVX2)
void eu_batch_avx2(const EuBatchParams& p, const double* xs, double* out, std::size_t n);
#endif
}  // namespace detail

}  // namespace cyberins::simd
