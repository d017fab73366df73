#include "cyberins/simd/eu_kernel.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cyberins::simd {

namespace {

Isa probe_cpu() noexcept {
#if defined(CYBERINS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

Isa initial_isa() noexcept {
    const Isa best = probe_cpu();
    if (const char* env = std::getenv("CYBERINS_ISA")) {
        if (std::string(env) == "scalar") return Isa::scalar;
    }
    return best;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa detected_isa() noexcept {
    static const Isa isa = probe_cpu();
    return isa;
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || detected_isa() == Isa::avx2;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("ISA " + std::string(isa_name(isa)) +
                                    " is not available on this CPU");
    }
    active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

void expected_utility_batch(const EuBatchParams& p, std::span<const double> xs,
                            std::span<double> out, Isa isa) {
    if (xs.size() != out.size()) {
        throw std::invalid_argument("expected_utility_batch: size mismatch");
    }
    switch (isa) {
#if defined(CYBERINS_HAVE_AVX2)
        case Isa::avx2:
            if (detected_isa() == Isa::avx2) {
                detail::eu_batch_avx2(p, xs.data(), out.data(), xs.size());
                return;
            }
            break;
#endif
        default:
            break;
    }
    detail::eu_batch_scalar(p, xs.data(), out.data(), xs.size());
}

void expected_utility_batch(const EuBatchParams& p, std::span<const double> xs,
                            std::span<double> out) {
    expected_utility_batch(p, xs, out, active_isa());
}

}  // namespace cyberins::simd
