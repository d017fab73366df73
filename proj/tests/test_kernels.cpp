#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cyberins/simd/eu_kernel.hpp"
#include "cyberins/utility.hpp"
#include "oracles.hpp"

using namespace cyberins;

namespace {

struct Case {
    UtilitySpec u;
    RiskFunction risk;
    Contract k;
    double s;
    WealthState w;
};

std::vector<Case> random_cases(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Case> out;
    for (int i = 0; i < count; ++i) {
        UtilitySpec u{oracle::uniform(rng, 0.05, 2.0), oracle::uniform(rng, 0.0, 2.0),
                      oracle::uniform(rng, 0.1, 1.5), oracle::uniform(rng, 0.0, 1.0)};
        const double w0 = oracle::uniform(rng, 2.0, 30.0);
        const WealthState w{w0, oracle::uniform(rng, 0.1, 0.9) * w0};
        ClassMix mix;
        mix.theta = oracle::uniform(rng, 0.0, 1.0);
        const double beta = oracle::uniform(rng, 0.2, 3.0);
        const double binv = oracle::uniform(rng, 0.0, 2.0);
        mix.hc = {oracle::uniform(rng, 0.5, 0.99), beta, binv};
        mix.lc = {oracle::uniform(rng, 0.01, 0.49), beta, binv};
        const double c = oracle::uniform(rng, 0.0, w.r);
        const Contract k{oracle::uniform(rng, 0.0, w.r - c), c};
        out.push_back({u, blend_alpha(mix), k, oracle::uniform(rng, 0.0, 20.0), w});
    }
    return out;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

}  // namespace

TEST_CASE("scalar kernel is bit-identical to the single-point evaluator") {
    for (const Case& c : random_cases(40, 1)) {
        const auto params = make_batch_params(c.u, c.risk, c.k, c.s, c.w);
        const auto xs = grid(c.risk.binv(), c.risk.binv() + 25.0, 203);
        std::vector<double> out(xs.size());
        simd::expected_utility_batch(params, xs, out, simd::Isa::scalar);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK(out[i] == expected_utility_unchecked(c.u, c.risk, c.k, xs[i], c.s, c.w));
        }
    }
}

TEST_CASE("AVX2 kernel agrees with the scalar reference") {
    if (!simd::isa_available(simd::Isa::avx2)) {
        MESSAGE("AVX2 not available on this CPU; equivalence check skipped");
        return;
    }
    double worst = 0.0;
    for (const Case& c : random_cases(200, 2)) {
        const auto params = make_batch_params(c.u, c.risk, c.k, c.s, c.w);
        // Odd length exercises the scalar tail.
        const auto xs = grid(c.risk.binv(), c.risk.binv() + 40.0, 1001);
        std::vector<double> ref(xs.size()), vec(xs.size());
        simd::expected_utility_batch(params, xs, ref, simd::Isa::scalar);
        simd::expected_utility_batch(params, xs, vec, simd::Isa::avx2);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            // Relative to the largest summand: the sum itself can cancel.
            const double x = xs[i];
            const double scale = std::max(
                {std::abs(ref[i]), std::abs(wealth_utility(c.u, params.wealth_loss - c.u.kappa * x)),
                 std::abs(wealth_utility(c.u, params.wealth_no_loss - c.u.kappa * x)),
                 c.u.gamma * std::log(1.0 + x + c.u.lambda * c.s), 1.0});
            worst = std::max(worst, std::abs(vec[i] - ref[i]) / scale);
        }
    }
    MESSAGE("largest scaled difference: " << worst);
    CHECK(worst <= 5e-14);
}

TEST_CASE("dispatch") {
    CHECK(simd::isa_available(simd::Isa::scalar));
    CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
    CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");

    const simd::Isa before = simd::active_isa();
    simd::force_isa(simd::Isa::scalar);
    CHECK(simd::active_isa() == simd::Isa::scalar);

    const Case c = random_cases(1, 3).front();
    const auto params = make_batch_params(c.u, c.risk, c.k, c.s, c.w);
    const auto xs = grid(0.0, 10.0, 9);
    std::vector<double> a(xs.size()), b(xs.size());
    simd::expected_utility_batch(params, xs, a);
    simd::expected_utility_batch(params, xs, b, simd::Isa::scalar);
    CHECK(a == b);

    std::vector<double> short_out(3);
    CHECK_THROWS_AS(simd::expected_utility_batch(params, xs, short_out), std::invalid_argument);

    if (!simd::isa_available(simd::Isa::avx2)) {
        CHECK_THROWS_AS(simd::force_isa(simd::Isa::avx2), std::invalid_argument);
    }
    simd::force_isa(before);
}
