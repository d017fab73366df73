#include "cyberins/simd/eu_kernel.hpp"
#include "vecmath_avx2.hpp"

namespace cyberins::simd::detail {

void eu_batch_avx2(const EuBatchParams& p, const double* xs, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d a = _mm256_set1_pd(p.a);
    const __m256d neg_a = _mm256_set1_pd(-p.a);
    const __m256d kappa = _mm256_set1_pd(p.kappa);
    const __m256d gamma = _mm256_set1_pd(p.gamma);
    const __m256d ls = _mm256_set1_pd(p.lambda * p.s_nbr);
    const __m256d wl = _mm256_set1_pd(p.wealth_loss);
    const __m256d wn = _mm256_set1_pd(p.wealth_no_loss);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs + i);
        __m256d prob = _mm256_setzero_pd();
        for (int k = 0; k < 2; ++k) {
            const __m256d arg = _mm256_mul_pd(_mm256_set1_pd(-p.beta[k]),
                                              _mm256_sub_pd(x, _mm256_set1_pd(p.binv[k])));
            const __m256d term = _mm256_mul_pd(_mm256_set1_pd(p.p0[k]), avx2::exp(arg));
            prob = _mm256_add_pd(prob, _mm256_mul_pd(_mm256_set1_pd(p.w[k]), term));
        }
        const __m256d benefit =
            _mm256_mul_pd(gamma, avx2::log(_mm256_add_pd(_mm256_add_pd(one, x), ls)));
        const __m256d e_loss =
            avx2::exp(_mm256_mul_pd(neg_a, _mm256_sub_pd(wl, _mm256_mul_pd(kappa, x))));
        const __m256d e_safe =
            avx2::exp(_mm256_mul_pd(neg_a, _mm256_sub_pd(wn, _mm256_mul_pd(kappa, x))));
        const __m256d u_loss = _mm256_div_pd(_mm256_sub_pd(one, e_loss), a);
        const __m256d u_safe = _mm256_div_pd(_mm256_sub_pd(one, e_safe), a);
        const __m256d eu =
            _mm256_add_pd(_mm256_mul_pd(prob, _mm256_add_pd(u_loss, benefit)),
                          _mm256_mul_pd(_mm256_sub_pd(one, prob), _mm256_add_pd(u_safe, benefit)));
        _mm256_storeu_pd(out + i, eu);
    }
    if (i < n) eu_batch_scalar(p, xs + i, out + i, n - i);
}

}  // namespace cyberins::simd::detail
