// AVX2/FMA double-precision exp and log, Cephes-style range reduction with
// rational approximations. Accurate to about 1 ulp on the ranges used here
// (exp arguments within [-708, 709], log arguments positive and normal).
// Only include from translation units compiled with -mavx2 -mfma.

#pragma once

#include <immintrin.h>

#include <cstdint>

namespace cyberins::simd::avx2 {

inline __m256d polevl(__m256d x, const double* c, int degree) {
    __m256d acc = _mm256_set1_pd(c[0]);
    for (int i = 1; i <= degree; ++i) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
    return acc;
}

// Leading coefficient 1 implied.
inline __m256d p1evl(__m256d x, const double* c, int degree) {
    __m256d acc = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
    for (int i = 1; i < degree; ++i) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
    return acc;
}

// Exact for integral |v| < 2^51.
inline __m256i integral_to_i64(__m256d v) {
    const __m256d magic = _mm256_set1_pd(0x1.8p52);
    return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(v, magic)),
                            _mm256_castpd_si256(magic));
}

inline __m256d i64_to_double(__m256i v) {
    const __m256d magic = _mm256_set1_pd(0x1.8p52);
    return _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_add_epi64(v, _mm256_castpd_si256(magic))), magic);
}

inline __m256d exp(__m256d x) {
    static constexpr double P[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                   9.99999999999999999910E-1};
    static constexpr double Q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                   2.27265548208155028766E-1, 2.00000000000000000009E0};
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);

    x = _mm256_min_pd(_mm256_max_pd(x, _mm256_set1_pd(-708.0)), _mm256_set1_pd(709.0));
    const __m256d fx =
        _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    x = _mm256_fnmadd_pd(fx, c1, x);
    x = _mm256_fnmadd_pd(fx, c2, x);

    const __m256d xx = _mm256_mul_pd(x, x);
    const __m256d px = _mm256_mul_pd(x, polevl(xx, P, 2));
    const __m256d qx = polevl(xx, Q, 3);
    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

    __m256i n = integral_to_i64(fx);
    n = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(r, _mm256_castsi256_pd(n));
}

inline __m256d log(__m256d x) {
    static constexpr double P[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                                   4.70579119878881725854E0,  1.44989225341610930846E1,
                                   1.79368678507819816313E1,  7.70838733755885391666E0};
    static constexpr double Q[] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                                   8.29875266912776603211E1, 7.11544750618563894466E1,
                                   2.31251620126765340583E1};
    const __m256i bits = _mm256_castpd_si256(x);
    // frexp: x = m * 2^e with m in [0.5, 1).
    __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1022));
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                        _mm256_set1_epi64x(0x3FE0000000000000LL)));

    const __m256d below = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_epi64(e, _mm256_and_si256(_mm256_castpd_si256(below), _mm256_set1_epi64x(1)));
    // m < sqrt(1/2): t = 2m - 1, else t = m - 1.
    const __m256d t = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(below, m)),
                                    _mm256_set1_pd(1.0));
    const __m256d fe = i64_to_double(e);

    const __m256d z = _mm256_mul_pd(t, t);
    __m256d y = _mm256_mul_pd(t, _mm256_div_pd(_mm256_mul_pd(z, polevl(t, P, 5)), p1evl(t, Q, 5)));
    y = _mm256_fmadd_pd(fe, _mm256_set1_pd(-2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
    __m256d r = _mm256_add_pd(t, y);
    return _mm256_fmadd_pd(fe, _mm256_set1_pd(0.693359375), r);
}

}  // namespace cyberins::simd::avx2
