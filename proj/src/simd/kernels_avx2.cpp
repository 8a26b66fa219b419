#include <cfloat>
#include <cmath>
#include <limits>

#include "relexp/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define RELEXP_HAVE_AVX2 1
#endif

namespace relexp::simd::avx2 {

#ifdef RELEXP_HAVE_AVX2

namespace {

// log2 of positive normal doubles. The mantissa is folded into
// [sqrt(1/2), sqrt(2)] and log(m) = 2 atanh((m-1)/(m+1)) is summed as an odd
// series; ten terms reach full double precision on that interval.
inline __m256d log2_pd(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    __m256i e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_epi64(e, _mm256_and_si256(_mm256_castpd_si256(big), _mm256_set1_epi64x(1)));

    // int64 -> double for small magnitudes
    const __m256i magic_i = _mm256_set1_epi64x(0x4338000000000000LL);
    const __m256d magic_d = _mm256_castsi256_pd(magic_i);
    const __m256d ed = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(e, magic_i)), magic_d);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d poly = _mm256_set1_pd(1.0 / 19.0);
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 17.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 15.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 13.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 11.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 9.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 7.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 5.0));
    poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 3.0));
    poly = _mm256_fmadd_pd(poly, z, one);
    const __m256d ln_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);
    return _mm256_fmadd_pd(ln_m, _mm256_set1_pd(1.4426950408889634), ed);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

bool compiled() { return true; }

double sum_plog2p(const double* p, std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(DBL_MIN);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d v = _mm256_loadu_pd(p + k);
        __m256d live = _mm256_cmp_pd(v, tiny, _CMP_GE_OQ);
        __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), v, live);
        __m256d term = _mm256_mul_pd(safe, log2_pd(safe));
        acc = _mm256_add_pd(acc, _mm256_and_pd(term, live));
    }
    double s = hsum(acc);
    for (; k < n; ++k)
        if (p[k] > 0) s += p[k] * std::log2(p[k]);
    return s;
}

double sum_plog2q(const double* p, const double* q, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d tiny = _mm256_set1_pd(DBL_MIN);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d vp = _mm256_loadu_pd(p + k);
        __m256d vq = _mm256_loadu_pd(q + k);
        __m256d live = _mm256_cmp_pd(vp, zero, _CMP_GT_OQ);
        __m256d lowq = _mm256_cmp_pd(vq, tiny, _CMP_LT_OQ);
        if (_mm256_movemask_pd(_mm256_and_pd(live, lowq)) != 0) return scalar::sum_plog2q(p, q, n);
        __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), vq, live);
        __m256d term = _mm256_mul_pd(vp, log2_pd(safe));
        acc = _mm256_add_pd(acc, _mm256_and_pd(term, live));
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        if (!(p[k] > 0)) continue;
        if (!(q[k] > 0)) return -std::numeric_limits<double>::infinity();
        s += p[k] * std::log2(q[k]);
    }
    return s;
}

void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low4 = _mm256_set1_epi8(0x0F);
    const __m256i vmask = _mm256_set1_epi64x(static_cast<long long>(mask));
    std::size_t k = 0;
    alignas(32) std::uint64_t tmp[4];
    for (; k + 4 <= n; k += 4) {
        __m256i v = _mm256_and_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + k)), vmask);
        __m256i lo = _mm256_and_si256(v, low4);
        __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low4);
        __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
        __m256i sums = _mm256_sad_epu8(cnt, _mm256_setzero_si256());
        _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), sums);
        for (int j = 0; j < 4; ++j) out[k + static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(tmp[j]);
    }
    if (k < n) scalar::popcount_and(words + k, n - k, mask, out + k);
}

#else

bool compiled() { return false; }
double sum_plog2p(const double* p, std::size_t n) { return scalar::sum_plog2p(p, n); }
double sum_plog2q(const double* p, const double* q, std::size_t n) { return scalar::sum_plog2q(p, q, n); }
void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out) {
    scalar::popcount_and(words, n, mask, out);
}

#endif

}  // namespace relexp::simd::avx2
