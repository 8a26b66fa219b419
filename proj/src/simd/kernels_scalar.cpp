#include <bit>
#include <cmath>
#include <limits>

#include "relexp/simd/kernels.hpp"

namespace relexp::simd::scalar {

double sum_plog2p(const double* p, std::size_t n) {
    double s = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (p[k] > 0) s += p[k] * std::log2(p[k]);
    return s;
}

double sum_plog2q(const double* p, const double* q, std::size_t n) {
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(p[k] > 0)) continue;
        if (!(q[k] > 0)) return -std::numeric_limits<double>::infinity();
        s += p[k] * std::log2(q[k]);
    }
    return s;
}

void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<std::uint32_t>(std::popcount(words[k] & mask));
}

}  // namespace relexp::simd::scalar
