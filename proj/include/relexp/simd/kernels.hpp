#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the public entry points pick one at runtime.

#include <cstddef>
#include <cstdint>

namespace relexp::simd {

enum class Isa { scalar, avx2 };

// Best instruction set supported by this CPU and this build.
Isa detected_isa();
// Instruction set used by the dispatching entry points.
Isa active_isa();
// Force an instruction set (falls back to scalar if unsupported).
void set_isa(Isa isa);
const char* isa_name(Isa isa);

// sum_k p[k] * log2(p[k]), with 0 log 0 = 0. Inputs must be nonnegative.
double sum_plog2p(const double* p, std::size_t n);
// sum_k p[k] * log2(q[k]); terms with p[k] == 0 are skipped and a positive
// p[k] against q[k] == 0 gives -inf.
double sum_plog2q(const double* p, const double* q, std::size_t n);
// out[k] = popcount(words[k] & mask)
void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out);

namespace scalar {
double sum_plog2p(const double* p, std::size_t n);
double sum_plog2q(const double* p, const double* q, std::size_t n);
void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out);
}  // namespace scalar

namespace avx2 {
bool compiled();
double sum_plog2p(const double* p, std::size_t n);
double sum_plog2q(const double* p, const double* q, std::size_t n);
void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out);
}  // namespace avx2

}  // namespace relexp::simd
