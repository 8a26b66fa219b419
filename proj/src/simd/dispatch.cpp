#include <atomic>
#include <cstdlib>
#include <cstring>

#include "relexp/simd/kernels.hpp"

namespace relexp::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    Isa best = detected_isa();
    if (const char* env = std::getenv("RELEXP_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return best;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

Isa detected_isa() {
    static const Isa isa = (avx2::compiled() && cpu_has_avx2()) ? Isa::avx2 : Isa::scalar;
    return isa;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double sum_plog2p(const double* p, std::size_t n) {
    return active_isa() == Isa::avx2 ? avx2::sum_plog2p(p, n) : scalar::sum_plog2p(p, n);
}

double sum_plog2q(const double* p, const double* q, std::size_t n) {
    return active_isa() == Isa::avx2 ? avx2::sum_plog2q(p, q, n) : scalar::sum_plog2q(p, q, n);
}

void popcount_and(const std::uint64_t* words, std::size_t n, std::uint64_t mask, std::uint32_t* out) {
    if (active_isa() == Isa::avx2)
        avx2::popcount_and(words, n, mask, out);
    else
        scalar::popcount_and(words, n, mask, out);
}

}  // namespace relexp::simd
