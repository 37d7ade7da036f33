#include "dtsnn/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace dtsnn::kernels {
namespace {

// AVX2 has no 64-bit arithmetic shift: shift logically, then sign-extend
// with the xor/sub trick against the shifted sign bit.
inline __m256i sra_epi64(__m256i x, __m128i count, __m256i sign_bit) {
    const __m256i t = _mm256_srl_epi64(x, count);
    return _mm256_sub_epi64(_mm256_xor_si256(t, sign_bit), sign_bit);
}

void accumulate_scaled(std::span<std::int64_t> acc, std::span<const std::int32_t> column, std::int64_t count) {
    const std::size_t n = acc.size();
    std::size_t j = 0;
    if (count >= std::numeric_limits<std::int32_t>::min() && count <= std::numeric_limits<std::int32_t>::max()) {
        // _mm256_mul_epi32 multiplies the signed low halves of each 64-bit lane.
        const __m256i c = _mm256_set1_epi64x(count);
        for (; j + 4 <= n; j += 4) {
            const __m256i w = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(column.data() + j)));
            __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc.data() + j));
            a = _mm256_add_epi64(a, _mm256_mul_epi32(w, c));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc.data() + j), a);
        }
    }
    for (; j < n; ++j) acc[j] += count * column[j];
}

std::size_t decay_add_scan(std::span<std::int64_t> pot, std::span<std::int64_t> acc, unsigned shift,
                           std::int64_t lo, std::int64_t hi, std::span<std::uint32_t> outside) {
    const std::size_t n = pot.size();
    const __m128i count = _mm_cvtsi32_si128(static_cast<int>(shift));
    const __m256i sign_bit = _mm256_srl_epi64(_mm256_set1_epi64x(std::numeric_limits<std::int64_t>::min()), count);
    const __m256i hi_m1 = _mm256_set1_epi64x(hi - 1);
    const __m256i lo_p1 = _mm256_set1_epi64x(lo + 1);
    const __m256i zero = _mm256_setzero_si256();

    std::size_t n_out = 0;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        auto* pp = reinterpret_cast<__m256i*>(pot.data() + j);
        auto* ap = reinterpret_cast<__m256i*>(acc.data() + j);
        const __m256i p = _mm256_add_epi64(sra_epi64(_mm256_loadu_si256(pp), count, sign_bit), _mm256_loadu_si256(ap));
        _mm256_storeu_si256(pp, p);
        _mm256_storeu_si256(ap, zero);
        const __m256i out = _mm256_or_si256(_mm256_cmpgt_epi64(p, hi_m1), _mm256_cmpgt_epi64(lo_p1, p));
        unsigned mask = static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(out)));
        while (mask) {
            outside[n_out++] = static_cast<std::uint32_t>(j + static_cast<unsigned>(__builtin_ctz(mask)));
            mask &= mask - 1;
        }
    }
    for (; j < n; ++j) {
        const std::int64_t p = (pot[j] >> shift) + acc[j];
        pot[j] = p;
        acc[j] = 0;
        if (p >= hi || p <= lo) outside[n_out++] = static_cast<std::uint32_t>(j);
    }
    return n_out;
}

constexpr KernelSet kAvx2{"avx2", accumulate_scaled, decay_add_scan};

} // namespace

const KernelSet& avx2() { return kAvx2; }

} // namespace dtsnn::kernels
