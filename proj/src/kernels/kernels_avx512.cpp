#include "dtsnn/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace dtsnn::kernels {
namespace {

void accumulate_scaled(std::span<std::int64_t> acc, std::span<const std::int32_t> column, std::int64_t count) {
    const std::size_t n = acc.size();
    std::size_t j = 0;
    if (count >= std::numeric_limits<std::int32_t>::min() && count <= std::numeric_limits<std::int32_t>::max()) {
        const __m512i c = _mm512_set1_epi64(count);
        for (; j + 8 <= n; j += 8) {
            const __m512i w = _mm512_cvtepi32_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(column.data() + j)));
            const __m512i a = _mm512_loadu_si512(acc.data() + j);
            _mm512_storeu_si512(acc.data() + j, _mm512_add_epi64(a, _mm512_mul_epi32(w, c)));
        }
    }
    for (; j < n; ++j) acc[j] += count * column[j];
}

std::size_t decay_add_scan(std::span<std::int64_t> pot, std::span<std::int64_t> acc, unsigned shift,
                           std::int64_t lo, std::int64_t hi, std::span<std::uint32_t> outside) {
    const std::size_t n = pot.size();
    const __m128i count = _mm_cvtsi32_si128(static_cast<int>(shift));
    const __m512i hi_v = _mm512_set1_epi64(hi);
    const __m512i lo_v = _mm512_set1_epi64(lo);
    const __m512i zero = _mm512_setzero_si512();

    std::size_t n_out = 0;
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        const __m512i p = _mm512_add_epi64(_mm512_sra_epi64(_mm512_loadu_si512(pot.data() + j), count),
                                           _mm512_loadu_si512(acc.data() + j));
        _mm512_storeu_si512(pot.data() + j, p);
        _mm512_storeu_si512(acc.data() + j, zero);
        unsigned mask = static_cast<unsigned>(_mm512_cmpge_epi64_mask(p, hi_v) | _mm512_cmple_epi64_mask(p, lo_v));
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

constexpr KernelSet kAvx512{"avx512", accumulate_scaled, decay_add_scan};

} // namespace

const KernelSet& avx512() { return kAvx512; }

} // namespace dtsnn::kernels
