#pragma once

// Data-parallel inner loops of a layer update, vectorized across the neurons
// of one layer. Every variant must produce bit-identical results to the
// scalar reference; selection happens once at runtime from CPU features.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dtsnn::kernels {

struct KernelSet {
    std::string_view name;

    /// acc[j] += count * column[j]
    void (*accumulate_scaled)(std::span<std::int64_t> acc, std::span<const std::int32_t> column,
                              std::int64_t count);

    /// pot[j] = (pot[j] >> shift) + acc[j]; acc[j] = 0. Writes the indices j
    /// with pot[j] >= hi or pot[j] <= lo into `outside` (ascending) and
    /// returns how many were written. `outside` must hold pot.size() entries.
    std::size_t (*decay_add_scan)(std::span<std::int64_t> pot, std::span<std::int64_t> acc,
                                  unsigned shift, std::int64_t lo, std::int64_t hi,
                                  std::span<std::uint32_t> outside);
};

const KernelSet& scalar();

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<const KernelSet*> available();

/// The variant used by new layers. Defaults to the widest supported one;
/// the DTSNN_KERNELS environment variable (e.g. "scalar") overrides it.
const KernelSet& active();

/// Forces a variant by name; throws std::invalid_argument if unavailable.
void select(std::string_view name);

#if defined(DTSNN_HAVE_X86_KERNELS)
const KernelSet& avx2();
const KernelSet& avx512();
#endif

} // namespace dtsnn::kernels
