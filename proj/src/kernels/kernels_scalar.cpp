#include "dtsnn/kernels.hpp"

namespace dtsnn::kernels {
namespace {

void accumulate_scaled(std::span<std::int64_t> acc, std::span<const std::int32_t> column, std::int64_t count) {
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += count * column[j];
}

std::size_t decay_add_scan(std::span<std::int64_t> pot, std::span<std::int64_t> acc, unsigned shift,
                           std::int64_t lo, std::int64_t hi, std::span<std::uint32_t> outside) {
    std::size_t n_out = 0;
    for (std::size_t j = 0; j < pot.size(); ++j) {
        const std::int64_t p = (pot[j] >> shift) + acc[j];
        pot[j] = p;
        acc[j] = 0;
        if (p >= hi || p <= lo) outside[n_out++] = static_cast<std::uint32_t>(j);
    }
    return n_out;
}

constexpr KernelSet kScalar{"scalar", accumulate_scaled, decay_add_scan};

} // namespace

const KernelSet& scalar() { return kScalar; }

} // namespace dtsnn::kernels
