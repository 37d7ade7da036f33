#pragma once

// Symmetric fixed-point quantization with a per-layer power-of-two scale.
// A weight w becomes round_half_away(w * s), saturated to
// [-(2^(bits-1)-1), 2^(bits-1)-1]; thresholds are scaled by the same s so a
// float threshold of 1.0 becomes exactly s.

#include <cstdint>
#include <span>
#include <vector>

#include "dtsnn/network.hpp"

namespace dtsnn {

inline constexpr int kDefaultWeightBits = 8;
inline constexpr int kMinWeightBits = 2;
inline constexpr int kMaxWeightBits = 16;
/// Upper bound on the scale so scaled thresholds stay far from int64 limits.
inline constexpr std::int64_t kMaxWeightScale = std::int64_t{1} << 32;

struct QuantScheme {
    int bits = kDefaultWeightBits;
    std::int64_t scale = 1;

    std::int32_t max_level() const { return (std::int32_t{1} << (bits - 1)) - 1; }
};

struct QuantizedMatrix {
    std::vector<std::int32_t> values;
    QuantScheme scheme;
};

/// Largest power of two s in [1, kMaxWeightScale] with max_abs * s <= 2^(bits-1)-1.
std::int64_t choose_scale(double max_abs, int bits);

std::int32_t quantize_value(double w, const QuantScheme& scheme);

QuantizedMatrix quantize_weights(std::span<const double> weights, int bits);

/// Integer spec from the float weights of every layer.
NetSpec quantize_netspec(const NetSpec& spec, int bits);

} // namespace dtsnn
