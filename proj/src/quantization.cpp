#include "dtsnn/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtsnn {
namespace {

void check_bits(int bits) {
    if (bits < kMinWeightBits || bits > kMaxWeightBits)
        throw std::invalid_argument("weight bit width must be in [2, 16], got " + std::to_string(bits));
}

std::int64_t scale_threshold(double theta, std::int64_t scale) {
    return static_cast<std::int64_t>(std::round(theta * static_cast<double>(scale)));
}

} // namespace

std::int64_t choose_scale(double max_abs, int bits) {
    check_bits(bits);
    const double limit = static_cast<double>((std::int64_t{1} << (bits - 1)) - 1);
    std::int64_t s = 1;
    while (s < kMaxWeightScale && max_abs * static_cast<double>(2 * s) <= limit) s *= 2;
    return s;
}

std::int32_t quantize_value(double w, const QuantScheme& scheme) {
    const double level = static_cast<double>(scheme.max_level());
    const double q = std::clamp(std::round(w * static_cast<double>(scheme.scale)), -level, level);
    return static_cast<std::int32_t>(q);
}

QuantizedMatrix quantize_weights(std::span<const double> weights, int bits) {
    check_bits(bits);
    double max_abs = 0.0;
    for (const double w : weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
        max_abs = std::max(max_abs, std::abs(w));
    }
    QuantizedMatrix out;
    out.scheme = {bits, max_abs == 0.0 ? 1 : choose_scale(max_abs, bits)};
    out.values.reserve(weights.size());
    for (const double w : weights) out.values.push_back(quantize_value(w, out.scheme));
    return out;
}

NetSpec quantize_netspec(const NetSpec& spec, int bits) {
    NetSpec out = spec;
    for (std::size_t l = 0; l < out.layers.size(); ++l) {
        auto& L = out.layers[l];
        if (!L.real) throw std::invalid_argument("layer " + std::to_string(l) + ": missing float weights");
        auto q = quantize_weights(L.real->weights, bits);
        L.weights = std::move(q.values);
        L.weight_scale = q.scheme.scale;
        L.theta_high = std::max<std::int64_t>(1, scale_threshold(L.real->theta_high, q.scheme.scale));
        L.theta_low.reset();
        if (L.real->theta_low)
            L.theta_low = std::min<std::int64_t>(-1, scale_threshold(*L.real->theta_low, q.scheme.scale));
    }
    out.validate(true);
    return out;
}

} // namespace dtsnn
