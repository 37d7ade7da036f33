#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace dtsnn {

/// Images with pixels rescaled to [0, 1], stored row-major and contiguous.
struct LabeledImageSet {
    std::size_t rows = 28;
    std::size_t cols = 28;
    std::vector<double> pixels;
    std::vector<std::uint8_t> labels;

    std::size_t size() const { return labels.size(); }
    std::size_t pixels_per_image() const { return rows * cols; }
    std::span<const double> image(std::size_t i) const {
        return std::span<const double>(pixels).subspan(i * pixels_per_image(), pixels_per_image());
    }
};

class IdxError : public std::runtime_error {
public:
    enum class Kind { io, bad_magic, truncated, count_mismatch };

    IdxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

LabeledImageSet load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Pixels are written as round(255 * v).
void save_idx(const LabeledImageSet& set, const std::filesystem::path& images, const std::filesystem::path& labels);

/// Keeps the first `n` images.
LabeledImageSet take(const LabeledImageSet& set, std::size_t n);

inline constexpr double kDefaultEncodingThreshold = 0.05;

/// Delta-encodes the raster scan; entry p is the amplitude emitted at pixel
/// index p (0 where nothing fires). Entry 0 is always 0.
std::vector<std::int64_t> encode_image(std::span<const double> pixels, double threshold = kDefaultEncodingThreshold);

} // namespace dtsnn
