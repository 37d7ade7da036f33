#include "dtsnn/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "dtsnn/spike_codec.hpp"

namespace dtsnn {
namespace {

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError(IdxError::Kind::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t off) {
    return std::uint32_t{b[off]} << 24 | std::uint32_t{b[off + 1]} << 16 | std::uint32_t{b[off + 2]} << 8 |
           std::uint32_t{b[off + 3]};
}

// Magic first, so a swapped or foreign file is reported as such even when it
// is shorter than the expected header.
void check_header(const std::vector<unsigned char>& b, std::uint32_t magic, std::size_t header_size,
                  const std::filesystem::path& path) {
    if (b.size() < 4) throw IdxError(IdxError::Kind::truncated, path.string() + ": truncated header");
    if (be32(b, 0) != magic) throw IdxError(IdxError::Kind::bad_magic, path.string() + ": bad magic");
    if (b.size() < header_size) throw IdxError(IdxError::Kind::truncated, path.string() + ": truncated header");
}

void put_be32(std::ofstream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>((v >> 16) & 0xff),
                       static_cast<char>((v >> 8) & 0xff), static_cast<char>(v & 0xff)};
    out.write(b, 4);
}

} // namespace

LabeledImageSet load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    const auto img = slurp(images);
    const auto lab = slurp(labels);

    check_header(img, kIdxImageMagic, 16, images);
    check_header(lab, kIdxLabelMagic, 8, labels);

    const std::size_t n_img = be32(img, 4);
    LabeledImageSet set;
    set.rows = be32(img, 8);
    set.cols = be32(img, 12);
    const std::size_t n_lab = be32(lab, 4);

    // rows * cols fits in 64 bits; dividing keeps a bogus count from overflowing
    const std::size_t per_image = set.rows * set.cols;
    if (per_image != 0 && n_img > (img.size() - 16) / per_image)
        throw IdxError(IdxError::Kind::truncated, images.string() + ": truncated pixel data");
    if (lab.size() < 8 + n_lab) throw IdxError(IdxError::Kind::truncated, labels.string() + ": truncated label data");
    if (n_img != n_lab)
        throw IdxError(IdxError::Kind::count_mismatch,
                       "image count " + std::to_string(n_img) + " != label count " + std::to_string(n_lab));

    const std::size_t n_px = n_img * per_image;
    set.pixels.resize(n_px);
    for (std::size_t k = 0; k < n_px; ++k) set.pixels[k] = img[16 + k] / 255.0;
    set.labels.assign(lab.begin() + 8, lab.begin() + 8 + static_cast<std::ptrdiff_t>(n_lab));
    return set;
}

void save_idx(const LabeledImageSet& set, const std::filesystem::path& images, const std::filesystem::path& labels) {
    if (set.pixels.size() != set.size() * set.pixels_per_image())
        throw std::invalid_argument("image set: pixel buffer does not match label count");
    std::ofstream img(images, std::ios::binary);
    std::ofstream lab(labels, std::ios::binary);
    if (!img || !lab) throw IdxError(IdxError::Kind::io, "cannot open IDX output files");

    put_be32(img, kIdxImageMagic);
    put_be32(img, static_cast<std::uint32_t>(set.size()));
    put_be32(img, static_cast<std::uint32_t>(set.rows));
    put_be32(img, static_cast<std::uint32_t>(set.cols));
    for (const double v : set.pixels) img.put(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));

    put_be32(lab, kIdxLabelMagic);
    put_be32(lab, static_cast<std::uint32_t>(set.size()));
    lab.write(reinterpret_cast<const char*>(set.labels.data()), static_cast<std::streamsize>(set.labels.size()));
    if (!img || !lab) throw IdxError(IdxError::Kind::io, "IDX write failed");
}

LabeledImageSet take(const LabeledImageSet& set, std::size_t n) {
    n = std::min(n, set.size());
    LabeledImageSet out;
    out.rows = set.rows;
    out.cols = set.cols;
    out.pixels.assign(set.pixels.begin(), set.pixels.begin() + static_cast<std::ptrdiff_t>(n * set.pixels_per_image()));
    out.labels.assign(set.labels.begin(), set.labels.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

std::vector<std::int64_t> encode_image(std::span<const double> pixels, double threshold) {
    std::vector<std::int64_t> q(pixels.size(), 0);
    if (pixels.empty()) return q;
    for (const auto& ev : delta_encode_signal(pixels, threshold).events)
        q[static_cast<std::size_t>(ev.time)] = ev.amplitude;
    return q;
}

} // namespace dtsnn
