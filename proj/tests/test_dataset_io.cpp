#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "dtsnn/dataset_io.hpp"

using namespace dtsnn;
namespace fs = std::filesystem;

namespace {

void put_be32(std::string& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::string idx_images(std::uint32_t magic, std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                       const std::vector<std::uint8_t>& pixels) {
    std::string s;
    put_be32(s, magic);
    put_be32(s, n);
    put_be32(s, rows);
    put_be32(s, cols);
    s.append(pixels.begin(), pixels.end());
    return s;
}

std::string idx_labels(std::uint32_t magic, std::uint32_t n, const std::vector<std::uint8_t>& labels) {
    std::string s;
    put_be32(s, magic);
    put_be32(s, n);
    s.append(labels.begin(), labels.end());
    return s;
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / "dtsnn_test_dataset_io";
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }

    fs::path write(const std::string& name, const std::string& bytes) const {
        std::ofstream(path / name, std::ios::binary) << bytes;
        return path / name;
    }
};

IdxError::Kind load_error(const fs::path& images, const fs::path& labels) {
    try {
        load_idx(images, labels);
    } catch (const IdxError& e) {
        return e.kind();
    }
    FAIL("load_idx did not throw");
    return IdxError::Kind::io;
}

} // namespace

TEST_CASE("load_idx parses big-endian IDX files") {
    const TempDir tmp;
    const auto images = tmp.write("img", idx_images(kIdxImageMagic, 2, 2, 3, {0, 255, 51, 0, 0, 0, 1, 2, 3, 4, 5, 6}));
    const auto labels = tmp.write("lbl", idx_labels(kIdxLabelMagic, 2, {7, 2}));
    const auto set = load_idx(images, labels);
    CHECK(set.size() == 2);
    CHECK(set.rows == 2);
    CHECK(set.cols == 3);
    CHECK(set.labels == std::vector<std::uint8_t>{7, 2});
    CHECK(set.image(0)[1] == 1.0);
    CHECK(set.image(0)[2] == doctest::Approx(0.2));
    CHECK(set.image(1)[5] == doctest::Approx(6.0 / 255));

    const auto first = take(set, 1);
    CHECK(first.size() == 1);
    CHECK(first.pixels.size() == 6);
    CHECK(take(set, 10).size() == 2);
}

TEST_CASE("load_idx reports distinct errors") {
    const TempDir tmp;
    const auto images = tmp.write("img", idx_images(kIdxImageMagic, 2, 1, 2, {0, 1, 2, 3}));
    const auto labels = tmp.write("lbl", idx_labels(kIdxLabelMagic, 2, {1, 2}));

    const auto wrong_magic = tmp.write("lbl_bad", idx_labels(kIdxImageMagic, 2, {1, 2}));
    CHECK(load_error(images, wrong_magic) == IdxError::Kind::bad_magic);
    CHECK_THROWS_WITH(load_idx(images, wrong_magic), doctest::Contains("bad magic"));
    CHECK(load_error(labels, labels) == IdxError::Kind::bad_magic);

    const auto short_images = tmp.write("img_short", idx_images(kIdxImageMagic, 2, 1, 2, {0, 1, 2}));
    CHECK(load_error(short_images, labels) == IdxError::Kind::truncated);
    const auto short_header = tmp.write("lbl_short", std::string("\0\0\x08", 3));
    CHECK(load_error(images, short_header) == IdxError::Kind::truncated);

    const auto three = tmp.write("lbl3", idx_labels(kIdxLabelMagic, 3, {1, 2, 3}));
    CHECK(load_error(images, three) == IdxError::Kind::count_mismatch);

    CHECK(load_error(tmp.path / "missing", labels) == IdxError::Kind::io);
}

TEST_CASE("save_idx and load_idx round-trip") {
    const TempDir tmp;
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 20; ++trial) {
        LabeledImageSet set;
        set.rows = 1 + rng() % 6;
        set.cols = 1 + rng() % 6;
        const std::size_t n = rng() % 8;
        for (std::size_t k = 0; k < n * set.rows * set.cols; ++k) set.pixels.push_back((rng() % 256) / 255.0);
        for (std::size_t k = 0; k < n; ++k) set.labels.push_back(static_cast<std::uint8_t>(rng() % 10));
        save_idx(set, tmp.path / "i", tmp.path / "l");
        const auto back = load_idx(tmp.path / "i", tmp.path / "l");
        CHECK(back.rows == set.rows);
        CHECK(back.cols == set.cols);
        CHECK(back.labels == set.labels);
        CHECK(back.pixels == set.pixels);
    }
}

TEST_CASE("encode_image examples") {
    CHECK(encode_image(std::vector<double>(784, 0.0)) == std::vector<std::int64_t>(784, 0));

    std::vector<double> spot(784, 0.0);
    spot[1] = 1.0;
    const auto q = encode_image(spot);
    CHECK(q[0] == 0);
    CHECK(q[1] == 20);
    CHECK(q[2] == -20);
    for (std::size_t p = 3; p < 784; ++p) CHECK(q[p] == 0);

    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> img(784);
        for (auto& v : img) v = (rng() % 256) / 255.0;
        const auto a = encode_image(img);
        CHECK(a == encode_image(img));
        CHECK(a[0] == 0);
        double total = 0.0;
        for (auto v : a) total += static_cast<double>(v) * kDefaultEncodingThreshold;
        CHECK(std::abs((img.back() - img.front()) - total) < kDefaultEncodingThreshold * (1 + 1e-9));
    }
}

TEST_CASE("MNIST test set, when available") {
    const char* dir = std::getenv("MNIST_DIR");
    if (dir == nullptr) {
        MESSAGE("MNIST_DIR not set; skipping");
        return;
    }
    const auto set = load_idx(fs::path(dir) / "t10k-images-idx3-ubyte", fs::path(dir) / "t10k-labels-idx1-ubyte");
    CHECK(set.size() == 10000);
    CHECK(set.rows == 28);
    CHECK(set.cols == 28);
    CHECK(set.labels[0] == 7);
}
