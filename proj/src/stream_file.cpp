#include "dtsnn/stream_file.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dtsnn {
namespace {

constexpr std::array<char, 4> kMagic{'D', 'T', 'S', '1'};

void put_u16(std::ostream& out, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>(v >> 24)};
    out.write(b, 4);
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw std::runtime_error("DTS1: truncated stream file");
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    read_exact(in, b, 4);
    return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

} // namespace

void write_dts(std::ostream& out, std::span<const DeltaStream> channels) {
    const int width = channels.empty() ? 8 : channels.front().width_bits;
    const WordFormat fmt(width);
    if (channels.size() > std::numeric_limits<std::uint32_t>::max())
        throw std::length_error("DTS1: too many channels");

    out.write(kMagic.data(), kMagic.size());
    out.put(static_cast<char>(width));
    put_u32(out, static_cast<std::uint32_t>(channels.size()));
    for (const auto& ch : channels) {
        if (ch.width_bits != width) throw std::invalid_argument("DTS1: channels must share one word width");
        if (ch.words.size() > std::numeric_limits<std::uint32_t>::max())
            throw std::length_error("DTS1: channel too long");
        put_u32(out, static_cast<std::uint32_t>(ch.words.size()));
        for (const DeltaWord w : ch.words) {
            if (!fmt.fits(w)) throw std::invalid_argument("DTS1: word wider than width_bits");
            put_u16(out, w.raw);
        }
    }
    if (!out) throw std::runtime_error("DTS1: write failed");
}

std::vector<DeltaStream> read_dts(std::istream& in) {
    std::array<unsigned char, 4> magic{};
    read_exact(in, magic.data(), magic.size());
    for (std::size_t i = 0; i < kMagic.size(); ++i)
        if (magic[i] != static_cast<unsigned char>(kMagic[i])) throw std::runtime_error("DTS1: bad magic");

    unsigned char width = 0;
    read_exact(in, &width, 1);
    const WordFormat fmt(width);
    const std::uint32_t n_channels = get_u32(in);

    std::vector<DeltaStream> channels;
    for (std::uint32_t c = 0; c < n_channels; ++c) {
        DeltaStream ch{fmt.width(), {}};
        const std::uint32_t n_words = get_u32(in);
        std::vector<unsigned char> bytes(std::size_t{n_words} * 2);
        read_exact(in, bytes.data(), bytes.size());
        ch.words.reserve(n_words);
        for (std::uint32_t k = 0; k < n_words; ++k) {
            const DeltaWord w{static_cast<std::uint16_t>(bytes[2 * k] | bytes[2 * k + 1] << 8)};
            if (!fmt.fits(w)) throw std::runtime_error("DTS1: word exceeds width_bits");
            ch.words.push_back(w);
        }
        channels.push_back(std::move(ch));
    }
    return channels;
}

void write_dts_file(const std::filesystem::path& path, std::span<const DeltaStream> channels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_dts(out, channels);
}

std::vector<DeltaStream> read_dts_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_dts(in);
}

void write_text_streams(std::ostream& out, std::span<const DeltaStream> channels) {
    for (const auto& ch : channels) out << format_words(ch) << '\n';
}

std::vector<DeltaStream> read_text_streams(std::istream& in, int width_bits) {
    std::vector<DeltaStream> channels;
    std::string line;
    while (std::getline(in, line)) channels.push_back(parse_words(line, width_bits));
    return channels;
}

} // namespace dtsnn
