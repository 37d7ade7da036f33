#pragma once

// "DTS1" binary stream container:
//   magic "DTS1" | u8 width_bits | u32 channel_count |
//   per channel: u32 word_count, then word_count u16 words (low b bits used)
// All integers little-endian.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "dtsnn/spike_codec.hpp"

namespace dtsnn {

void write_dts(std::ostream& out, std::span<const DeltaStream> channels);
std::vector<DeltaStream> read_dts(std::istream& in);

void write_dts_file(const std::filesystem::path& path, std::span<const DeltaStream> channels);
std::vector<DeltaStream> read_dts_file(const std::filesystem::path& path);

/// One channel per line in the `+3 +0 OV -2` notation.
void write_text_streams(std::ostream& out, std::span<const DeltaStream> channels);
std::vector<DeltaStream> read_text_streams(std::istream& in, int width_bits);

} // namespace dtsnn
