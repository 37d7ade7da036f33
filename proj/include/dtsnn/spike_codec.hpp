#pragma once

// Spike trains in absolute time and their differential-time word encoding.
//
// A word of width b is sign-magnitude: bit b-1 carries the sign, the low b-1
// bits carry the time difference to the previous word of the stream. The
// all-ones pattern is reserved as the overflow word: it advances time by
// V = 2^(b-1)-1 ticks and carries no amplitude. An event of amplitude |a|>1
// is folded into a signed data word followed by |a|-1 zero-delta words of the
// same sign.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dtsnn {

using Tick = std::int64_t;

struct SpikeEvent {
    Tick time = 0;
    std::int64_t amplitude = 0;

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

struct SpikeTrain {
    std::vector<SpikeEvent> events;

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }

    /// Throws std::invalid_argument on negative/decreasing times or zero amplitude.
    void validate() const;

    /// Merges adjacent events that share both time and sign.
    SpikeTrain normalized() const;

    friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;
};

struct DeltaWord {
    std::uint16_t raw = 0;

    friend bool operator==(const DeltaWord&, const DeltaWord&) = default;
};

/// Bit layout of a word of a given width. Widths are limited to [3, 16] so a
/// word always fits the 16-bit container used by the stream file format.
class WordFormat {
public:
    static constexpr int kMinWidth = 3;
    static constexpr int kMaxWidth = 16;

    explicit WordFormat(int width_bits);

    int width() const { return width_; }

    std::uint16_t overflow_code() const { return static_cast<std::uint16_t>((1u << width_) - 1u); }

    /// Ticks covered by one overflow word.
    Tick overflow_span() const { return (Tick{1} << (width_ - 1)) - 1; }

    /// Largest magnitude the encoder puts into a data word (either sign).
    Tick max_data_magnitude() const { return overflow_span() - 1; }

    DeltaWord overflow() const { return DeltaWord{overflow_code()}; }
    DeltaWord data(int sign, Tick magnitude) const;

    bool is_overflow(DeltaWord w) const { return w.raw == overflow_code(); }
    int sign(DeltaWord w) const { return (w.raw >> (width_ - 1)) & 1u ? -1 : +1; }
    Tick magnitude(DeltaWord w) const { return w.raw & ((1u << (width_ - 1)) - 1u); }
    bool fits(DeltaWord w) const { return w.raw <= overflow_code(); }

private:
    int width_;
};

struct DeltaStream {
    int width_bits = 8;
    std::vector<DeltaWord> words;

    friend bool operator==(const DeltaStream&, const DeltaStream&) = default;
};

/// Level-crossing delta modulation of a sampled signal; the sample index is
/// the event time. Throws std::invalid_argument("empty signal") or
/// std::invalid_argument("invalid threshold").
SpikeTrain delta_encode_signal(std::span<const double> samples, double threshold);

/// Appends the words for one event `delta` ticks after the previous one.
void append_event_words(std::vector<DeltaWord>& out, const WordFormat& fmt, Tick delta,
                        std::int64_t amplitude);

/// Appends floor(delta / V) overflow words; returns the number appended.
std::size_t append_overflow_words(std::vector<DeltaWord>& out, const WordFormat& fmt, Tick delta);

DeltaStream to_delta_words(const SpikeTrain& train, int width_bits);
SpikeTrain from_delta_words(const DeltaStream& stream);

SpikeTrain scale_times(const SpikeTrain& train, Tick lambda);

std::size_t count_overflow_words(const DeltaStream& stream);

/// Total number of ticks the stream's words advance time by.
Tick stream_duration(const DeltaStream& stream);

// Text debug format: one channel per line, words as `+3 +0 OV -2`.
std::string format_words(const DeltaStream& stream);
DeltaStream parse_words(std::string_view line, int width_bits);

} // namespace dtsnn
