#include "dtsnn/spike_codec.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtsnn {

void SpikeTrain::validate() const {
    Tick prev = 0;
    for (const auto& ev : events) {
        if (ev.time < 0) throw std::invalid_argument("spike train: negative time");
        if (ev.time < prev) throw std::invalid_argument("spike train: times not sorted");
        if (ev.amplitude == 0) throw std::invalid_argument("spike train: zero amplitude");
        prev = ev.time;
    }
}

SpikeTrain SpikeTrain::normalized() const {
    SpikeTrain out;
    out.events.reserve(events.size());
    for (const auto& ev : events) {
        if (!out.events.empty()) {
            auto& last = out.events.back();
            if (last.time == ev.time && (last.amplitude > 0) == (ev.amplitude > 0)) {
                last.amplitude += ev.amplitude;
                continue;
            }
        }
        out.events.push_back(ev);
    }
    return out;
}

WordFormat::WordFormat(int width_bits) : width_(width_bits) {
    if (width_bits < kMinWidth || width_bits > kMaxWidth)
        throw std::invalid_argument("word width must be in [3, 16] bits, got " + std::to_string(width_bits));
}

DeltaWord WordFormat::data(int sign, Tick magnitude) const {
    if (magnitude < 0 || magnitude > max_data_magnitude())
        throw std::out_of_range("data word magnitude out of range");
    auto raw = static_cast<std::uint16_t>(magnitude);
    if (sign < 0) raw = static_cast<std::uint16_t>(raw | (1u << (width_ - 1)));
    return DeltaWord{raw};
}

SpikeTrain delta_encode_signal(std::span<const double> samples, double threshold) {
    if (samples.empty()) throw std::invalid_argument("empty signal");
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw std::invalid_argument("invalid threshold");

    // Quotients within this distance of an integer are snapped to it, so that
    // e.g. 0.3 / 0.05 yields 6 and not 5.999999999999999.
    constexpr double kSnap = 1e-9;

    SpikeTrain train;
    double residual = 0.0;
    for (std::size_t p = 1; p < samples.size(); ++p) {
        residual += samples[p] - samples[p - 1];
        const double ratio = residual / threshold;
        const double nearest = std::round(ratio);
        const double q = std::abs(ratio - nearest) < kSnap ? nearest : std::trunc(ratio);
        if (q != 0.0) {
            train.events.push_back({static_cast<Tick>(p), static_cast<std::int64_t>(q)});
            residual -= q * threshold;
        }
    }
    return train;
}

std::size_t append_overflow_words(std::vector<DeltaWord>& out, const WordFormat& fmt, Tick delta) {
    const auto n = static_cast<std::size_t>(delta / fmt.overflow_span());
    out.insert(out.end(), n, fmt.overflow());
    return n;
}

void append_event_words(std::vector<DeltaWord>& out, const WordFormat& fmt, Tick delta,
                        std::int64_t amplitude) {
    const int sign = amplitude < 0 ? -1 : +1;
    append_overflow_words(out, fmt, delta);
    out.push_back(fmt.data(sign, delta % fmt.overflow_span()));
    const auto extra = static_cast<std::size_t>(amplitude < 0 ? -amplitude : amplitude) - 1;
    out.insert(out.end(), extra, fmt.data(sign, 0));
}

DeltaStream to_delta_words(const SpikeTrain& train, int width_bits) {
    const WordFormat fmt(width_bits);
    train.validate();

    DeltaStream stream{width_bits, {}};
    Tick prev = 0;
    for (const auto& ev : train.events) {
        append_event_words(stream.words, fmt, ev.time - prev, ev.amplitude);
        prev = ev.time;
    }
    return stream;
}

SpikeTrain from_delta_words(const DeltaStream& stream) {
    const WordFormat fmt(stream.width_bits);
    SpikeTrain train;
    Tick t = 0;
    for (const DeltaWord w : stream.words) {
        if (fmt.is_overflow(w)) {
            t += fmt.overflow_span();
            continue;
        }
        t += fmt.magnitude(w);
        const int sign = fmt.sign(w);
        if (!train.events.empty()) {
            auto& last = train.events.back();
            if (last.time == t && (last.amplitude > 0) == (sign > 0)) {
                last.amplitude += sign;
                continue;
            }
        }
        train.events.push_back({t, sign});
    }
    return train;
}

SpikeTrain scale_times(const SpikeTrain& train, Tick lambda) {
    if (lambda < 1) throw std::invalid_argument("time scale factor must be >= 1");
    SpikeTrain out = train;
    for (auto& ev : out.events) {
        if (ev.time > std::numeric_limits<Tick>::max() / lambda)
            throw std::overflow_error("scaled spike time overflows");
        ev.time *= lambda;
    }
    return out;
}

std::size_t count_overflow_words(const DeltaStream& stream) {
    const WordFormat fmt(stream.width_bits);
    std::size_t n = 0;
    for (const DeltaWord w : stream.words) n += fmt.is_overflow(w) ? 1 : 0;
    return n;
}

Tick stream_duration(const DeltaStream& stream) {
    const WordFormat fmt(stream.width_bits);
    Tick t = 0;
    for (const DeltaWord w : stream.words) t += fmt.is_overflow(w) ? fmt.overflow_span() : fmt.magnitude(w);
    return t;
}

std::string format_words(const DeltaStream& stream) {
    const WordFormat fmt(stream.width_bits);
    std::string out;
    for (const DeltaWord w : stream.words) {
        if (!out.empty()) out += ' ';
        if (fmt.is_overflow(w)) {
            out += "OV";
        } else {
            out += fmt.sign(w) < 0 ? '-' : '+';
            out += std::to_string(fmt.magnitude(w));
        }
    }
    return out;
}

DeltaStream parse_words(std::string_view line, int width_bits) {
    const WordFormat fmt(width_bits);
    DeltaStream stream{width_bits, {}};
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
        if (pos == line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        const auto tok = line.substr(pos, end - pos);
        pos = end;

        if (tok == "OV") {
            stream.words.push_back(fmt.overflow());
            continue;
        }
        if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-'))
            throw std::invalid_argument("bad word token '" + std::string(tok) + "'");
        Tick mag = 0;
        const auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), mag);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw std::invalid_argument("bad word token '" + std::string(tok) + "'");
        // A positive word may use the full magnitude range; only the all-ones
        // pattern is reserved.
        if (tok[0] == '+' && mag == fmt.overflow_span())
            stream.words.push_back(DeltaWord{static_cast<std::uint16_t>(mag)});
        else
            stream.words.push_back(fmt.data(tok[0] == '-' ? -1 : +1, mag));
    }
    return stream;
}

} // namespace dtsnn
