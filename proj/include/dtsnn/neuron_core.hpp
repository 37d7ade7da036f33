#pragma once

// Integer LIF arithmetic: power-of-two decay by shifting, weight accumulation,
// threshold test and reset-to-mod.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dtsnn/spike_codec.hpp"

namespace dtsnn {

struct NeuronParams {
    int decay_exp = 1;              ///< beta = 2^-decay_exp
    std::int64_t theta_high = 1;
    std::optional<std::int64_t> theta_low; ///< negative spikes disabled when empty

    void validate() const;
};

struct NeuronState {
    std::int64_t potential = 0;
    std::vector<std::int32_t> weights;
    Tick last_out_time = 0;
    std::int64_t accumulator = 0;
};

/// floor(p / 2^(decay_exp * dt)), i.e. an arithmetic right shift. Shifts of
/// 63 or more saturate to 0 (p >= 0) or -1 (p < 0).
std::int64_t decay_potential(std::int64_t p, int decay_exp, Tick dt);

/// Combined shift amount for a decay over dt ticks, clamped to 63.
unsigned decay_shift(int decay_exp, Tick dt);

void accumulate(NeuronState& state, std::size_t synapse, int sign);

struct ResetResult {
    std::int64_t potential = 0;
    std::int64_t fired = 0; ///< signed spike count; |fired| > 1 means zero-delta repeats

    friend bool operator==(const ResetResult&, const ResetResult&) = default;
};

/// Reset-to-mod: subtracts theta_high while p >= theta_high, or theta_low
/// while p <= theta_low. The result lies strictly inside the threshold band.
ResetResult apply_reset(std::int64_t p, const NeuronParams& params);

/// One event step: decay over dt, add the accumulator, reset, clear the
/// accumulator. Returns the signed fire count.
std::int64_t neuron_event(NeuronState& state, const NeuronParams& params, Tick dt);

/// Throws std::overflow_error if v does not fit a signed register of `bits`.
void check_register_width(std::int64_t v, int bits, const char* what);

} // namespace dtsnn
