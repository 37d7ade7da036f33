#include "dtsnn/neuron_core.hpp"

#include <stdexcept>
#include <string>

namespace dtsnn {

void NeuronParams::validate() const {
    if (decay_exp < 1) throw std::invalid_argument("decay_exp must be >= 1");
    if (theta_high <= 0) throw std::invalid_argument("theta_high must be positive");
    if (theta_low && *theta_low >= 0) throw std::invalid_argument("theta_low must be negative");
}

unsigned decay_shift(int decay_exp, Tick dt) {
    if (dt <= 0) return 0;
    if (dt >= 63 || decay_exp >= 63) return 63;
    const Tick s = static_cast<Tick>(decay_exp) * dt;
    return s >= 63 ? 63u : static_cast<unsigned>(s);
}

std::int64_t decay_potential(std::int64_t p, int decay_exp, Tick dt) {
    return p >> decay_shift(decay_exp, dt);
}

void accumulate(NeuronState& state, std::size_t synapse, int sign) {
    if (synapse >= state.weights.size()) throw std::out_of_range("synapse index out of range");
    state.accumulator += sign * static_cast<std::int64_t>(state.weights[synapse]);
}

ResetResult apply_reset(std::int64_t p, const NeuronParams& params) {
    if (p >= params.theta_high) {
        const std::int64_t k = p / params.theta_high;
        return {p - k * params.theta_high, k};
    }
    if (params.theta_low && p <= *params.theta_low) {
        const std::int64_t k = p / *params.theta_low;
        return {p - k * *params.theta_low, -k};
    }
    return {p, 0};
}

std::int64_t neuron_event(NeuronState& state, const NeuronParams& params, Tick dt) {
    const auto r = apply_reset(decay_potential(state.potential, params.decay_exp, dt) + state.accumulator, params);
    state.potential = r.potential;
    state.accumulator = 0;
    return r.fired;
}

void check_register_width(std::int64_t v, int bits, const char* what) {
    if (bits >= 64) return;
    const std::int64_t hi = (std::int64_t{1} << (bits - 1)) - 1;
    const std::int64_t lo = -hi - 1;
    if (v < lo || v > hi)
        throw std::overflow_error(std::string(what) + " overflows a " + std::to_string(bits) + "-bit register");
}

} // namespace dtsnn
