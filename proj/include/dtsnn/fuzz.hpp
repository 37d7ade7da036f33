#pragma once

// Random networks and sparse input streams for equivalence fuzzing.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dtsnn/network.hpp"

namespace dtsnn::fuzz {

struct Limits {
    std::size_t layers = 2;
    std::size_t min_inputs = 3;
    std::size_t max_inputs = 20;
    std::size_t min_neurons = 2;
    std::size_t max_neurons = 10;
    std::int32_t max_abs_weight = 127;
    std::int64_t max_theta = 64;
    std::vector<int> decay_exps{1, 2, 3};
    std::vector<int> widths{4, 8};
    std::size_t max_spikes = 200;
    Tick max_horizon = 400;
    std::int64_t max_amplitude = 3;
    /// Probability that a layer also gets a negative threshold.
    double theta_low_probability = 0.5;
};

struct Case {
    NetSpec net;
    std::vector<SpikeTrain> input_trains;
    std::vector<DeltaStream> inputs;
};

NetSpec random_net(std::mt19937_64& rng, const Limits& limits);

/// Sorted random trains, one per input line.
std::vector<SpikeTrain> random_trains(std::mt19937_64& rng, std::size_t n_inputs, const Limits& limits);

/// Encodes trains at `width_bits`, occasionally appending trailing overflow words.
std::vector<DeltaStream> encode_inputs(std::mt19937_64& rng, const std::vector<SpikeTrain>& trains, int width_bits);

Case random_case(std::mt19937_64& rng, const Limits& limits);

} // namespace dtsnn::fuzz
