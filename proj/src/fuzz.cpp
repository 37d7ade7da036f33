#include "dtsnn/fuzz.hpp"

#include <algorithm>

namespace dtsnn::fuzz {
namespace {

template <typename T>
T uniform(std::mt19937_64& rng, T lo, T hi) {
    return std::uniform_int_distribution<T>(lo, hi)(rng);
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[uniform<std::size_t>(rng, 0, v.size() - 1)];
}

} // namespace

NetSpec random_net(std::mt19937_64& rng, const Limits& limits) {
    NetSpec net;
    net.width_bits = pick(rng, limits.widths);
    net.repetitions = 1;
    std::size_t n_in = uniform(rng, limits.min_inputs, limits.max_inputs);
    for (std::size_t l = 0; l < limits.layers; ++l) {
        LayerSpec L;
        L.n_inputs = n_in;
        L.n_neurons = uniform(rng, limits.min_neurons, limits.max_neurons);
        L.decay_exp = pick(rng, limits.decay_exps);
        L.theta_high = uniform<std::int64_t>(rng, 1, limits.max_theta);
        if (std::bernoulli_distribution(limits.theta_low_probability)(rng))
            L.theta_low = -uniform<std::int64_t>(rng, 1, limits.max_theta);
        L.weights.resize(L.n_inputs * L.n_neurons);
        for (auto& w : L.weights) w = uniform(rng, -limits.max_abs_weight, limits.max_abs_weight);
        net.layers.push_back(std::move(L));
        n_in = net.layers.back().n_neurons;
    }
    return net;
}

std::vector<SpikeTrain> random_trains(std::mt19937_64& rng, std::size_t n_inputs, const Limits& limits) {
    std::vector<SpikeTrain> trains(n_inputs);
    const Tick horizon = uniform<Tick>(rng, 0, limits.max_horizon);
    const std::size_t n_spikes = uniform<std::size_t>(rng, 0, limits.max_spikes);
    for (std::size_t k = 0; k < n_spikes; ++k) {
        auto& train = trains[uniform<std::size_t>(rng, 0, n_inputs - 1)];
        std::int64_t a = uniform<std::int64_t>(rng, 1, limits.max_amplitude);
        if (std::bernoulli_distribution(0.5)(rng)) a = -a;
        train.events.push_back({uniform<Tick>(rng, 0, horizon), a});
    }
    for (auto& t : trains)
        std::stable_sort(t.events.begin(), t.events.end(), [](const SpikeEvent& a, const SpikeEvent& b) { return a.time < b.time; });
    return trains;
}

std::vector<DeltaStream> encode_inputs(std::mt19937_64& rng, const std::vector<SpikeTrain>& trains, int width_bits) {
    const WordFormat fmt(width_bits);
    std::vector<DeltaStream> out;
    out.reserve(trains.size());
    for (const auto& t : trains) {
        auto s = to_delta_words(t, width_bits);
        if (std::bernoulli_distribution(0.2)(rng)) s.words.insert(s.words.end(), uniform<std::size_t>(rng, 1, 3), fmt.overflow());
        out.push_back(std::move(s));
    }
    return out;
}

Case random_case(std::mt19937_64& rng, const Limits& limits) {
    Case c;
    c.net = random_net(rng, limits);
    c.input_trains = random_trains(rng, c.net.n_inputs(), limits);
    c.inputs = encode_inputs(rng, c.input_trains, c.net.width_bits);
    return c;
}

} // namespace dtsnn::fuzz
