#include "dtsnn/network.hpp"

#include <stdexcept>
#include <string>

namespace dtsnn {

void NetSpec::validate(bool require_integer) const {
    WordFormat{width_bits};
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (layers.empty()) throw std::invalid_argument("network has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        const std::string where = "layer " + std::to_string(l) + ": ";
        if (L.n_inputs == 0 || L.n_neurons == 0) throw std::invalid_argument(where + "dimensions must be positive");
        if (l > 0 && layers[l - 1].n_neurons != L.n_inputs)
            throw std::invalid_argument(where + "n_inputs does not match previous layer's n_neurons");
        if (L.weight_scale < 1) throw std::invalid_argument(where + "weight_scale must be positive");
        if (L.has_integer_weights()) {
            if (L.weights.size() != L.n_inputs * L.n_neurons)
                throw std::invalid_argument(where + "weight matrix has wrong size");
            try {
                L.params().validate();
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(where + e.what());
            }
        } else if (require_integer) {
            throw std::invalid_argument(where + "integer weights missing");
        }
        if (L.real && L.real->weights.size() != L.n_inputs * L.n_neurons)
            throw std::invalid_argument(where + "float weight matrix has wrong size");
        if (!L.has_integer_weights() && !L.real) throw std::invalid_argument(where + "no weights");
    }
}

std::vector<DeltaStream> present_input(std::span<const std::int64_t> amplitudes, int reps, int width_bits) {
    if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
    const WordFormat fmt(width_bits);
    std::vector<DeltaStream> streams(amplitudes.size(), DeltaStream{width_bits, {}});
    for (std::size_t p = 0; p < amplitudes.size(); ++p) {
        const std::int64_t q = amplitudes[p];
        if (q == 0) continue;
        auto& words = streams[p].words;
        for (int t = 0; t < reps; ++t) append_event_words(words, fmt, t == 0 ? 0 : 1, q);
    }
    return streams;
}

std::size_t classify(std::span<const std::int64_t> counts) {
    if (counts.empty()) throw std::invalid_argument("classify: empty counts");
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
        if (counts[k] > counts[best]) best = k;
    return best;
}

Network::Network(const NetSpec& spec, NetworkOptions options) : spec_(spec) {
    spec_.validate(true);
    layers_.reserve(spec_.layers.size());
    for (const auto& L : spec_.layers) {
        LayerConfig cfg;
        cfg.n_inputs = L.n_inputs;
        cfg.n_neurons = L.n_neurons;
        cfg.params = L.params();
        cfg.width_bits = spec_.width_bits;
        cfg.rebase = options.rebase;
        cfg.register_bits = options.register_bits;
        layers_.emplace_back(cfg, L.weights);
    }
}

InferenceResult Network::run(std::span<const DeltaStream> inputs) {
    if (inputs.size() != spec_.n_inputs())
        throw std::invalid_argument("network expects " + std::to_string(spec_.n_inputs()) + " inputs, got " +
                                    std::to_string(inputs.size()));

    InferenceResult result;
    trace_.clear();
    std::span<const DeltaStream> current = inputs;
    for (auto& layer : layers_) {
        trace_.push_back(layer.run(current));
        current = trace_.back();
        result.total_events += layer.events_processed();
        result.total_cycles += layer.cycle_estimate();
    }

    const auto& out = trace_.back();
    result.output_counts.assign(out.size(), 0);
    for (std::size_t j = 0; j < out.size(); ++j) {
        const WordFormat fmt(out[j].width_bits);
        for (const DeltaWord w : out[j].words)
            if (!fmt.is_overflow(w) && fmt.sign(w) > 0) ++result.output_counts[j];
    }
    result.label = classify(result.output_counts);
    return result;
}

InferenceResult run_network(const NetSpec& spec, std::span<const DeltaStream> inputs) {
    Network net(spec);
    return net.run(inputs);
}

} // namespace dtsnn
