#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dtsnn/layer_engine.hpp"
#include "dtsnn/spike_codec.hpp"

namespace dtsnn {

/// Real-valued weights as exported by a trainer; thresholds in the same units.
struct FloatWeights {
    std::vector<double> weights; ///< row-major [neuron][input]
    double theta_high = 1.0;
    std::optional<double> theta_low;
};

struct LayerSpec {
    std::size_t n_inputs = 0;
    std::size_t n_neurons = 0;
    int decay_exp = 1;
    std::int64_t theta_high = 1;
    std::optional<std::int64_t> theta_low;
    std::int64_t weight_scale = 1;
    std::vector<std::int32_t> weights; ///< row-major [neuron][input]; empty if only float weights exist
    std::optional<FloatWeights> real;

    bool has_integer_weights() const { return !weights.empty(); }
    NeuronParams params() const { return {decay_exp, theta_high, theta_low}; }
};

struct NetSpec {
    int width_bits = 8;
    int repetitions = 28;
    std::vector<LayerSpec> layers;

    std::size_t n_inputs() const { return layers.empty() ? 0 : layers.front().n_inputs; }
    std::size_t n_outputs() const { return layers.empty() ? 0 : layers.back().n_neurons; }

    /// Structural checks. With `require_integer`, every layer must carry
    /// integer weights.
    void validate(bool require_integer = true) const;
};

struct InferenceResult {
    std::vector<std::int64_t> output_counts;
    std::size_t label = 0;
    std::uint64_t total_events = 0;
    std::uint64_t total_cycles = 0;
};

/// Static presentation: line p carries amplitude q[p] once per step
/// t = 0..reps-1. Lines with q[p] == 0 stay empty.
std::vector<DeltaStream> present_input(std::span<const std::int64_t> amplitudes, int reps, int width_bits);

/// Index of the largest count, lowest index on ties.
std::size_t classify(std::span<const std::int64_t> counts);

struct NetworkOptions {
    bool rebase = false;
    std::optional<int> register_bits;
};

/// A network instance owns one Layer per layer and can be reused across
/// inputs. Not thread-safe; use one instance per thread.
class Network {
public:
    explicit Network(const NetSpec& spec, NetworkOptions options = {});

    InferenceResult run(std::span<const DeltaStream> inputs);

    /// Output streams of every layer from the last run().
    const std::vector<std::vector<DeltaStream>>& trace() const { return trace_; }

    std::vector<Layer>& layers() { return layers_; }
    const NetSpec& spec() const { return spec_; }

private:
    NetSpec spec_;
    std::vector<Layer> layers_;
    std::vector<std::vector<DeltaStream>> trace_;
};

InferenceResult run_network(const NetSpec& spec, std::span<const DeltaStream> inputs);

} // namespace dtsnn
