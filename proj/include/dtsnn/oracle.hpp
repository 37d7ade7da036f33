#pragma once

// Dense time-stepped reference simulator. It walks every tick of the input
// horizon, decays each potential by one tick, adds the weighted input
// amplitudes and resets by repeated subtraction. It shares no arithmetic
// with the event engine and exists to check it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtsnn/network.hpp"
#include "dtsnn/spike_codec.hpp"

namespace dtsnn::oracle {

struct DenseInput {
    Tick horizon = 0;
    std::size_t n_inputs = 0;
    std::vector<std::int64_t> grid; ///< [input][tick]

    std::int64_t at(std::size_t input, Tick t) const { return grid[input * static_cast<std::size_t>(horizon) + static_cast<std::size_t>(t)]; }
};

DenseInput densify(std::span<const DeltaStream> inputs);

/// Output trains of every layer, [layer][neuron].
std::vector<std::vector<SpikeTrain>> dense_simulate(const NetSpec& net, const DenseInput& dense);

struct EquivalenceReport {
    bool equivalent = true;
    std::size_t layer = 0;
    std::size_t neuron = 0;
    Tick time = 0;

    std::string describe() const;
};

/// Runs the event engine on `event_net` and the dense oracle on
/// `oracle_net` and compares every layer's decoded outputs exactly.
EquivalenceReport check_equivalence(const NetSpec& event_net, const NetSpec& oracle_net,
                                    std::span<const DeltaStream> inputs);

inline EquivalenceReport check_equivalence(const NetSpec& net, std::span<const DeltaStream> inputs) {
    return check_equivalence(net, net, inputs);
}

/// Compares two [layer][neuron] trace sets; the first differing event wins.
EquivalenceReport compare_traces(const std::vector<std::vector<SpikeTrain>>& lhs,
                                 const std::vector<std::vector<SpikeTrain>>& rhs);

} // namespace dtsnn::oracle
