#include "dtsnn/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dtsnn::oracle {
namespace {

std::int64_t halve_floor(std::int64_t p) {
    std::int64_t q = p / 2;
    if (p % 2 != 0 && p < 0) --q;
    return q;
}

} // namespace

DenseInput densify(std::span<const DeltaStream> inputs) {
    DenseInput dense;
    dense.n_inputs = inputs.size();
    bool any_words = false;
    Tick end = 0;
    for (const auto& s : inputs) {
        any_words = any_words || !s.words.empty();
        end = std::max(end, stream_duration(s));
    }
    dense.horizon = any_words ? end + 1 : 0;
    dense.grid.assign(dense.n_inputs * static_cast<std::size_t>(dense.horizon), 0);
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (const auto& ev : from_delta_words(inputs[i]).events)
            dense.grid[i * static_cast<std::size_t>(dense.horizon) + static_cast<std::size_t>(ev.time)] += ev.amplitude;
    return dense;
}

std::vector<std::vector<SpikeTrain>> dense_simulate(const NetSpec& net, const DenseInput& dense) {
    net.validate(true);
    if (dense.n_inputs != net.n_inputs()) throw std::invalid_argument("oracle: input count mismatch");

    const Tick T = dense.horizon;
    std::vector<std::int64_t> grid = dense.grid;
    std::vector<std::vector<SpikeTrain>> traces;

    for (const auto& L : net.layers) {
        std::vector<std::int64_t> out(L.n_neurons * static_cast<std::size_t>(T), 0);
        std::vector<SpikeTrain> trains(L.n_neurons);
        for (std::size_t j = 0; j < L.n_neurons; ++j) {
            std::int64_t p = 0;
            for (Tick t = 0; t < T; ++t) {
                for (int k = 0; k < L.decay_exp; ++k) p = halve_floor(p);
                for (std::size_t i = 0; i < L.n_inputs; ++i)
                    p += std::int64_t{L.weights[j * L.n_inputs + i]} * grid[i * static_cast<std::size_t>(T) + static_cast<std::size_t>(t)];
                std::int64_t fired = 0;
                while (p >= L.theta_high) {
                    p -= L.theta_high;
                    ++fired;
                }
                while (L.theta_low && p <= *L.theta_low) {
                    p -= *L.theta_low;
                    --fired;
                }
                if (fired != 0) {
                    out[j * static_cast<std::size_t>(T) + static_cast<std::size_t>(t)] = fired;
                    trains[j].events.push_back({t, fired});
                }
            }
        }
        traces.push_back(std::move(trains));
        grid = std::move(out);
    }
    return traces;
}

std::string EquivalenceReport::describe() const {
    if (equivalent) return "equivalent";
    std::ostringstream os;
    os << "diverged at layer " << layer << ", neuron " << neuron << ", time " << time;
    return os.str();
}

EquivalenceReport compare_traces(const std::vector<std::vector<SpikeTrain>>& lhs,
                                 const std::vector<std::vector<SpikeTrain>>& rhs) {
    if (lhs.size() != rhs.size()) throw std::invalid_argument("trace layer counts differ");
    for (std::size_t l = 0; l < lhs.size(); ++l) {
        if (lhs[l].size() != rhs[l].size()) throw std::invalid_argument("trace neuron counts differ");
        // Report the earliest divergence in time within the first diverging layer.
        std::optional<EquivalenceReport> first;
        for (std::size_t j = 0; j < lhs[l].size(); ++j) {
            const auto& a = lhs[l][j].events;
            const auto& b = rhs[l][j].events;
            const std::size_t n = std::min(a.size(), b.size());
            std::size_t k = 0;
            while (k < n && a[k] == b[k]) ++k;
            if (k == a.size() && k == b.size()) continue;
            Tick t = 0;
            if (k < a.size() && k < b.size()) t = std::min(a[k].time, b[k].time);
            else t = k < a.size() ? a[k].time : b[k].time;
            if (!first || t < first->time) first = EquivalenceReport{false, l, j, t};
        }
        if (first) return *first;
    }
    return {};
}

EquivalenceReport check_equivalence(const NetSpec& event_net, const NetSpec& oracle_net,
                                    std::span<const DeltaStream> inputs) {
    Network net(event_net);
    net.run(inputs);
    std::vector<std::vector<SpikeTrain>> event_trace;
    for (const auto& layer_out : net.trace()) {
        auto& trains = event_trace.emplace_back();
        for (const auto& s : layer_out) trains.push_back(from_delta_words(s));
    }
    return compare_traces(event_trace, dense_simulate(oracle_net, densify(inputs)));
}

} // namespace dtsnn::oracle
