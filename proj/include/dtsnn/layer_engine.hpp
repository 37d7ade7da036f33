#pragma once

// Event-driven model of one fully connected layer.
//
// Each input line owns a FIFO of delta words and an integrator that turns the
// differences back into absolute time. A min-scan over the integrators finds
// the next input event; every neuron accumulates the weights of all spikes
// sharing that time, decays by the elapsed time and applies reset-to-mod.
// Firing neurons append differential-time words to their output stream.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dtsnn/kernels.hpp"
#include "dtsnn/neuron_core.hpp"
#include "dtsnn/spike_codec.hpp"

namespace dtsnn {

struct LayerConfig {
    std::size_t n_inputs = 0;
    std::size_t n_neurons = 0;
    NeuronParams params;
    int width_bits = 8;

    /// Bounded-register mode: overflow words are emitted as soon as a
    /// neuron's silence reaches one overflow span, and all time registers
    /// are rebased after every such emission.
    bool rebase = false;

    /// When set, accumulators and pre-reset potentials are checked against a
    /// signed register of this width (std::overflow_error on violation). The
    /// check runs on the scalar path.
    std::optional<int> register_bits;
};

struct Contribution {
    std::uint32_t input = 0;
    int sign = +1;

    friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct EventBatch {
    Tick time = 0;
    std::vector<Contribution> contributions;
};

struct Emission {
    std::uint32_t neuron = 0;
    std::vector<DeltaWord> words;
};

/// Reported for every neuron whose pre-reset potential left the threshold band.
struct FireRecord {
    std::uint32_t neuron = 0;
    Tick time = 0;
    std::int64_t pre_reset = 0;
    std::int64_t post_reset = 0;
    std::int64_t fired = 0;
};

class Layer {
public:
    /// `weights` is row-major [neuron][input].
    Layer(LayerConfig config, std::span<const std::int32_t> weights);

    const LayerConfig& config() const { return config_; }

    /// Returns all dynamic state to power-on values. Weights are kept.
    void reset();

    void ingest(std::size_t input, DeltaWord word);
    std::optional<EventBatch> next_event();
    std::vector<Emission> process_event(const EventBatch& batch);

    /// Appends trailing overflow words so every output covers the input span.
    /// All inputs must be drained.
    void finish();

    /// reset(), ingest everything, drain, finish. Returns one stream per neuron.
    std::vector<DeltaStream> run(std::span<const DeltaStream> inputs);

    /// Subtracts `span` from the time register, all integrators and all
    /// last-output registers.
    void rebase(Tick span);

    std::uint64_t cycle_estimate() const { return cycles_; }
    std::uint64_t events_processed() const { return events_; }

    Tick current_time() const { return t_curr_; }

    struct InputView {
        Tick time = 0;
        bool pending = false;
        int sign = +1;
        std::size_t queued = 0;
    };
    InputView input(std::size_t i) const;

    NeuronState neuron(std::size_t j) const;
    void set_potential(std::size_t j, std::int64_t p) { potential_.at(j) = p; }

    const std::vector<DeltaStream>& outputs() const { return outputs_; }

    void set_fire_observer(std::function<void(const FireRecord&)> observer) { observer_ = std::move(observer); }
    void set_kernels(const kernels::KernelSet& k) { kernels_ = &k; }

private:
    struct InputLine {
        std::vector<DeltaWord> fifo;
        std::size_t head = 0; ///< first word not yet consumed
        Tick time = 0;        ///< integrated time, including the head word when pending
        bool pending = false; ///< head is an integrated data word
        int sign = +1;
    };

    void process(const EventBatch& batch, std::vector<Emission>* sink);
    void integrate(InputLine& line);
    void consume(InputLine& line, Tick expected_time);
    void update_vectorized(unsigned shift);
    void update_checked(const EventBatch& batch, unsigned shift);
    void fire(std::uint32_t j, std::int64_t pre_reset);
    void emit_spike(std::uint32_t j, std::int64_t fired);
    void emit_pending_overflows();

    LayerConfig config_;
    WordFormat fmt_;
    const kernels::KernelSet* kernels_;

    std::vector<std::int32_t> columns_; ///< [input][neuron]

    std::vector<InputLine> lines_;
    std::vector<std::int64_t> potential_;
    std::vector<std::int64_t> accumulator_;
    std::vector<Tick> last_out_;
    std::vector<DeltaStream> outputs_;
    Tick t_curr_ = 0;
    std::uint64_t cycles_ = 0;
    std::uint64_t events_ = 0;

    // per-event scratch
    std::vector<std::int64_t> net_;
    std::vector<char> seen_;
    std::vector<std::uint32_t> touched_;
    std::vector<std::uint32_t> outside_;
    std::vector<Emission>* emissions_ = nullptr;

    std::function<void(const FireRecord&)> observer_;
};

} // namespace dtsnn
