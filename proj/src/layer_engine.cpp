#include "dtsnn/layer_engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace dtsnn {

Layer::Layer(LayerConfig config, std::span<const std::int32_t> weights)
    : config_(std::move(config)), fmt_(config_.width_bits), kernels_(&kernels::active()) {
    config_.params.validate();
    if (config_.n_inputs == 0 || config_.n_neurons == 0) throw std::invalid_argument("layer dimensions must be positive");
    if (config_.n_neurons > std::numeric_limits<std::uint32_t>::max() ||
        config_.n_inputs > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("layer too large");
    if (weights.size() != config_.n_inputs * config_.n_neurons)
        throw std::invalid_argument("weight matrix size does not match layer dimensions");
    if (config_.register_bits && (*config_.register_bits < 2 || *config_.register_bits > 64))
        throw std::invalid_argument("register_bits must be in [2, 64]");

    columns_.resize(weights.size());
    for (std::size_t j = 0; j < config_.n_neurons; ++j)
        for (std::size_t i = 0; i < config_.n_inputs; ++i)
            columns_[i * config_.n_neurons + j] = weights[j * config_.n_inputs + i];

    net_.assign(config_.n_inputs, 0);
    seen_.assign(config_.n_inputs, 0);
    outside_.resize(config_.n_neurons);
    reset();
}

void Layer::reset() {
    lines_.assign(config_.n_inputs, InputLine{});
    potential_.assign(config_.n_neurons, 0);
    accumulator_.assign(config_.n_neurons, 0);
    last_out_.assign(config_.n_neurons, 0);
    outputs_.assign(config_.n_neurons, DeltaStream{config_.width_bits, {}});
    t_curr_ = 0;
    cycles_ = 0;
    events_ = 0;
}

void Layer::integrate(InputLine& line) {
    while (line.head < line.fifo.size()) {
        const DeltaWord w = line.fifo[line.head];
        if (fmt_.is_overflow(w)) {
            line.time += fmt_.overflow_span();
            ++line.head;
            continue;
        }
        line.time += fmt_.magnitude(w);
        line.sign = fmt_.sign(w);
        line.pending = true;
        return;
    }
    line.fifo.clear();
    line.head = 0;
}

void Layer::consume(InputLine& line, Tick expected_time) {
    if (!line.pending || line.time != expected_time)
        throw std::logic_error("event batch does not match the layer's input heads");
    line.pending = false;
    ++line.head;
    integrate(line);
}

void Layer::ingest(std::size_t input, DeltaWord word) {
    if (input >= lines_.size()) throw std::out_of_range("input index out of range");
    if (!fmt_.fits(word)) throw std::invalid_argument("word wider than the layer's word width");
    auto& line = lines_[input];
    line.fifo.push_back(word);
    if (!line.pending) integrate(line);
}

std::optional<EventBatch> Layer::next_event() {
    Tick best = std::numeric_limits<Tick>::max();
    bool found = false;
    for (const auto& line : lines_) {
        if (line.pending && line.time < best) {
            best = line.time;
            found = true;
        }
    }
    if (!found) return std::nullopt;

    EventBatch batch{best, {}};
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        const auto& line = lines_[i];
        if (!line.pending || line.time != best) continue;
        const auto idx = static_cast<std::uint32_t>(i);
        batch.contributions.push_back({idx, line.sign});
        // zero-delta followers belong to the same instant
        for (std::size_t k = line.head + 1; k < line.fifo.size(); ++k) {
            const DeltaWord w = line.fifo[k];
            if (fmt_.is_overflow(w) || fmt_.magnitude(w) != 0) break;
            batch.contributions.push_back({idx, fmt_.sign(w)});
        }
    }
    cycles_ += config_.n_inputs;
    return batch;
}

std::vector<Emission> Layer::process_event(const EventBatch& batch) {
    std::vector<Emission> emissions;
    process(batch, &emissions);
    return emissions;
}

void Layer::process(const EventBatch& batch, std::vector<Emission>* sink) {
    if (batch.time < t_curr_) throw std::logic_error("event batch lies in the past");
    const unsigned shift = decay_shift(config_.params.decay_exp, batch.time - t_curr_);

    touched_.clear();
    for (const auto& c : batch.contributions) {
        if (c.input >= lines_.size()) throw std::out_of_range("contribution input out of range");
        if (!seen_[c.input]) {
            seen_[c.input] = 1;
            touched_.push_back(c.input);
        }
        net_[c.input] += c.sign;
    }
    for (const auto& c : batch.contributions) consume(lines_[c.input], batch.time);

    emissions_ = sink;
    t_curr_ = batch.time;
    if (config_.register_bits) {
        update_checked(batch, shift);
    } else {
        update_vectorized(shift);
    }
    for (const std::uint32_t i : touched_) {
        net_[i] = 0;
        seen_[i] = 0;
    }
    ++events_;

    if (config_.rebase) emit_pending_overflows();
    emissions_ = nullptr;
}

void Layer::update_vectorized(unsigned shift) {
    for (const std::uint32_t i : touched_) {
        if (net_[i] == 0) continue;
        kernels_->accumulate_scaled(accumulator_,
                                    std::span<const std::int32_t>(columns_).subspan(i * config_.n_neurons, config_.n_neurons),
                                    net_[i]);
    }
    const auto& p = config_.params;
    const std::int64_t lo = p.theta_low ? *p.theta_low : std::numeric_limits<std::int64_t>::min();
    const std::size_t n_out = kernels_->decay_add_scan(potential_, accumulator_, shift, lo, p.theta_high, outside_);
    for (std::size_t k = 0; k < n_out; ++k) fire(outside_[k], potential_[outside_[k]]);
}

void Layer::update_checked(const EventBatch& batch, unsigned shift) {
    const int bits = *config_.register_bits;
    for (std::uint32_t j = 0; j < config_.n_neurons; ++j) {
        std::int64_t acc = 0;
        for (const auto& c : batch.contributions) {
            acc += c.sign * static_cast<std::int64_t>(columns_[c.input * config_.n_neurons + j]);
            check_register_width(acc, bits, "weight accumulator");
        }
        const std::int64_t p = (potential_[j] >> shift) + acc;
        check_register_width(p, bits, "neuron potential");
        potential_[j] = p;
        accumulator_[j] = 0;
        fire(j, p);
    }
}

void Layer::fire(std::uint32_t j, std::int64_t pre_reset) {
    const auto r = apply_reset(pre_reset, config_.params);
    potential_[j] = r.potential;
    if (r.fired == 0) return;
    if (observer_) observer_({j, t_curr_, pre_reset, r.potential, r.fired});
    emit_spike(j, r.fired);
}

void Layer::emit_spike(std::uint32_t j, std::int64_t fired) {
    auto& words = outputs_[j].words;
    const std::size_t before = words.size();
    append_event_words(words, fmt_, t_curr_ - last_out_[j], fired);
    last_out_[j] = t_curr_;
    cycles_ += words.size() - before;
    if (emissions_) emissions_->push_back({j, {words.begin() + static_cast<std::ptrdiff_t>(before), words.end()}});
}

void Layer::emit_pending_overflows() {
    const Tick span = fmt_.overflow_span();
    bool any = false;
    for (std::uint32_t j = 0; j < config_.n_neurons; ++j) {
        const std::size_t n = append_overflow_words(outputs_[j].words, fmt_, t_curr_ - last_out_[j]);
        if (n == 0) continue;
        any = true;
        last_out_[j] += static_cast<Tick>(n) * span;
        cycles_ += n;
        if (emissions_) emissions_->push_back({j, std::vector<DeltaWord>(n, fmt_.overflow())});
    }
    if (!any) return;

    Tick floor = t_curr_;
    for (const Tick t : last_out_) floor = std::min(floor, t);
    rebase(floor);
}

void Layer::finish() {
    Tick end = t_curr_;
    for (const auto& line : lines_) {
        if (line.pending) throw std::logic_error("finish() with undrained inputs");
        end = std::max(end, line.time);
    }
    const Tick span = fmt_.overflow_span();
    for (std::size_t j = 0; j < config_.n_neurons; ++j) {
        const std::size_t n = append_overflow_words(outputs_[j].words, fmt_, end - last_out_[j]);
        last_out_[j] += static_cast<Tick>(n) * span;
        cycles_ += n;
    }
}

std::vector<DeltaStream> Layer::run(std::span<const DeltaStream> inputs) {
    if (inputs.size() != config_.n_inputs)
        throw std::invalid_argument("expected " + std::to_string(config_.n_inputs) + " input streams, got " +
                                    std::to_string(inputs.size()));
    for (const auto& s : inputs)
        if (s.width_bits != config_.width_bits) throw std::invalid_argument("input stream width mismatch");

    reset();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (const DeltaWord w : inputs[i].words)
            if (!fmt_.fits(w)) throw std::invalid_argument("word wider than the layer's word width");
        lines_[i].fifo = inputs[i].words;
        integrate(lines_[i]);
    }
    while (auto batch = next_event()) process(*batch, nullptr);
    finish();
    return outputs_;
}

void Layer::rebase(Tick span) {
    if (span < 0) throw std::invalid_argument("rebase span must be non-negative");
    Tick floor = t_curr_;
    for (const auto& line : lines_)
        if (line.pending) floor = std::min(floor, line.time);
    for (const Tick t : last_out_) floor = std::min(floor, t);
    if (span > floor) throw std::invalid_argument("rebase span exceeds the smallest time register");

    t_curr_ -= span;
    for (auto& line : lines_) line.time -= span;
    for (auto& t : last_out_) t -= span;
}

Layer::InputView Layer::input(std::size_t i) const {
    const auto& line = lines_.at(i);
    return {line.time, line.pending, line.sign, line.fifo.size() - line.head};
}

NeuronState Layer::neuron(std::size_t j) const {
    if (j >= config_.n_neurons) throw std::out_of_range("neuron index out of range");
    NeuronState s;
    s.potential = potential_[j];
    s.accumulator = accumulator_[j];
    s.last_out_time = last_out_[j];
    s.weights.resize(config_.n_inputs);
    for (std::size_t i = 0; i < config_.n_inputs; ++i) s.weights[i] = columns_[i * config_.n_neurons + j];
    return s;
}

} // namespace dtsnn
