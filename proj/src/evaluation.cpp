#include "dtsnn/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dtsnn/quantization.hpp"

namespace dtsnn {

double EvalSummary::mean_cycles() const {
    if (images.empty()) return 0.0;
    double total = 0.0;
    for (const auto& im : images) total += static_cast<double>(im.cycles);
    return total / static_cast<double>(images.size());
}

EvalSummary evaluate(const NetSpec& spec, const LabeledImageSet& data, const EvalOptions& options) {
    if (data.pixels_per_image() != spec.n_inputs())
        throw std::invalid_argument("image size " + std::to_string(data.pixels_per_image()) +
                                    " does not match network inputs " + std::to_string(spec.n_inputs()));
    const int reps = options.repetitions > 0 ? options.repetitions : spec.repetitions;

    EvalSummary summary;
    summary.images.resize(data.size());

    unsigned n_threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(1, data.size())));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        try {
            Network net(spec);
            for (std::size_t i = next++; i < data.size(); i = next++) {
                const auto q = encode_image(data.image(i), options.encoding_threshold);
                const auto inputs = present_input(q, reps, spec.width_bits);
                const auto r = net.run(inputs);
                summary.images[i] = {i, data.labels[i], r.label, r.total_events, r.total_cycles};
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = data.size();
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    for (const auto& im : summary.images)
        if (im.predicted == static_cast<std::size_t>(im.label)) ++summary.correct;
    return summary;
}

std::vector<SweepRow> sweep(const NetSpec& float_spec, const LabeledImageSet& data, std::span<const int> bits,
                            const EvalOptions& options) {
    for (std::size_t l = 0; l < float_spec.layers.size(); ++l)
        if (!float_spec.layers[l].real) throw std::invalid_argument("missing float weights in layer " + std::to_string(l));

    std::vector<SweepRow> rows;
    for (const int b : bits) {
        const auto summary = evaluate(quantize_netspec(float_spec, b), data, options);
        rows.push_back({b, summary.accuracy(), summary.images.size(), summary.images.size() - summary.correct});
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "bits,accuracy,images,errors\n";
    for (const auto& r : rows)
        out << r.bits << ',' << std::fixed << std::setprecision(6) << r.accuracy << std::defaultfloat << ','
            << r.images << ',' << r.errors << '\n';
}

void write_inference_csv(std::ostream& out, const EvalSummary& summary) {
    out << "index,label,predicted,correct,events,cycles\n";
    for (const auto& im : summary.images)
        out << im.index << ',' << im.label << ',' << im.predicted << ','
            << (im.predicted == static_cast<std::size_t>(im.label) ? 1 : 0) << ',' << im.events << ',' << im.cycles
            << '\n';
}

} // namespace dtsnn
