#pragma once

// Batch inference over a labeled image set, and the weight bit-width sweep.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dtsnn/dataset_io.hpp"
#include "dtsnn/network.hpp"

namespace dtsnn {

struct EvalOptions {
    double encoding_threshold = kDefaultEncodingThreshold;
    int repetitions = 0;  ///< 0: use the netspec's value
    unsigned threads = 0; ///< 0: hardware concurrency
};

struct ImageOutcome {
    std::size_t index = 0;
    int label = 0;
    std::size_t predicted = 0;
    std::uint64_t events = 0;
    std::uint64_t cycles = 0;
};

struct EvalSummary {
    std::vector<ImageOutcome> images;
    std::size_t correct = 0;

    double accuracy() const { return images.empty() ? 0.0 : static_cast<double>(correct) / images.size(); }
    double mean_cycles() const;
};

/// Encodes every image, runs it through its own network instance per worker
/// and classifies. Results are independent of the thread count.
EvalSummary evaluate(const NetSpec& spec, const LabeledImageSet& data, const EvalOptions& options = {});

struct SweepRow {
    int bits = 0;
    double accuracy = 0.0;
    std::size_t images = 0;
    std::size_t errors = 0; ///< misclassified images
};

/// Quantizes the float weights at each bit width and evaluates. Throws
/// std::invalid_argument if any layer lacks float weights.
std::vector<SweepRow> sweep(const NetSpec& float_spec, const LabeledImageSet& data, std::span<const int> bits,
                            const EvalOptions& options = {});

/// Header `bits,accuracy,images,errors`.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Header `index,label,predicted,correct,events,cycles`.
void write_inference_csv(std::ostream& out, const EvalSummary& summary);

} // namespace dtsnn
