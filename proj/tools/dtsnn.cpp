// dtsnn: command-line front end for the differential-time SNN simulator.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dtsnn/dataset_io.hpp"
#include "dtsnn/evaluation.hpp"
#include "dtsnn/fuzz.hpp"
#include "dtsnn/kernels.hpp"
#include "dtsnn/netspec_io.hpp"
#include "dtsnn/network.hpp"
#include "dtsnn/oracle.hpp"
#include "dtsnn/quantization.hpp"
#include "dtsnn/stream_file.hpp"

namespace {

using namespace dtsnn;

struct DataArgs {
    std::string images;
    std::string labels;
    std::size_t limit = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--images", images, "IDX image file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--labels", labels, "IDX label file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--limit", limit, "Use only the first N images (0 = all)");
    }

    LabeledImageSet load() const {
        auto set = load_idx(images, labels);
        return limit ? take(set, limit) : set;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

int cmd_encode(const DataArgs& data, double theta, int reps, int width, bool text, const std::string& out_path) {
    const auto set = data.load();
    std::vector<DeltaStream> channels;
    channels.reserve(set.size() * set.pixels_per_image());
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto streams = present_input(encode_image(set.image(i), theta), reps, width);
        for (auto& s : streams) channels.push_back(std::move(s));
    }
    if (text) {
        auto out = open_out(out_path);
        write_text_streams(out, channels);
    } else {
        write_dts_file(out_path, channels);
    }
    std::printf("encoded %zu images into %zu channels -> %s\n", set.size(), channels.size(), out_path.c_str());
    return 0;
}

int cmd_infer(const std::string& net_path, const DataArgs& data, int reps, std::optional<int> bits, double theta,
              unsigned threads, const std::string& report) {
    const auto spec = load_runnable_netspec(net_path, bits);
    const auto set = data.load();
    const auto t0 = std::chrono::steady_clock::now();
    const auto summary = evaluate(spec, set, {theta, reps, threads});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!report.empty()) {
        auto out = open_out(report);
        write_inference_csv(out, summary);
    }
    std::printf("accuracy %.4f%% (%zu/%zu), mean cycles %.1f, %.2f s [%s kernels]\n", 100.0 * summary.accuracy(),
                summary.correct, summary.images.size(), summary.mean_cycles(), secs,
                std::string(kernels::active().name).c_str());
    return 0;
}

int cmd_quantize(const std::string& net_path, int bits, const std::string& out_path) {
    const auto q = quantize_netspec(load_netspec(net_path), bits);
    save_netspec(q, out_path);
    for (std::size_t l = 0; l < q.layers.size(); ++l)
        std::printf("layer %zu: scale %lld, theta_high %lld\n", l, static_cast<long long>(q.layers[l].weight_scale),
                    static_cast<long long>(q.layers[l].theta_high));
    return 0;
}

int cmd_sweep(const std::string& net_path, const DataArgs& data, const std::vector<int>& bits, double theta,
              unsigned threads, const std::string& out_path) {
    const auto spec = load_netspec(net_path);
    const auto rows = sweep(spec, data.load(), bits, {theta, 0, threads});
    auto out = open_out(out_path);
    write_sweep_csv(out, rows);
    write_sweep_csv(std::cout, rows);
    return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, const fuzz::Limits& limits) {
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto c = fuzz::random_case(rng, limits);
        const auto report = oracle::check_equivalence(c.net, c.inputs);
        if (!report.equivalent) {
            ++failures;
            std::printf("trial %zu: %s\n", k, report.describe().c_str());
        }
    }
    std::printf("verify: %zu/%zu trials equivalent (seed %llu)\n", trials - failures, trials,
                static_cast<unsigned long long>(seed));
    return failures == 0 ? 0 : 1;
}

int cmd_cycles(const std::string& net_path, const DataArgs& data, std::optional<int> bits, double theta,
               unsigned threads) {
    const auto spec = load_runnable_netspec(net_path, bits);
    const auto summary = evaluate(spec, data.load(), {theta, 0, threads});
    std::printf("index,events,cycles\n");
    for (const auto& im : summary.images)
        std::printf("%zu,%llu,%llu\n", im.index, static_cast<unsigned long long>(im.events),
                    static_cast<unsigned long long>(im.cycles));
    std::printf("mean cycles per image: %.1f over %zu images\n", summary.mean_cycles(), summary.images.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-driven simulator for differential-time-encoded spiking networks"};
    app.require_subcommand(1);

    std::string kernel_name;
    app.add_option("--kernels", kernel_name, "Force a kernel variant (scalar, avx2, avx512)");

    double theta = kDefaultEncodingThreshold;
    unsigned threads = 0;

    auto* encode = app.add_subcommand("encode", "Delta-encode images into input streams");
    DataArgs encode_data;
    encode_data.add_to(encode);
    std::string encode_out;
    int encode_reps = 28;
    int encode_width = 8;
    bool encode_text = false;
    encode->add_option("--theta", theta, "Encoding threshold")->check(CLI::PositiveNumber);
    encode->add_option("--reps", encode_reps, "Presentations per image")->check(CLI::Range(1, 1 << 20));
    encode->add_option("--width", encode_width, "Word width in bits")->check(CLI::Range(3, 16));
    encode->add_flag("--text", encode_text, "Write the text debug format instead of DTS1");
    encode->add_option("--out", encode_out, "Output file")->required();

    auto* infer = app.add_subcommand("infer", "Classify images and report accuracy");
    DataArgs infer_data;
    infer_data.add_to(infer);
    std::string infer_net, infer_report;
    int infer_reps = 0;
    std::optional<int> infer_bits;
    infer->add_option("--net", infer_net, "netspec.json")->required()->check(CLI::ExistingFile);
    infer->add_option("--reps", infer_reps, "Presentations per image (default: netspec value)");
    infer->add_option("--bits", infer_bits, "Quantize float weights at this width");
    infer->add_option("--theta", theta, "Encoding threshold")->check(CLI::PositiveNumber);
    infer->add_option("--threads", threads, "Worker threads (0 = all cores)");
    infer->add_option("--report", infer_report, "Per-image CSV report");

    auto* quantize = app.add_subcommand("quantize", "Quantize float weights to an integer netspec");
    std::string quant_net, quant_out;
    int quant_bits = kDefaultWeightBits;
    quantize->add_option("--net", quant_net, "netspec.json with weights_float")->required()->check(CLI::ExistingFile);
    quantize->add_option("--bits", quant_bits, "Weight bit width")->required()->check(CLI::Range(2, 16));
    quantize->add_option("--out", quant_out, "Output netspec")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy versus weight bit width");
    DataArgs sweep_data;
    sweep_data.add_to(sweep_cmd);
    std::string sweep_net, sweep_out;
    std::vector<int> sweep_bits{4, 5, 6, 7, 8, 9};
    sweep_cmd->add_option("--net", sweep_net, "netspec.json with weights_float")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--bits", sweep_bits, "Comma-separated bit widths")->delimiter(',');
    sweep_cmd->add_option("--theta", theta, "Encoding threshold")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sweep_cmd->add_option("--out", sweep_out, "Output CSV")->required();

    auto* verify = app.add_subcommand("verify", "Fuzz the event engine against the dense oracle");
    std::uint64_t verify_seed = 1;
    std::size_t verify_trials = 500;
    fuzz::Limits limits;
    verify->add_option("--seed", verify_seed, "RNG seed");
    verify->add_option("--trials", verify_trials, "Number of random cases");
    verify->add_option("--max-inputs", limits.max_inputs, "Largest input layer")->check(CLI::Range(3, 4096));
    verify->add_option("--max-neurons", limits.max_neurons, "Largest layer")->check(CLI::Range(2, 4096));
    verify->add_option("--max-spikes", limits.max_spikes, "Input spikes per case");
    verify->add_option("--widths", limits.widths, "Word widths to draw from")->delimiter(',')->check(CLI::Range(3, 16));

    auto* cycles = app.add_subcommand("cycles", "Estimated processing cycles per image");
    DataArgs cycles_data;
    cycles_data.add_to(cycles);
    std::string cycles_net;
    std::optional<int> cycles_bits;
    cycles->add_option("--net", cycles_net, "netspec.json")->required()->check(CLI::ExistingFile);
    cycles->add_option("--bits", cycles_bits, "Quantize float weights at this width");
    cycles->add_option("--theta", theta, "Encoding threshold")->check(CLI::PositiveNumber);
    cycles->add_option("--threads", threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!kernel_name.empty()) kernels::select(kernel_name);
        if (*encode) return cmd_encode(encode_data, theta, encode_reps, encode_width, encode_text, encode_out);
        if (*infer) return cmd_infer(infer_net, infer_data, infer_reps, infer_bits, theta, threads, infer_report);
        if (*quantize) return cmd_quantize(quant_net, quant_bits, quant_out);
        if (*sweep_cmd) return cmd_sweep(sweep_net, sweep_data, sweep_bits, theta, threads, sweep_out);
        if (*verify) {
            limits.min_inputs = std::min(limits.min_inputs, limits.max_inputs);
            limits.min_neurons = std::min(limits.min_neurons, limits.max_neurons);
            return cmd_verify(verify_seed, verify_trials, limits);
        }
        if (*cycles) return cmd_cycles(cycles_net, cycles_data, cycles_bits, theta, threads);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dtsnn: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
