#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "dtsnn/evaluation.hpp"
#include "dtsnn/netspec_io.hpp"
#include "dtsnn/quantization.hpp"
#include "dtsnn/stream_file.hpp"

using namespace dtsnn;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Fixture {
public:
    Fixture() {
        fs::remove_all(dir_);
        fs::create_directories(dir_);

        std::mt19937_64 rng(501);
        set_.rows = set_.cols = 4;
        for (std::size_t k = 0; k < 12; ++k) {
            for (std::size_t p = 0; p < 16; ++p) set_.pixels.push_back((rng() % 256) / 255.0);
            set_.labels.push_back(static_cast<std::uint8_t>(k % 3));
        }
        save_idx(set_, images(), labels());

        LayerSpec L;
        L.n_inputs = 16;
        L.n_neurons = 3;
        FloatWeights fw;
        fw.theta_high = 1.0;
        fw.theta_low = -1.0;
        std::uniform_real_distribution<double> u(-0.8, 0.8);
        for (int k = 0; k < 48; ++k) fw.weights.push_back(u(rng));
        L.real = fw;
        float_net_.repetitions = 5;
        float_net_.layers.push_back(L);
        save_netspec(float_net_, float_net(), true);
    }
    ~Fixture() { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }
    fs::path images() const { return path("images.idx"); }
    fs::path labels() const { return path("labels.idx"); }
    fs::path float_net() const { return path("float.json"); }
    const LabeledImageSet& set() const { return set_; }
    const NetSpec& float_spec() const { return float_net_; }

    Run run(const std::string& args) const {
        const auto out = path("stdout.txt"), err = path("stderr.txt");
        const std::string cmd = std::string(DTSNN_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int raw = std::system(cmd.c_str());
        Run r;
        r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    std::string data_args() const { return "--images " + images().string() + " --labels " + labels().string(); }

private:
    fs::path dir_ = fs::temp_directory_path() / "dtsnn_test_cli";
    LabeledImageSet set_;
    NetSpec float_net_;
};

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("encode writes DTS1 and text streams") {
    const Fixture fx;
    auto r = fx.run("encode " + fx.data_args() + " --theta 0.05 --reps 3 --out " + fx.path("s.dts").string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("encoded 12 images into 192 channels") != std::string::npos);

    const auto channels = read_dts_file(fx.path("s.dts"));
    REQUIRE(channels.size() == 12 * 16);
    for (std::size_t k = 0; k < 12; ++k) {
        const auto expected = present_input(encode_image(fx.set().image(k)), 3, 8);
        for (std::size_t p = 0; p < 16; ++p) CHECK(channels[k * 16 + p] == expected[p]);
    }

    r = fx.run("encode " + fx.data_args() + " --reps 3 --width 4 --text --limit 2 --out " + fx.path("s.txt").string());
    REQUIRE(r.status == 0);
    std::ifstream in(fx.path("s.txt"));
    const auto text = read_text_streams(in, 4);
    REQUIRE(text.size() == 32);
    CHECK(text[5] == present_input(encode_image(fx.set().image(0)), 3, 4)[5]);
}

TEST_CASE("infer and cycles report per-image results") {
    const Fixture fx;
    const auto report = fx.path("report.csv");
    auto r = fx.run("infer --net " + fx.float_net().string() + " " + fx.data_args() + " --bits 6 --threads 2 --report " +
                    report.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("accuracy") != std::string::npos);

    const auto spec = quantize_netspec(fx.float_spec(), 6);
    const auto summary = evaluate(spec, fx.set(), {kDefaultEncodingThreshold, 0, 1});
    std::ostringstream expected;
    write_inference_csv(expected, summary);
    CHECK(slurp(report) == expected.str());

    // kernel choice does not change results
    r = fx.run("--kernels scalar infer --net " + fx.float_net().string() + " " + fx.data_args() +
               " --bits 6 --report " + report.string());
    REQUIRE(r.status == 0);
    CHECK(slurp(report) == expected.str());

    r = fx.run("cycles --net " + fx.float_net().string() + " " + fx.data_args() + " --bits 6");
    REQUIRE(r.status == 0);
    const auto out = lines(r.out);
    REQUIRE(out.size() == 14);
    CHECK(out[0] == "index,events,cycles");
    CHECK(out[1] == "0," + std::to_string(summary.images[0].events) + "," + std::to_string(summary.images[0].cycles));
    CHECK(out[13].starts_with("mean cycles per image:"));
}

TEST_CASE("quantize and sweep") {
    const Fixture fx;
    auto r = fx.run("quantize --net " + fx.float_net().string() + " --bits 6 --out " + fx.path("q6.json").string());
    REQUIRE(r.status == 0);
    const auto q = load_netspec(fx.path("q6.json"));
    const auto expected = quantize_netspec(fx.float_spec(), 6);
    CHECK(q.layers[0].weights == expected.layers[0].weights);
    CHECK(q.layers[0].weight_scale == expected.layers[0].weight_scale);
    CHECK(q.layers[0].theta_high == expected.layers[0].theta_high);
    CHECK(q.layers[0].theta_low == expected.layers[0].theta_low);

    // the quantized spec runs as stored
    const auto report = fx.path("r.csv");
    r = fx.run("infer --net " + fx.path("q6.json").string() + " " + fx.data_args() + " --report " + report.string());
    REQUIRE(r.status == 0);
    std::ostringstream inf;
    write_inference_csv(inf, evaluate(expected, fx.set()));
    CHECK(slurp(report) == inf.str());

    r = fx.run("sweep --net " + fx.float_net().string() + " " + fx.data_args() + " --bits 4,6 --out " +
               fx.path("t.csv").string());
    REQUIRE(r.status == 0);
    const std::vector<int> bits{4, 6};
    std::ostringstream csv;
    write_sweep_csv(csv, sweep(fx.float_spec(), fx.set(), bits));
    CHECK(slurp(fx.path("t.csv")) == csv.str());
    CHECK(r.out == csv.str());

    // integer-only spec has nothing to sweep
    r = fx.run("sweep --net " + fx.path("q6.json").string() + " " + fx.data_args() + " --out " +
               fx.path("bad.csv").string());
    CHECK(r.status == 1);
    CHECK(r.err.starts_with("dtsnn: error:"));
}

TEST_CASE("verify fuzzes the engine against the oracle") {
    const Fixture fx;
    const auto r = fx.run("verify --seed 3 --trials 40 --widths 3,5");
    CHECK(r.status == 0);
    CHECK(r.out == "verify: 40/40 trials equivalent (seed 3)\n");
}

TEST_CASE("errors produce a one-line diagnostic and a non-zero exit") {
    const Fixture fx;
    std::ofstream(fx.path("junk.idx"), std::ios::binary) << "nonsense";
    auto r = fx.run("infer --net " + fx.float_net().string() + " --images " + fx.path("junk.idx").string() +
                    " --labels " + fx.labels().string());
    CHECK(r.status == 1);
    CHECK(r.err.starts_with("dtsnn: error:"));
    CHECK(r.err.find("bad magic") != std::string::npos);
    CHECK(lines(r.err).size() == 1);

    r = fx.run("infer --net " + fx.path("missing.json").string() + " " + fx.data_args());
    CHECK(r.status != 0);

    r = fx.run("frobnicate");
    CHECK(r.status != 0);

    r = fx.run("--kernels sse9 verify --trials 1");
    CHECK(r.status == 1);
    CHECK(r.err.starts_with("dtsnn: error:"));
}
