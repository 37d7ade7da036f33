#include "dtsnn/netspec_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "dtsnn/quantization.hpp"

namespace dtsnn {
namespace {

using nlohmann::json;

template <typename T>
std::vector<T> read_matrix(const json& rows, std::size_t n_rows, std::size_t n_cols, const char* name) {
    if (!rows.is_array() || rows.size() != n_rows)
        throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n_rows) + " rows");
    std::vector<T> out;
    out.reserve(n_rows * n_cols);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n_cols)
            throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n_cols) + " columns");
        for (const auto& v : row) {
            if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw std::invalid_argument(std::string(name) + ": non-integer entry");
            } else {
                if (!v.is_number()) throw std::invalid_argument(std::string(name) + ": non-numeric entry");
            }
            out.push_back(v.get<T>());
        }
    }
    if constexpr (!std::is_integral_v<T>) {
        for (const T v : out)
            if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + ": non-finite entry");
    }
    return out;
}

template <typename T>
json write_matrix(const std::vector<T>& m, std::size_t n_rows, std::size_t n_cols) {
    json rows = json::array();
    for (std::size_t r = 0; r < n_rows; ++r)
        rows.push_back(std::vector<T>(m.begin() + static_cast<std::ptrdiff_t>(r * n_cols),
                                      m.begin() + static_cast<std::ptrdiff_t>((r + 1) * n_cols)));
    return rows;
}

} // namespace

NetSpec netspec_from_json(const json& j) {
    NetSpec spec;
    spec.width_bits = j.value("width_bits", 8);
    spec.repetitions = j.value("repetitions", 28);
    if (!j.contains("layers") || !j.at("layers").is_array()) throw std::invalid_argument("netspec: missing layers");

    for (const auto& jl : j.at("layers")) {
        LayerSpec L;
        L.n_inputs = jl.at("n_inputs").get<std::size_t>();
        L.n_neurons = jl.at("n_neurons").get<std::size_t>();
        L.decay_exp = jl.value("decay_exp", 1);
        L.weight_scale = jl.value("weight_scale", std::int64_t{1});

        const bool has_int = jl.contains("weights") && !jl.at("weights").is_null();
        const bool has_float = jl.contains("weights_float") && !jl.at("weights_float").is_null();
        const bool has_low = jl.contains("theta_low") && !jl.at("theta_low").is_null();

        if (has_int) {
            L.weights = read_matrix<std::int32_t>(jl.at("weights"), L.n_neurons, L.n_inputs, "weights");
            if (!jl.at("theta_high").is_number_integer())
                throw std::invalid_argument("netspec: integer layer needs an integer theta_high");
            L.theta_high = jl.at("theta_high").get<std::int64_t>();
            if (has_low) L.theta_low = jl.at("theta_low").get<std::int64_t>();
        }
        if (has_float) {
            FloatWeights fw;
            fw.weights = read_matrix<double>(jl.at("weights_float"), L.n_neurons, L.n_inputs, "weights_float");
            if (has_int) {
                fw.theta_high = static_cast<double>(L.theta_high) / static_cast<double>(L.weight_scale);
                if (L.theta_low) fw.theta_low = static_cast<double>(*L.theta_low) / static_cast<double>(L.weight_scale);
            } else {
                fw.theta_high = jl.value("theta_high", 1.0);
                if (has_low) fw.theta_low = jl.at("theta_low").get<double>();
            }
            L.real = std::move(fw);
        }
        if (!has_int && !has_float) throw std::invalid_argument("netspec: layer has neither weights nor weights_float");
        spec.layers.push_back(std::move(L));
    }
    spec.validate(false);
    return spec;
}

json netspec_to_json(const NetSpec& spec, bool include_float) {
    json j;
    j["width_bits"] = spec.width_bits;
    j["repetitions"] = spec.repetitions;
    j["layers"] = json::array();
    for (const auto& L : spec.layers) {
        json jl;
        jl["n_inputs"] = L.n_inputs;
        jl["n_neurons"] = L.n_neurons;
        jl["decay_exp"] = L.decay_exp;
        if (L.has_integer_weights()) {
            jl["theta_high"] = L.theta_high;
            jl["theta_low"] = L.theta_low ? json(*L.theta_low) : json(nullptr);
            jl["weight_scale"] = L.weight_scale;
            jl["weights"] = write_matrix(L.weights, L.n_neurons, L.n_inputs);
        } else if (L.real) {
            jl["theta_high"] = L.real->theta_high;
            jl["theta_low"] = L.real->theta_low ? json(*L.real->theta_low) : json(nullptr);
        }
        if (L.real && (include_float || !L.has_integer_weights()))
            jl["weights_float"] = write_matrix(L.real->weights, L.n_neurons, L.n_inputs);
        j["layers"].push_back(std::move(jl));
    }
    return j;
}

NetSpec load_netspec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return netspec_from_json(j);
}

void save_netspec(const NetSpec& spec, const std::filesystem::path& path, bool include_float) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << netspec_to_json(spec, include_float).dump() << '\n';
}

NetSpec load_runnable_netspec(const std::filesystem::path& path, std::optional<int> bits) {
    NetSpec spec = load_netspec(path);
    bool all_int = true;
    for (const auto& L : spec.layers) all_int = all_int && L.has_integer_weights();
    if (!bits && all_int) return spec;
    return quantize_netspec(spec, bits.value_or(kDefaultWeightBits));
}

} // namespace dtsnn
