#pragma once

// netspec.json:
//   {"width_bits": 8, "repetitions": 28,
//    "layers": [{"n_inputs", "n_neurons", "decay_exp", "theta_high",
//                "theta_low" (nullable), "weight_scale", "weights": [[...]],
//                "weights_float": [[...]] (optional)}]}
// A layer with only "weights_float" keeps its thresholds in float units.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dtsnn/network.hpp"

namespace dtsnn {

NetSpec netspec_from_json(const nlohmann::json& j);
nlohmann::json netspec_to_json(const NetSpec& spec, bool include_float = false);

NetSpec load_netspec(const std::filesystem::path& path);
void save_netspec(const NetSpec& spec, const std::filesystem::path& path, bool include_float = false);

/// Loads a spec ready to run: integer weights as stored, unless `bits` is
/// given (or no integer weights exist), in which case float weights are
/// quantized at `bits` (default 8).
NetSpec load_runnable_netspec(const std::filesystem::path& path, std::optional<int> bits);

} // namespace dtsnn
