#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "botsim/engine.hpp"
#include "botsim/experiments.hpp"

namespace botsim::cli {

/// Flat JSON document: every SimParams field by name (network fields as
/// network_model, k, beta) plus experiment, replications, base_seed, jobs
/// and out. Missing keys keep their defaults; unknown keys are errors.
struct CliConfig {
    SimParams params{};
    std::optional<ExperimentId> experiment;
    std::size_t replications = 15;
    std::uint64_t base_seed = 0;
    std::size_t jobs = 1;
    std::filesystem::path out = ".";
};

/// Throws ParameterError naming the offending key.
CliConfig parse_config(const nlohmann::json& doc);
CliConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json params_to_json(const SimParams& p);

}  // namespace botsim::cli
