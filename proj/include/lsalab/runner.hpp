#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lsalab {

struct RunOptions {
    std::string config_path;
    std::vector<std::string> overrides; // dotted key=value pairs
    std::string out_path;               // overrides config "out"
    long long replicas = 0;             // > 0 overrides config
    std::uint64_t seed = 0;             // nonzero overrides config
    bool seed_set = false;
    int threads = 0;
};

/// Loads, applies overrides, validates. Throws ConfigError on any problem;
/// unknown keys are rejected by name.
nlohmann::json load_experiment_config(const RunOptions& opts);

/// Runs the experiment described by a validated config. Returns the process
/// exit code contract: 0 success, 2 invariant violation, 3 config error.
int run_experiment(const nlohmann::json& config, const RunOptions& opts);

} // namespace lsalab
