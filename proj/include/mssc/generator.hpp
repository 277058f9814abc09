#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mssc/core.hpp"
#include "mssc/oracles.hpp"

namespace mssc {

enum class GeneratorKind {
    UniformRandom,
    ZipfPopularity,
    DriftingPreferences,
    AdversarialHotSwap,
    FromFile,
};

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

struct ExperimentConfig {
    GeneratorKind generator = GeneratorKind::UniformRandom;
    int n_raw = 7;
    int m = 8;
    int r = 2;
    std::uint64_t master_seed = 1;
    int trials = 1;
    // Runs per trial for randomized algorithms; deterministic algorithms and
    // oracles run once per trial.
    int seeds_per_trial = 1;
    std::vector<std::string> algorithms = {"wrapped-lma", "mae", "mtf"};
    std::vector<std::string> oracles = {"mssc-dp"};
    OracleLimits limits;
    int drift_period = 8;  // drifting-preferences hot-set refresh interval
    // List algorithms are measured against the dynamic optimum by default;
    // set to compare against the static optimum instead (requires the
    // "static" oracle).
    bool ratio_vs_static = false;
    std::vector<std::string> instance_files;  // from-file generator
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

// Deterministic function of (config.master_seed, trial).
Instance generate_instance(const ExperimentConfig& config, int trial);

}  // namespace mssc
