#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mssc/analysis.hpp"
#include "mssc/generator.hpp"

namespace mssc {

struct RunOptions {
    std::string out_dir;         // empty: no files written
    std::string format = "csv";  // "csv" or "jsonl" (csv plus step traces)
    unsigned jobs = 0;           // 0: hardware concurrency
};

struct AlgoRow {
    int trial = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    Cost access = 0;
    Cost reorder = 0;
    std::optional<Cost> opt_total;  // oracle total this algorithm is measured against
    std::optional<double> ratio;
};

struct AlgoSummary {
    std::string algorithm;
    int trials = 0;
    int rows = 0;
    bool has_ratio = false;
    double mean_ratio = 0;  // mean over trials of (mean seed cost / opt)
    double max_ratio = 0;
    double q50 = 0, q90 = 0, qmax = 0;  // per-seed ratio quantiles
};

struct TrialOptima {
    int trial = 0;
    std::optional<Cost> mssc_dp;
    std::optional<Cost> ec_dp;
    std::optional<Cost> mssc_static;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<AlgoRow> rows;
    std::vector<AlgoSummary> summaries;
    std::vector<TrialOptima> optima;
    bool audits_ok = true;
    std::vector<std::string> failures;

    std::string csv() const;
    nlohmann::json summary_json() const;
};

// Runs the configured algorithms and oracles over all trials. Refuses with
// CapacityError before any work if a requested exact oracle is over its cap.
// Deterministic for fixed (config, options.format): worker count never
// affects results.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Audits every trial of the config against the EC dynamic optimum.
std::vector<AuditReport> audit_experiment(const ExperimentConfig& config, unsigned jobs = 0);

}  // namespace mssc
