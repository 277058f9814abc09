#include "mssc/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "mssc/io.hpp"
#include "mssc/parallel.hpp"
#include "mssc/reduction.hpp"
#include "mssc/rng.hpp"

namespace mssc {

using nlohmann::json;

namespace {

bool contains(const std::vector<std::string>& list, const std::string& value) {
    return std::find(list.begin(), list.end(), value) != list.end();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int padded_n_for(const ExperimentConfig& config) {
    if (config.generator != GeneratorKind::FromFile) return padded_size(config.n_raw);
    int worst = 1;
    for (const std::string& path : config.instance_files)
        worst = std::max(worst, load_instance(path).n);
    return worst;
}

void precheck_oracles(const ExperimentConfig& config) {
    const int n = padded_n_for(config);
    if (contains(config.oracles, "mssc-dp") &&
        mssc_dp_state_count(n, config.limits.mssc_dp_max_states) > config.limits.mssc_dp_max_states)
        throw CapacityError("run refused: mssc-dp oracle over its state cap for n=" + std::to_string(n));
    if (contains(config.oracles, "ec-dp") &&
        ec_dp_state_count(n, config.limits.ec_dp_max_states) > config.limits.ec_dp_max_states)
        throw CapacityError("run refused: ec-dp oracle over its state cap for n=" + std::to_string(n));
    if (config.m > config.limits.dp_max_steps && !config.oracles.empty())
        throw CapacityError("run refused: m over the oracle step cap");
}

struct TrialOutput {
    std::vector<AlgoRow> rows;
    TrialOptima optima;
    std::vector<std::string> failures;
};

std::string trace_path(const std::string& dir, const std::string& algo, int trial,
                       std::uint64_t seed) {
    std::ostringstream name;
    name << dir << "/" << algo << "-t" << trial << "-s" << seed << ".jsonl";
    return name.str();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    precheck_oracles(config);

    const bool write_files = !options.out_dir.empty();
    const bool write_traces = write_files && options.format == "jsonl";
    std::string traces_dir;
    if (write_files) {
        std::filesystem::create_directories(options.out_dir);
        if (write_traces) {
            traces_dir = options.out_dir + "/traces";
            std::filesystem::create_directories(traces_dir);
        }
    }

    std::vector<TrialOutput> outputs(config.trials);
    parallel_for(static_cast<std::size_t>(config.trials), [&](std::size_t ti) {
        const int trial = static_cast<int>(ti);
        TrialOutput& out = outputs[ti];
        out.optima.trial = trial;
        try {
            const Instance inst = generate_instance(config, trial);
            const std::uint64_t trial_master = derive_seed(config.master_seed, ti);
            const bool empty_run = inst.requests.empty();

            std::optional<Cost> mssc_opt;
            std::optional<Cost> ec_opt;
            if (contains(config.oracles, "mssc-dp"))
                mssc_opt = opt_mssc_dynamic(inst, config.limits).total;
            if (contains(config.oracles, "ec-dp"))
                ec_opt = opt_ec_dynamic(inst, config.limits).total;
            if (contains(config.oracles, "static"))
                out.optima.mssc_static = opt_mssc_static(inst, config.limits).total;
            out.optima.mssc_dp = mssc_opt;
            out.optima.ec_dp = ec_opt;
            // list algorithms are measured against the dynamic optimum
            // unless the static baseline was requested
            const std::optional<Cost> list_opt =
                config.ratio_vs_static ? out.optima.mssc_static : mssc_opt;

            auto finish_row = [&](AlgoRow row, const std::optional<Cost>& opt) {
                row.trial = trial;
                row.opt_total = opt;
                if (empty_run) {
                    row.ratio = 1.0;  // empty-run convention
                } else if (opt && *opt > 0) {
                    row.ratio = static_cast<double>(row.access + row.reorder) /
                                static_cast<double>(*opt);
                }
                out.rows.push_back(std::move(row));
            };

            for (const std::string& algo : config.algorithms) {
                if (algo == "mae" || algo == "mtf") {
                    const OnlineRun run = algo == "mae" ? run_mae(inst) : run_mtf(inst);
                    AlgoRow row;
                    row.algorithm = algo;
                    row.seed = 0;
                    row.access = run.ledger.access;
                    row.reorder = run.ledger.reorder;
                    finish_row(std::move(row), list_opt);
                } else if (algo == "wrapped-lma") {
                    for (int k = 0; k < config.seeds_per_trial; ++k) {
                        const std::uint64_t seed = derive_seed(trial_master, 2 + k);
                        const WrappedRun run = run_wrapped_lma(inst, seed);
                        AlgoRow row;
                        row.algorithm = algo;
                        row.seed = seed;
                        row.access = run.ledger.access;
                        row.reorder = run.ledger.reorder;
                        finish_row(std::move(row), list_opt);
                        if (write_traces) {
                            std::ofstream f(trace_path(traces_dir, algo, trial, seed));
                            write_wrapped_trace(f, inst, seed, run);
                        }
                    }
                } else if (algo == "lma") {
                    const Partitioning p0 = canonic_partitioning(inst.initial_permutation);
                    for (int k = 0; k < config.seeds_per_trial; ++k) {
                        const std::uint64_t seed = derive_seed(trial_master, 2 + k);
                        const LmaRunTrace run = run_lma(p0, inst.requests, seed);
                        AlgoRow row;
                        row.algorithm = algo;
                        row.seed = seed;
                        row.access = run.totals.access;
                        row.reorder = run.totals.movement;
                        finish_row(std::move(row), ec_opt);
                        if (write_traces) {
                            std::ofstream f(trace_path(traces_dir, algo, trial, seed));
                            write_lma_trace(f, inst, seed, run);
                        }
                    }
                } else {
                    throw std::invalid_argument("unknown algorithm: " + algo);
                }
            }
        } catch (const CapacityError&) {
            throw;  // configuration problem, not an audit failure
        } catch (const std::exception& e) {
            out.failures.push_back("trial " + std::to_string(trial) + ": " + e.what());
        }
    }, options.jobs);

    ExperimentReport report;
    report.config = config;
    for (TrialOutput& out : outputs) {
        for (AlgoRow& row : out.rows) report.rows.push_back(std::move(row));
        report.optima.push_back(out.optima);
        for (std::string& f : out.failures) {
            report.failures.push_back(std::move(f));
            report.audits_ok = false;
        }
    }

    // Summaries: per-trial ratio uses the mean seed cost; quantiles use the
    // raw per-seed ratios.
    for (const std::string& algo : config.algorithms) {
        AlgoSummary summary;
        summary.algorithm = algo;
        std::vector<double> per_seed_ratios;
        double ratio_sum = 0;
        int ratio_trials = 0;
        for (int trial = 0; trial < config.trials; ++trial) {
            Cost cost_sum = 0;
            int count = 0;
            std::optional<Cost> opt;
            bool saw_row_ratio = false;
            for (const AlgoRow& row : report.rows) {
                if (row.trial != trial || row.algorithm != algo) continue;
                cost_sum += row.access + row.reorder;
                ++count;
                opt = row.opt_total;
                if (row.ratio) {
                    per_seed_ratios.push_back(*row.ratio);
                    saw_row_ratio = true;
                }
            }
            if (count == 0) continue;
            ++summary.trials;
            summary.rows += count;
            double trial_ratio;
            if (opt && *opt > 0) {
                trial_ratio = (static_cast<double>(cost_sum) / count) / static_cast<double>(*opt);
            } else if (saw_row_ratio) {
                trial_ratio = 1.0;  // empty-run convention (rows carry ratio 1)
            } else {
                continue;  // no oracle for this algorithm
            }
            summary.has_ratio = true;
            ratio_sum += trial_ratio;
            ++ratio_trials;
            summary.max_ratio = std::max(summary.max_ratio, trial_ratio);
        }
        if (ratio_trials > 0) summary.mean_ratio = ratio_sum / ratio_trials;
        if (!per_seed_ratios.empty()) {
            std::sort(per_seed_ratios.begin(), per_seed_ratios.end());
            const auto quantile = [&](double q) {
                const std::size_t idx = static_cast<std::size_t>(
                    q * static_cast<double>(per_seed_ratios.size() - 1));
                return per_seed_ratios[idx];
            };
            summary.q50 = quantile(0.5);
            summary.q90 = quantile(0.9);
            summary.qmax = per_seed_ratios.back();
        }
        report.summaries.push_back(std::move(summary));
    }

    if (write_files) {
        std::ofstream csv_file(options.out_dir + "/results.csv");
        csv_file << report.csv();
        std::ofstream summary_file(options.out_dir + "/summary.json");
        summary_file << canonical_dump(report.summary_json()) << "\n";
    }
    return report;
}

std::string ExperimentReport::csv() const {
    std::ostringstream out;
    out << "instance_id,algorithm,seed,total_access,total_reorder,opt_total,ratio\n";
    for (const AlgoRow& row : rows) {
        out << row.trial << "," << row.algorithm << "," << row.seed << "," << row.access << ","
            << row.reorder << ",";
        if (row.opt_total) out << *row.opt_total;
        out << ",";
        if (row.ratio) out << format_double(*row.ratio);
        out << "\n";
    }
    return out.str();
}

json ExperimentReport::summary_json() const {
    json j;
    j["config"] = config_to_json(config);
    j["rng"] = kRngName;
    json algos = json::array();
    for (const AlgoSummary& s : summaries) {
        json js;
        js["algorithm"] = s.algorithm;
        js["trials"] = s.trials;
        js["rows"] = s.rows;
        if (s.has_ratio) {
            js["mean_ratio"] = s.mean_ratio;
            js["max_ratio"] = s.max_ratio;
            js["ratio_q50"] = s.q50;
            js["ratio_q90"] = s.q90;
            js["ratio_max_seed"] = s.qmax;
        }
        algos.push_back(std::move(js));
    }
    j["algorithms"] = std::move(algos);
    json trials = json::array();
    for (const TrialOptima& o : optima) {
        json jt;
        jt["trial"] = o.trial;
        if (o.mssc_dp) jt["opt_mssc_dynamic"] = *o.mssc_dp;
        if (o.ec_dp) jt["opt_ec_dynamic"] = *o.ec_dp;
        if (o.mssc_static) jt["opt_mssc_static"] = *o.mssc_static;
        trials.push_back(std::move(jt));
    }
    j["trials"] = std::move(trials);
    j["audits_ok"] = audits_ok;
    j["failures"] = failures;
    return j;
}

std::vector<AuditReport> audit_experiment(const ExperimentConfig& config, unsigned jobs) {
    std::vector<AuditReport> reports;
    for (int trial = 0; trial < config.trials; ++trial) {
        const Instance inst = generate_instance(config, trial);
        const EcOptTrace opt = opt_ec_dynamic(inst, config.limits);
        const PotentialParams params = make_params(std::max({inst.r, config.r, 1}));
        const std::uint64_t trial_master = derive_seed(config.master_seed, trial);
        reports.push_back(audit_many(inst, opt, params, trial_master,
                                     std::max(1, config.seeds_per_trial), 3.0, jobs));
    }
    return reports;
}

}  // namespace mssc
