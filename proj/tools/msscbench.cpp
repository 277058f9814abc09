#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "mssc/harness.hpp"
#include "mssc/io.hpp"

using namespace mssc;

namespace {

ExperimentConfig resolve_config(const std::string& config_path,
                                std::optional<std::uint64_t> seed,
                                std::optional<int> trials) {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed) config.master_seed = *seed;
    if (trials) config.trials = *trials;
    return config;
}

int cmd_gen(const ExperimentConfig& config, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (int trial = 0; trial < config.trials; ++trial) {
        const Instance inst = generate_instance(config, trial);
        char name[64];
        std::snprintf(name, sizeof name, "instance_%03d.json", trial);
        save_instance(inst, out_dir + "/" + name);
    }
    std::cout << "wrote " << config.trials << " instance files to " << out_dir << "\n";
    return 0;
}

int cmd_run(const ExperimentConfig& config, const RunOptions& options) {
    const ExperimentReport report = run_experiment(config, options);
    if (options.out_dir.empty()) {
        std::cout << report.csv();
    } else {
        std::cout << "results: " << options.out_dir << "/results.csv\n";
    }
    for (const AlgoSummary& s : report.summaries) {
        std::cout << s.algorithm << ": rows=" << s.rows;
        if (s.has_ratio)
            std::cout << " mean_ratio=" << s.mean_ratio << " max_ratio=" << s.max_ratio;
        std::cout << "\n";
    }
    for (const std::string& f : report.failures) std::cerr << "audit failure: " << f << "\n";
    return report.audits_ok ? 0 : 1;
}

int cmd_oracle(const std::string& instance_path, const std::string& which,
               const std::string& out_path) {
    const Instance inst = load_instance(instance_path);
    std::ostringstream body;
    if (which == "mssc-dp") {
        write_mssc_opt_trace(body, inst, opt_mssc_dynamic(inst));
    } else if (which == "ec-dp") {
        write_ec_opt_trace(body, inst, opt_ec_dynamic(inst));
    } else if (which == "static") {
        body << canonical_dump(static_opt_to_json(opt_mssc_static(inst))) << "\n";
    } else {
        std::cerr << "unknown oracle: " << which << "\n";
        return 2;
    }
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path);
        out << body.str();
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_audit(const std::string& config_path, const std::string& trace_path,
              const std::string& out_path, std::optional<std::uint64_t> seed,
              std::optional<int> trials, unsigned jobs) {
    nlohmann::json out = nlohmann::json::array();
    bool ok = true;
    if (!trace_path.empty()) {
        // Stored-trace mode: replay, verify digests, then audit each run.
        std::vector<std::string> files;
        if (std::filesystem::is_directory(trace_path)) {
            for (const auto& entry : std::filesystem::directory_iterator(trace_path))
                if (entry.path().extension() == ".jsonl") files.push_back(entry.path().string());
            std::sort(files.begin(), files.end());
        } else {
            files.push_back(trace_path);
        }
        for (const std::string& file : files) {
            const TraceVerification v = verify_trace_file(file);
            nlohmann::json jv;
            jv["trace"] = file;
            jv["replay_ok"] = v.ok;
            if (!v.ok) jv["failure"] = v.failure;
            ok = ok && v.ok;
            if (v.ok && !v.instance.requests.empty()) {
                const EcOptTrace opt = opt_ec_dynamic(v.instance);
                const PotentialParams params = make_params(std::max(v.instance.r, 1));
                LmaRunTrace run = run_lma(canonic_partitioning(v.instance.initial_permutation),
                                          v.instance.requests, v.seed, /*keep_states=*/true);
                const PotentialAudit audit = audit_run(run, opt, params);
                jv["lemma8_ok"] = audit.lemma8_ok;
                jv["lemma6_ok"] = audit.lemma6_ok;
                jv["corollary4_ok"] = audit.corollary4_ok;
                jv["phi_initial"] = audit.phi_initial;
                jv["phi_final"] = audit.phi_final;
                ok = ok && audit.lemma8_ok && audit.lemma6_ok && audit.corollary4_ok;
            }
            out.push_back(std::move(jv));
        }
    } else {
        const ExperimentConfig config = resolve_config(config_path, seed, trials);
        for (const AuditReport& report : audit_experiment(config, jobs)) {
            ok = ok && report.all_ok();
            out.push_back(audit_report_to_json(report));
        }
    }
    if (out_path.empty()) {
        std::cout << canonical_dump(out) << "\n";
    } else {
        std::ofstream f(out_path);
        f << canonical_dump(out) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    std::cout << (ok ? "audit: all checks passed\n" : "audit: FAILURES detected\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online min-sum set cover bench: LMA, baselines, exact oracles"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    unsigned jobs = 0;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("--config", config_path, "experiment config JSON");
        cmd->add_option("--seed", seed, "override master seed");
        cmd->add_option("--trials", trials, "override trial count");
        cmd->add_option("--out", out_path, "output directory or file");
        cmd->add_option("--jobs", jobs, "worker threads (0 = hardware)");
        if (with_format)
            cmd->add_option("--format", format, "csv | jsonl (jsonl adds step traces)")
                ->check(CLI::IsMember({"csv", "jsonl"}));
    };

    CLI::App* gen = app.add_subcommand("gen", "emit instance files");
    add_common(gen, false);

    CLI::App* run = app.add_subcommand("run", "execute an experiment");
    add_common(run, true);

    CLI::App* oracle = app.add_subcommand("oracle", "compute exact optima for an instance file");
    std::string instance_path;
    std::string which = "mssc-dp";
    oracle->add_option("--instance", instance_path, "instance JSON file")->required();
    oracle->add_option("--which", which, "mssc-dp | ec-dp | static")
        ->check(CLI::IsMember({"mssc-dp", "ec-dp", "static"}));
    oracle->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* audit = app.add_subcommand("audit", "run analysis checks on traces or a config");
    std::string audit_trace;
    add_common(audit, false);
    audit->add_option("--trace", audit_trace, "stored JSONL trace to replay and audit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (out_path.empty()) {
                std::cerr << "gen requires --out\n";
                return 2;
            }
            return cmd_gen(resolve_config(config_path, seed, trials), out_path);
        }
        if (run->parsed()) {
            RunOptions options;
            options.out_dir = out_path;
            options.format = format;
            options.jobs = jobs;
            return cmd_run(resolve_config(config_path, seed, trials), options);
        }
        if (oracle->parsed()) return cmd_oracle(instance_path, which, out_path);
        if (audit->parsed())
            return cmd_audit(config_path, audit_trace, out_path, seed, trials, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
