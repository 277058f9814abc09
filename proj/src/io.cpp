#include "mssc/io.hpp"

#include <fstream>
#include <sstream>

#include "mssc/hash.hpp"

namespace mssc {

using nlohmann::json;

json instance_to_json(const Instance& instance) {
    json j;
    j["n_raw"] = instance.n_raw;
    json order = json::array();
    // Dummies occupy the list tail, so the raw order is the non-dummy prefix.
    for (Element x : instance.initial_permutation.order())
        if (x < instance.n_raw) order.push_back(x);
    j["initial_order"] = std::move(order);
    json requests = json::array();
    for (const RequestSet& r : instance.requests) requests.push_back(r.members());
    j["requests"] = std::move(requests);
    return j;
}

Instance instance_from_json(const json& j) {
    const int n_raw = j.at("n_raw").get<int>();
    const auto order = j.at("initial_order").get<std::vector<Element>>();
    const auto requests = j.at("requests").get<std::vector<std::vector<Element>>>();
    return make_instance(n_raw, order, requests);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json j;
    in >> j;
    return instance_from_json(j);
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << canonical_dump(instance_to_json(instance)) << "\n";
}

std::string canonical_dump(const json& j) {
    return j.dump();  // nlohmann objects keep keys sorted
}

json ec_step_to_json(const EcStepRecord& record) {
    json j;
    j["step"] = record.step;
    j["request"] = record.request;
    j["served"] = record.served;
    j["access"] = record.access_cost;
    json fetches = json::array();
    for (const FetchRecord& f : record.fetches) {
        json jf;
        jf["target"] = f.target;
        jf["from"] = f.from_chunk;
        jf["budget_before"] = f.budget_before;
        jf["cost"] = f.movement_cost;
        json moved = json::array();
        for (const MovedElement& m : f.moved) {
            json jm;
            jm["el"] = m.el;
            jm["from"] = m.from_chunk;
            jm["to"] = m.to_chunk;
            jm["cost"] = m.cost;
            moved.push_back(std::move(jm));
        }
        jf["moved"] = std::move(moved);
        fetches.push_back(std::move(jf));
    }
    j["fetches"] = std::move(fetches);
    j["budgets_digest"] = to_hex(record.budgets_digest);
    j["partitioning_digest"] = to_hex(record.partitioning_digest);
    return j;
}

json wrapped_step_to_json(const WrappedStepRecord& record) {
    json j = ec_step_to_json(record.ec);
    j["mssc_access"] = record.mssc_access;
    j["mssc_reorder"] = record.mssc_reorder;
    j["kendall_tau"] = record.kendall;
    j["swap_script_len"] = record.swap_script_len;
    j["permutation_digest"] = to_hex(record.permutation_digest);
    return j;
}

namespace {

json trace_header(const char* algorithm, const Instance& instance, std::uint64_t seed) {
    json h;
    h["type"] = "header";
    h["algorithm"] = algorithm;
    h["rng"] = kRngName;
    h["seed"] = seed;
    h["instance"] = instance_to_json(instance);
    h["n"] = instance.n;
    return h;
}

}  // namespace

void write_lma_trace(std::ostream& out, const Instance& instance, std::uint64_t seed,
                     const LmaRunTrace& trace) {
    out << canonical_dump(trace_header("lma", instance, seed)) << "\n";
    for (const EcStepRecord& record : trace.steps)
        out << canonical_dump(ec_step_to_json(record)) << "\n";
}

void write_wrapped_trace(std::ostream& out, const Instance& instance, std::uint64_t seed,
                         const WrappedRun& run) {
    out << canonical_dump(trace_header("wrapped-lma", instance, seed)) << "\n";
    for (const WrappedStepRecord& record : run.steps)
        out << canonical_dump(wrapped_step_to_json(record)) << "\n";
}

void write_mssc_opt_trace(std::ostream& out, const Instance& instance,
                          const MsscOptTrace& trace) {
    json h;
    h["type"] = "header";
    h["solver"] = "dp-exact";
    h["problem"] = "mssc-dynamic";
    h["state_space"] = trace.state_space;
    h["total"] = trace.total;
    h["initial_state"] = trace.states[0].order();
    h["instance"] = instance_to_json(instance);
    out << canonical_dump(h) << "\n";
    for (std::size_t t = 0; t < trace.per_step.size(); ++t) {
        json s;
        s["type"] = "step";
        s["step"] = t;
        s["access"] = trace.per_step[t].first;
        s["reorder"] = trace.per_step[t].second;
        s["state"] = trace.states[t + 1].order();
        out << canonical_dump(s) << "\n";
    }
}

void write_ec_opt_trace(std::ostream& out, const Instance& instance, const EcOptTrace& trace) {
    json h;
    h["type"] = "header";
    h["solver"] = "dp-exact";
    h["problem"] = "ec-dynamic";
    h["state_space"] = trace.state_space;
    h["total"] = trace.total;
    h["initial_state"] = trace.states[0].chunk_of();
    h["instance"] = instance_to_json(instance);
    out << canonical_dump(h) << "\n";
    for (std::size_t t = 0; t < trace.per_step.size(); ++t) {
        json s;
        s["type"] = "step";
        s["step"] = t;
        s["access"] = trace.per_step[t].first;
        s["movement"] = trace.per_step[t].second;
        s["state"] = trace.states[t + 1].chunk_of();
        out << canonical_dump(s) << "\n";
    }
}

json static_opt_to_json(const StaticOptResult& result) {
    json j;
    j["solver"] = result.exact ? "exhaustive-exact" : "greedy-heuristic";
    j["problem"] = "mssc-static";
    j["exact"] = result.exact;
    j["state_space"] = result.state_space;
    j["total"] = result.total;
    j["permutation"] = result.permutation.order();
    return j;
}

json audit_report_to_json(const AuditReport& report) {
    json j;
    j["rng"] = kRngName;
    j["master_seed"] = report.master_seed;
    j["num_seeds"] = report.num_seeds;
    j["params"] = json{{"alpha", report.params.alpha},
                       {"beta", report.params.beta},
                       {"gamma", report.params.gamma},
                       {"kappa", report.params.kappa},
                       {"r", report.params.r}};
    j["constants"] = json{{"algorithm_part", report.params.algorithm_part_constant()},
                          {"opt_part", report.params.opt_part_constant()}};
    j["opt_total"] = report.opt_total;
    j["lemma8"] = json{{"ok", report.lemma8_ok},
                       {"worst_margin", report.lemma8_worst_margin},
                       {"opt_move_steps", report.opt_move_steps_audited}};
    j["lemma6"] = json{{"ok", report.lemma6_ok}};
    j["corollary4"] = json{{"ok", report.corollary4_ok}};
    json lemma7 = json::array();
    for (const Lemma7StepStat& s : report.lemma7_steps)
        lemma7.push_back(json{{"step", s.step},
                              {"mean", s.mean},
                              {"bound", s.bound},
                              {"slack", s.slack},
                              {"ok", s.ok}});
    j["lemma7"] = json{{"ok", report.lemma7_ok}, {"steps", std::move(lemma7)}};
    j["total"] = json{{"ok", report.total_ok},
                      {"mean_lma", report.mean_lma_total},
                      {"bound", report.total_bound},
                      {"slack", report.total_slack}};
    j["ok"] = report.all_ok();
    return j;
}

namespace {

TraceVerification fail(TraceVerification v, std::string why) {
    v.ok = false;
    v.failure = std::move(why);
    return v;
}

}  // namespace

TraceVerification verify_trace_stream(std::istream& in) {
    TraceVerification v;
    std::string line;
    if (!std::getline(in, line)) return fail(std::move(v), "empty trace");
    json header = json::parse(line);
    if (header.value("type", "") != "header") return fail(std::move(v), "missing header line");
    v.algorithm = header.at("algorithm").get<std::string>();
    v.seed = header.at("seed").get<std::uint64_t>();
    if (header.value("rng", "") != kRngName)
        return fail(std::move(v), "trace recorded with a different rng");
    v.instance = instance_from_json(header.at("instance"));

    std::vector<json> recorded;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        recorded.push_back(json::parse(line));
    }
    if (recorded.size() != v.instance.requests.size())
        return fail(std::move(v), "trace step count does not match the instance");
    v.steps = static_cast<int>(recorded.size());

    std::vector<json> replayed;
    if (v.algorithm == "wrapped-lma") {
        WrappedRun run = run_wrapped_lma(v.instance, v.seed);
        for (const WrappedStepRecord& record : run.steps)
            replayed.push_back(wrapped_step_to_json(record));
    } else if (v.algorithm == "lma") {
        LmaRunTrace run = run_lma(canonic_partitioning(v.instance.initial_permutation),
                                  v.instance.requests, v.seed);
        for (const EcStepRecord& record : run.steps)
            replayed.push_back(ec_step_to_json(record));
    } else {
        std::string why = "unknown algorithm: " + v.algorithm;
        return fail(std::move(v), std::move(why));
    }
    for (std::size_t t = 0; t < recorded.size(); ++t) {
        if (recorded[t] != replayed[t]) {
            std::ostringstream why;
            why << "step " << t + 1 << " diverges from the replay";
            return fail(std::move(v), why.str());
        }
    }
    return v;
}

TraceVerification verify_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return verify_trace_stream(in);
}

}  // namespace mssc
