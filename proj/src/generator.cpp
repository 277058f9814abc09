#include "mssc/generator.hpp"

#include <algorithm>
#include <fstream>

#include "mssc/io.hpp"
#include "mssc/reduction.hpp"
#include "mssc/rng.hpp"

namespace mssc {

using nlohmann::json;

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "uniform-random") return GeneratorKind::UniformRandom;
    if (name == "zipf-popularity") return GeneratorKind::ZipfPopularity;
    if (name == "drifting-preferences") return GeneratorKind::DriftingPreferences;
    if (name == "adversarial-hot-swap") return GeneratorKind::AdversarialHotSwap;
    if (name == "from-file") return GeneratorKind::FromFile;
    throw std::invalid_argument("unknown generator: " + name);
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::UniformRandom: return "uniform-random";
        case GeneratorKind::ZipfPopularity: return "zipf-popularity";
        case GeneratorKind::DriftingPreferences: return "drifting-preferences";
        case GeneratorKind::AdversarialHotSwap: return "adversarial-hot-swap";
        case GeneratorKind::FromFile: return "from-file";
    }
    throw std::logic_error("unreachable");
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    if (j.contains("generator")) config.generator = generator_kind_from_string(j["generator"]);
    config.n_raw = j.value("n_raw", config.n_raw);
    config.m = j.value("m", config.m);
    config.r = j.value("r", config.r);
    config.master_seed = j.value("master_seed", config.master_seed);
    config.trials = j.value("trials", config.trials);
    config.seeds_per_trial = j.value("seeds_per_trial", config.seeds_per_trial);
    if (j.contains("algorithms")) config.algorithms = j["algorithms"].get<std::vector<std::string>>();
    if (j.contains("oracles")) config.oracles = j["oracles"].get<std::vector<std::string>>();
    if (j.contains("limits")) {
        const json& limits = j["limits"];
        config.limits.mssc_dp_max_states =
            limits.value("mssc_dp_max_states", config.limits.mssc_dp_max_states);
        config.limits.ec_dp_max_states =
            limits.value("ec_dp_max_states", config.limits.ec_dp_max_states);
        config.limits.dp_max_steps = limits.value("dp_max_steps", config.limits.dp_max_steps);
    }
    config.drift_period = j.value("drift_period", config.drift_period);
    config.ratio_vs_static = j.value("ratio_vs_static", config.ratio_vs_static);
    if (j.contains("instance_files"))
        config.instance_files = j["instance_files"].get<std::vector<std::string>>();
    return config;
}

json config_to_json(const ExperimentConfig& config) {
    json j;
    j["generator"] = to_string(config.generator);
    j["n_raw"] = config.n_raw;
    j["m"] = config.m;
    j["r"] = config.r;
    j["master_seed"] = config.master_seed;
    j["trials"] = config.trials;
    j["seeds_per_trial"] = config.seeds_per_trial;
    j["algorithms"] = config.algorithms;
    j["oracles"] = config.oracles;
    j["limits"] = json{{"mssc_dp_max_states", config.limits.mssc_dp_max_states},
                       {"ec_dp_max_states", config.limits.ec_dp_max_states},
                       {"dp_max_steps", config.limits.dp_max_steps}};
    j["drift_period"] = config.drift_period;
    j["ratio_vs_static"] = config.ratio_vs_static;
    if (!config.instance_files.empty()) j["instance_files"] = config.instance_files;
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

namespace {

std::vector<Element> random_shuffle_ids(int n, Rng& rng) {
    std::vector<Element> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(ids[i], ids[rng.bounded(static_cast<std::uint64_t>(i) + 1)]);
    return ids;
}

std::vector<Element> sample_distinct(const std::vector<Element>& pool, int q, Rng& rng) {
    std::vector<Element> scratch = pool;
    for (int i = 0; i < q; ++i) {
        const std::size_t j = i + rng.bounded(scratch.size() - i);
        std::swap(scratch[i], scratch[j]);
    }
    scratch.resize(q);
    return scratch;
}

std::vector<std::vector<Element>> gen_uniform(int n_raw, int m, int r, Rng& rng) {
    std::vector<Element> pool(n_raw);
    for (int i = 0; i < n_raw; ++i) pool[i] = i;
    std::vector<std::vector<Element>> requests;
    requests.reserve(m);
    for (int t = 0; t < m; ++t) {
        const int q = 1 + static_cast<int>(rng.bounded(r));
        requests.push_back(sample_distinct(pool, q, rng));
    }
    return requests;
}

std::vector<std::vector<Element>> gen_zipf(int n_raw, int m, int r, Rng& rng) {
    // Popularity rank k (0-based) gets integer weight floor(2^24 / (k+1));
    // ranks map to elements through a per-instance shuffle.
    const std::vector<Element> by_rank = random_shuffle_ids(n_raw, rng);
    std::vector<std::int64_t> weight(n_raw);
    std::int64_t total = 0;
    for (int k = 0; k < n_raw; ++k) {
        weight[k] = (std::int64_t{1} << 24) / (k + 1);
        total += weight[k];
    }
    std::vector<std::vector<Element>> requests;
    requests.reserve(m);
    for (int t = 0; t < m; ++t) {
        const int q = 1 + static_cast<int>(rng.bounded(r));
        std::vector<Element> members;
        while (static_cast<int>(members.size()) < q) {
            std::int64_t x = static_cast<std::int64_t>(rng.bounded(total));
            int k = 0;
            while (x >= weight[k]) x -= weight[k++];
            const Element candidate = by_rank[k];
            if (std::find(members.begin(), members.end(), candidate) == members.end())
                members.push_back(candidate);
        }
        requests.push_back(std::move(members));
    }
    return requests;
}

std::vector<std::vector<Element>> gen_drifting(int n_raw, int m, int r, int period, Rng& rng) {
    if (period < 1) throw std::invalid_argument("drift_period must be >= 1");
    std::vector<Element> pool(n_raw);
    for (int i = 0; i < n_raw; ++i) pool[i] = i;
    const int hot_size = std::min(n_raw, std::max(r, (n_raw + 2) / 3));
    std::vector<Element> hot;
    std::vector<std::vector<Element>> requests;
    requests.reserve(m);
    for (int t = 0; t < m; ++t) {
        if (t % period == 0) hot = sample_distinct(pool, hot_size, rng);
        const int q_max = std::min(r, hot_size);
        const int q = 1 + static_cast<int>(rng.bounded(q_max));
        requests.push_back(sample_distinct(hot, q, rng));
    }
    return requests;
}

// Requests the elements a probe LMA run currently holds deepest in its list,
// so every request is chosen against the algorithm's own state.
std::vector<std::vector<Element>> gen_hot_swap(const Permutation& initial, int n_raw, int m,
                                               int r, std::uint64_t probe_seed) {
    LmaPolicy probe(canonic_partitioning(initial), Rng(probe_seed));
    Permutation pi = initial;
    const int q = std::min(r, n_raw);
    std::vector<std::vector<Element>> requests;
    requests.reserve(m);
    for (int t = 0; t < m; ++t) {
        std::vector<Element> members;
        for (int pos = pi.n(); pos >= 1 && static_cast<int>(members.size()) < q; --pos) {
            const Element x = pi.element_at(pos);
            if (x < n_raw) members.push_back(x);
        }
        requests.push_back(members);

        const RequestSet request(members);
        const Partitioning before = probe.partitioning();
        probe.step(request);
        pi = mimic_step(pi, before, probe.partitioning()).pi_next;
    }
    return requests;
}

}  // namespace

Instance generate_instance(const ExperimentConfig& config, int trial) {
    if (config.generator == GeneratorKind::FromFile) {
        if (config.instance_files.empty())
            throw std::invalid_argument("from-file generator needs instance_files");
        return load_instance(
            config.instance_files[static_cast<std::size_t>(trial) % config.instance_files.size()]);
    }
    if (config.n_raw < 1) throw std::invalid_argument("n_raw must be >= 1");
    if (config.m < 0) throw std::invalid_argument("m must be >= 0");
    if (config.m > 0 && (config.r < 1 || config.r > config.n_raw))
        throw std::invalid_argument("r must satisfy 1 <= r <= n_raw");

    const std::uint64_t trial_master = derive_seed(config.master_seed, static_cast<std::uint64_t>(trial));
    Rng rng(derive_seed(trial_master, 0));
    const std::vector<Element> initial_order = random_shuffle_ids(config.n_raw, rng);

    std::vector<std::vector<Element>> requests;
    switch (config.generator) {
        case GeneratorKind::UniformRandom:
            requests = gen_uniform(config.n_raw, config.m, config.r, rng);
            break;
        case GeneratorKind::ZipfPopularity:
            requests = gen_zipf(config.n_raw, config.m, config.r, rng);
            break;
        case GeneratorKind::DriftingPreferences:
            requests = gen_drifting(config.n_raw, config.m, config.r, config.drift_period, rng);
            break;
        case GeneratorKind::AdversarialHotSwap: {
            const auto padded = pad_universe(config.n_raw, Permutation::from_order(initial_order));
            requests = gen_hot_swap(padded.permutation, config.n_raw, config.m, config.r,
                                    derive_seed(trial_master, 1));
            break;
        }
        case GeneratorKind::FromFile:
            throw std::logic_error("unreachable");
    }
    return make_instance(config.n_raw, initial_order, requests);
}

}  // namespace mssc
