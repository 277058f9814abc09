#include "mssc/oracles.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "mssc/reduction.hpp"

namespace mssc {

namespace {

// Saturating n! against a cap; returns cap + 1 on overflow.
std::size_t factorial_capped(int n, std::size_t cap) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) {
        if (f > cap / static_cast<std::size_t>(i)) return cap + 1;
        f *= static_cast<std::size_t>(i);
    }
    return f;
}

std::size_t partitioning_count_capped(int w, std::size_t cap) {
    // Product of binomials C(remaining, 2^i), computed with early exit.
    auto binom = [](long long n, long long k) {
        long long r = 1;
        for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    long long remaining = (1LL << w) - 1;
    std::size_t count = 1;
    for (int i = 0; i < w; ++i) {
        const long long c = binom(remaining, 1LL << i);
        if (count > (cap + 1) / static_cast<std::size_t>(c)) return cap + 1;
        count *= static_cast<std::size_t>(c);
        remaining -= 1LL << i;
    }
    return count;
}

// All permutations of n elements in lexicographic order, with the pairwise
// Kendall tau matrix. Built once per n and shared (read-only afterwards).
struct PermSpace {
    int n = 0;
    std::size_t size = 0;
    std::vector<std::vector<Element>> orders;
    std::vector<std::uint8_t> dist;  // size x size

    std::uint8_t d(std::size_t a, std::size_t b) const { return dist[a * size + b]; }

    // Lexicographic (Lehmer) rank of an order vector.
    std::size_t index_of(const std::vector<Element>& order) const {
        std::size_t rank = 0;
        std::size_t fact = 1;
        for (int i = 1; i < n; ++i) fact *= static_cast<std::size_t>(i);
        for (int i = 0; i < n; ++i) {
            int smaller_right = 0;
            for (int j = i + 1; j < n; ++j)
                if (order[j] < order[i]) ++smaller_right;
            rank += static_cast<std::size_t>(smaller_right) * fact;
            if (i + 1 < n) fact /= static_cast<std::size_t>(n - 1 - i);
        }
        return rank;
    }
};

const PermSpace& perm_space(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<PermSpace>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto space = std::make_unique<PermSpace>();
    space->n = n;
    std::vector<Element> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    do {
        space->orders.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    space->size = space->orders.size();

    // Positions-by-element table, then pairwise inversion counts.
    const std::size_t s = space->size;
    std::vector<std::vector<int>> pos(s, std::vector<int>(n));
    for (std::size_t a = 0; a < s; ++a)
        for (int i = 0; i < n; ++i) pos[a][space->orders[a][i]] = i + 1;
    space->dist.assign(s * s, 0);
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = a + 1; b < s; ++b) {
            int count = 0;
            for (Element x = 0; x < n; ++x)
                for (Element y = x + 1; y < n; ++y)
                    if ((pos[a][x] < pos[a][y]) != (pos[b][x] < pos[b][y])) ++count;
            space->dist[a * s + b] = static_cast<std::uint8_t>(count);
            space->dist[b * s + a] = static_cast<std::uint8_t>(count);
        }
    }
    auto& ref = *space;
    cache.emplace(n, std::move(space));
    return ref;
}

// Valid partitionings of a 2^w - 1 universe with the pairwise movement-cost
// matrix, cached per w.
struct PartSpace {
    int w = 0;
    std::size_t size = 0;
    std::vector<Partitioning> parts;
    std::vector<std::int32_t> dist;
    std::unordered_map<std::uint64_t, std::size_t> index;

    std::int32_t d(std::size_t a, std::size_t b) const { return dist[a * size + b]; }

    static std::uint64_t key_of(const std::vector<int>& chunk_of) {
        std::uint64_t key = 0;
        for (int c : chunk_of) key = key * 8 + static_cast<std::uint64_t>(c);
        return key;
    }

    std::size_t index_of(const Partitioning& p) const { return index.at(key_of(p.chunk_of())); }
};

const PartSpace& part_space(int w) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<PartSpace>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(w);
    if (it != cache.end()) return *it->second;

    auto space = std::make_unique<PartSpace>();
    space->w = w;
    space->parts = enumerate_valid_partitionings(w);
    space->size = space->parts.size();
    for (std::size_t i = 0; i < space->size; ++i)
        space->index.emplace(PartSpace::key_of(space->parts[i].chunk_of()), i);
    const std::size_t s = space->size;
    space->dist.assign(s * s, 0);
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = a + 1; b < s; ++b) {
            const auto cost = static_cast<std::int32_t>(
                ec_opt_movement_cost(space->parts[a], space->parts[b]));
            space->dist[a * s + b] = cost;
            space->dist[b * s + a] = cost;
        }
    auto& ref = *space;
    cache.emplace(w, std::move(space));
    return ref;
}

}  // namespace

std::size_t mssc_dp_state_count(int padded_n, std::size_t cap) {
    return factorial_capped(padded_n, cap);
}

std::size_t ec_dp_state_count(int padded_n, std::size_t cap) {
    int w = 0;
    while ((1 << (w + 1)) - 1 <= padded_n) ++w;
    return partitioning_count_capped(w, cap);
}

std::vector<Partitioning> enumerate_valid_partitionings(int w) {
    const int n = (1 << w) - 1;
    std::vector<Partitioning> out;
    std::vector<int> chunk_of(n, -1);
    std::vector<int> capacity(w);
    for (int i = 0; i < w; ++i) capacity[i] = 1 << i;
    // DFS over elements in id order, chunks in ascending order: emits the
    // lexicographically sorted chunk-map sequence.
    auto rec = [&](auto&& self, Element x) -> void {
        if (x == n) {
            out.push_back(Partitioning::from_chunks(w, chunk_of));
            return;
        }
        for (int c = 0; c < w; ++c) {
            if (capacity[c] == 0) continue;
            --capacity[c];
            chunk_of[x] = c;
            self(self, x + 1);
            chunk_of[x] = -1;
            ++capacity[c];
        }
    };
    rec(rec, 0);
    return out;
}

MsscOptTrace opt_mssc_dynamic(const Instance& instance, const OracleLimits& limits) {
    const int n = instance.n;
    const std::size_t state_count = factorial_capped(n, limits.mssc_dp_max_states);
    if (state_count > limits.mssc_dp_max_states)
        throw CapacityError("opt_mssc_dynamic: n! exceeds the configured state cap");
    const int m = static_cast<int>(instance.requests.size());
    if (m > limits.dp_max_steps)
        throw CapacityError("opt_mssc_dynamic: step count exceeds the configured cap");

    const PermSpace& space = perm_space(n);
    const std::size_t s = space.size;

    // Backward cost-to-go over steps t = m..1. value[p] holds the minimal
    // cost of serving requests t+1..m from state p.
    std::vector<std::int32_t> value(s, 0);
    std::vector<std::int32_t> next_value(s);
    // layers[t][p] stored for the forward reconstruction.
    std::vector<std::vector<std::int32_t>> layers(m + 1);
    layers[m] = value;
    std::vector<std::int32_t> access_cost(s);
    for (int t = m; t >= 1; --t) {
        const RequestSet& request = instance.requests[t - 1];
        for (std::size_t p = 0; p < s; ++p) {
            int best = 1 << 30;
            for (Element x : request.members()) {
                int i = 0;
                while (space.orders[p][i] != x) ++i;
                best = std::min(best, i + 1);
            }
            access_cost[p] = best;
        }
        for (std::size_t p = 0; p < s; ++p) {
            const std::uint8_t* row = space.dist.data() + p * s;
            std::int32_t best = value[p];  // staying costs D = 0
            for (std::size_t q = 0; q < s; ++q) {
                const std::int32_t cand = value[q] + row[q];
                if (cand < best) best = cand;
            }
            next_value[p] = access_cost[p] + best;
        }
        value.swap(next_value);
        layers[t - 1] = value;
    }

    MsscOptTrace trace;
    trace.state_space = s;
    std::size_t at = space.index_of(instance.initial_permutation.order());
    trace.total = layers[0][at];
    trace.states.push_back(instance.initial_permutation);
    for (int t = 1; t <= m; ++t) {
        const RequestSet& request = instance.requests[t - 1];
        const Cost access = access_cost_mssc(trace.states.back(), request);
        const std::uint8_t* row = space.dist.data() + at * s;
        std::size_t pick = at;
        std::int32_t best = 1 << 30;
        for (std::size_t q = 0; q < s; ++q) {
            const std::int32_t cand = layers[t][q] + row[q];
            if (cand < best) {
                best = cand;
                pick = q;  // first minimum = lexicographically smallest state
            }
        }
        trace.per_step.emplace_back(access, row[pick]);
        at = pick;
        trace.states.push_back(Permutation::from_order(space.orders[at]));
    }
    Cost check = 0;
    for (const auto& [a, r] : trace.per_step) check += a + r;
    if (check != trace.total)
        throw std::logic_error("opt_mssc_dynamic: trace does not reproduce the DP value");
    return trace;
}

EcOptTrace opt_ec_dynamic(const Instance& instance, const OracleLimits& limits) {
    const int n = instance.n;
    int w = 0;
    while ((1 << (w + 1)) - 1 <= n) ++w;
    const std::size_t state_count = partitioning_count_capped(w, limits.ec_dp_max_states);
    if (state_count > limits.ec_dp_max_states)
        throw CapacityError("opt_ec_dynamic: partitioning count exceeds the configured cap");
    const int m = static_cast<int>(instance.requests.size());
    if (m > limits.dp_max_steps)
        throw CapacityError("opt_ec_dynamic: step count exceeds the configured cap");

    const PartSpace& space = part_space(w);
    const std::size_t s = space.size;

    std::vector<std::int64_t> value(s, 0);
    std::vector<std::int64_t> next_value(s);
    std::vector<std::vector<std::int64_t>> layers(m + 1);
    layers[m] = value;
    std::vector<std::int64_t> access_cost(s);
    for (int t = m; t >= 1; --t) {
        const RequestSet& request = instance.requests[t - 1];
        for (std::size_t p = 0; p < s; ++p)
            access_cost[p] = ec_access_cost(space.parts[p], request);
        for (std::size_t p = 0; p < s; ++p) {
            const std::int32_t* row = space.dist.data() + p * s;
            std::int64_t best = value[p];
            for (std::size_t q = 0; q < s; ++q) {
                const std::int64_t cand = value[q] + row[q];
                if (cand < best) best = cand;
            }
            next_value[p] = access_cost[p] + best;
        }
        value.swap(next_value);
        layers[t - 1] = value;
    }

    EcOptTrace trace;
    trace.state_space = s;
    const Partitioning p0 = canonic_partitioning(instance.initial_permutation);
    std::size_t at = space.index_of(p0);
    trace.total = layers[0][at];
    trace.states.push_back(p0);
    for (int t = 1; t <= m; ++t) {
        const RequestSet& request = instance.requests[t - 1];
        const Cost access = ec_access_cost(trace.states.back(), request);
        const std::int32_t* row = space.dist.data() + at * s;
        std::size_t pick = at;
        std::int64_t best = std::int64_t{1} << 60;
        for (std::size_t q = 0; q < s; ++q) {
            const std::int64_t cand = layers[t][q] + row[q];
            if (cand < best) {
                best = cand;
                pick = q;
            }
        }
        trace.per_step.emplace_back(access, row[pick]);
        at = pick;
        trace.states.push_back(space.parts[at]);
    }
    Cost check = 0;
    for (const auto& [a, r] : trace.per_step) check += a + r;
    if (check != trace.total)
        throw std::logic_error("opt_ec_dynamic: trace does not reproduce the DP value");
    return trace;
}

StaticOptResult opt_mssc_static(const Instance& instance, const OracleLimits& limits) {
    const int n = instance.n;
    StaticOptResult result;
    const std::size_t state_count = factorial_capped(n, limits.mssc_dp_max_states);
    if (state_count <= limits.mssc_dp_max_states) {
        const PermSpace& space = perm_space(n);
        result.state_space = space.size;
        Cost best = -1;
        std::size_t best_idx = 0;
        for (std::size_t p = 0; p < space.size; ++p) {
            std::vector<int> pos(n);
            for (int i = 0; i < n; ++i) pos[space.orders[p][i]] = i + 1;
            Cost total = 0;
            for (const RequestSet& request : instance.requests) {
                int acc = n + 1;
                for (Element x : request.members()) acc = std::min(acc, pos[x]);
                total += acc;
            }
            if (best < 0 || total < best) {
                best = total;
                best_idx = p;  // first minimum = lexicographically smallest
            }
        }
        result.permutation = Permutation::from_order(space.orders[best_idx]);
        result.total = best;
        result.exact = true;
        return result;
    }

    // Greedy cover fallback: repeatedly take the element hitting the most
    // still-uncovered request sets. A convenience baseline, not an optimum.
    std::vector<bool> used(n, false);
    std::vector<bool> covered(instance.requests.size(), false);
    std::vector<Element> order;
    for (;;) {
        Element best_el = -1;
        int best_cover = 0;
        for (Element x = 0; x < n; ++x) {
            if (used[x]) continue;
            int cover = 0;
            for (std::size_t t = 0; t < instance.requests.size(); ++t) {
                if (covered[t]) continue;
                const auto& members = instance.requests[t].members();
                if (std::binary_search(members.begin(), members.end(), x)) ++cover;
            }
            if (cover > best_cover) {
                best_cover = cover;
                best_el = x;
            }
        }
        if (best_el < 0) break;
        used[best_el] = true;
        order.push_back(best_el);
        for (std::size_t t = 0; t < instance.requests.size(); ++t) {
            if (covered[t]) continue;
            const auto& members = instance.requests[t].members();
            if (std::binary_search(members.begin(), members.end(), best_el)) covered[t] = true;
        }
    }
    for (Element x = 0; x < n; ++x)
        if (!used[x]) order.push_back(x);
    result.permutation = Permutation::from_order(order);
    result.total = 0;
    for (const RequestSet& request : instance.requests)
        result.total += access_cost_mssc(result.permutation, request);
    result.exact = false;
    result.state_space = 0;
    return result;
}

ListStepResult mae_step(const Permutation& pi, const RequestSet& request) {
    const int n = pi.n();
    const Cost d = access_cost_mssc(pi, request);

    // Members by increasing original position, with clamped targets.
    std::vector<std::pair<int, Element>> members;
    for (Element x : request.members()) members.emplace_back(pi.position(x), x);
    std::sort(members.begin(), members.end());

    std::vector<bool> is_member(n, false);
    for (Element x : request.members()) is_member[x] = true;
    std::vector<Element> rebuilt;
    rebuilt.reserve(n);
    for (int pos = 1; pos <= n; ++pos) {
        const Element x = pi.element_at(pos);
        if (!is_member[x]) rebuilt.push_back(x);
    }
    for (const auto& [pos, x] : members) {
        const int target = std::max(1, pos - static_cast<int>(d - 1));
        rebuilt.insert(rebuilt.begin() + (target - 1), x);
    }

    ListStepResult result;
    result.next = Permutation::from_order(rebuilt);
    result.access = d;
    result.reorder = kendall_tau(pi, result.next);
    return result;
}

ListStepResult mtf_step(const Permutation& pi, const RequestSet& request) {
    const int p = static_cast<int>(access_cost_mssc(pi, request));
    const Element x = pi.element_at(p);
    std::vector<Element> order = pi.order();
    order.erase(order.begin() + (p - 1));
    order.insert(order.begin(), x);

    ListStepResult result;
    result.next = Permutation::from_order(order);
    result.access = p;
    result.reorder = p - 1;
    return result;
}

namespace {

template <typename StepFn>
OnlineRun run_list_algorithm(const Instance& instance, StepFn step) {
    OnlineRun run;
    run.states.push_back(instance.initial_permutation);
    for (const RequestSet& request : instance.requests) {
        ListStepResult result = step(run.states.back(), request);
        run.ledger.add(result.access, result.reorder);
        run.states.push_back(std::move(result.next));
    }
    return run;
}

}  // namespace

OnlineRun run_mae(const Instance& instance) {
    return run_list_algorithm(instance, mae_step);
}

OnlineRun run_mtf(const Instance& instance) {
    return run_list_algorithm(instance, mtf_step);
}

}  // namespace mssc
