#include "mssc/reduction.hpp"

#include <algorithm>
#include <bit>

namespace mssc {

Partitioning canonic_partitioning(const Permutation& pi) {
    const int n = pi.n();
    if ((n & (n + 1)) != 0)
        throw std::invalid_argument("canonic_partitioning: n must be 2^w - 1");
    const int w = static_cast<int>(std::bit_width(static_cast<unsigned>(n) + 1)) - 1;
    std::vector<int> chunk_of(n);
    for (Element x = 0; x < n; ++x)
        chunk_of[x] = static_cast<int>(std::bit_width(static_cast<unsigned>(pi.position(x)))) - 1;
    return Partitioning::from_chunks(w, std::move(chunk_of));
}

std::vector<ChunkCycle> decompose_moves(const Partitioning& before, const Partitioning& after) {
    if (before.n() != after.n())
        throw UniverseMismatchError("decompose_moves: different universes");
    if (!before.valid() || !after.valid())
        throw std::invalid_argument("decompose_moves: partitionings must be valid");

    // Outgoing edges per chunk, ascending element id; consumed front to back.
    const int w = before.w();
    std::vector<std::vector<CycleEdge>> outgoing(w);
    for (Element x = 0; x < before.n(); ++x) {
        const int from = before.chunk(x);
        const int to = after.chunk(x);
        if (from != to) outgoing[from].push_back({x, from, to});
    }
    std::vector<std::size_t> next_edge(w, 0);

    std::vector<ChunkCycle> cycles;
    for (;;) {
        // New cycle starts at the unconsumed edge with the smallest element id.
        const CycleEdge* start = nullptr;
        for (int c = 0; c < w; ++c)
            if (next_edge[c] < outgoing[c].size()) {
                const CycleEdge& e = outgoing[c][next_edge[c]];
                if (!start || e.el < start->el) start = &e;
            }
        if (!start) break;

        ChunkCycle cycle;
        const int start_chunk = start->from_chunk;
        int at = start_chunk;
        do {
            if (next_edge[at] >= outgoing[at].size())
                throw std::logic_error("decompose_moves: walk stuck off its start chunk");
            const CycleEdge e = outgoing[at][next_edge[at]++];
            if (e.from_chunk == e.to_chunk)
                throw std::logic_error("decompose_moves: self-loop edge");
            cycle.push_back(e);
            at = e.to_chunk;
        } while (at != start_chunk);
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

MimicResult mimic_step(const Permutation& pi_prev, const Partitioning& p_prev,
                       const Partitioning& p_next) {
    if (!(canonic_partitioning(pi_prev) == p_prev))
        throw WrapperDesyncError("mimic_step: cp(pi_prev) != p_prev");

    MimicResult result;
    result.pi_next = pi_prev;
    for (const ChunkCycle& cycle : decompose_moves(p_prev, p_next)) {
        const std::size_t k = cycle.size();
        // Positions are taken from pi_prev for the whole cycle.
        std::vector<int> v(k);
        for (std::size_t j = 0; j < k; ++j) v[j] = pi_prev.position(cycle[j].el);
        for (std::size_t j = k - 1; j >= 1; --j) {
            result.pi_next = apply_swap(result.pi_next, v[j], v[j - 1]);
            result.reorder_cost += swap_cost(v[j], v[j - 1]);
            result.swap_script.emplace_back(v[j], v[j - 1]);
        }
    }
    if (!(canonic_partitioning(result.pi_next) == p_next))
        throw std::logic_error("mimic_step: swap schedule failed to reach p_next");
    return result;
}

WrappedRun run_wrapped_lma(const Instance& instance, std::uint64_t seed, bool keep_states) {
    LmaPolicy policy(canonic_partitioning(instance.initial_permutation), Rng(seed));
    WrappedRun run = run_wrapped(policy, instance, keep_states);
    run.seed = seed;
    return run;
}

}  // namespace mssc
