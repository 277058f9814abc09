#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mssc/core.hpp"
#include "mssc/ec.hpp"

namespace mssc {

// The wrapper lost its cp(pi) = p synchronization (caller error).
struct WrapperDesyncError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// cp(pi)(x) = floor(log2 pi(x)). Requires n = 2^w - 1.
Partitioning canonic_partitioning(const Permutation& pi);

struct CycleEdge {
    Element el;
    int from_chunk;
    int to_chunk;
};
using ChunkCycle = std::vector<CycleEdge>;

// Splits the chunk-move multigraph between two valid partitionings into
// edge-disjoint closed cycles (every cycle ends at its starting chunk).
// Deterministic: edges are consumed in ascending element id.
std::vector<ChunkCycle> decompose_moves(const Partitioning& before, const Partitioning& after);

struct MimicResult {
    Permutation pi_next;
    Cost reorder_cost = 0;  // sum of swap_cost over the script
    std::vector<std::pair<int, int>> swap_script;  // positions in pi_prev
};

// Reorders pi_prev so that cp(pi_next) = p_next using k-1 position swaps per
// k-cycle; swap positions are fixed from pi_prev even as earlier swaps of
// the same cycle displace elements.
MimicResult mimic_step(const Permutation& pi_prev, const Partitioning& p_prev,
                       const Partitioning& p_next);

struct WrappedStepRecord {
    EcStepRecord ec;
    Cost mssc_access = 0;
    Cost mssc_reorder = 0;  // charged script cost
    Cost kendall = 0;       // exact distance, for reporting only
    int swap_script_len = 0;
    std::uint64_t permutation_digest = 0;
};

struct WrappedRun {
    std::uint64_t seed = 0;
    std::vector<WrappedStepRecord> steps;
    CostLedger ledger;       // MSSC costs
    Cost ec_total = 0;       // access + movement of the inner EC algorithm
    std::vector<Permutation> states;  // populated when keep_states is set
};

// Runs an EC policy on cp(pi_0), mirroring each partitioning change onto the
// permutation. Checks cp(pi_t) = p_t and the 4x per-step cost bound.
template <class EcPolicy>
WrappedRun run_wrapped(EcPolicy& policy, const Instance& instance, bool keep_states = false) {
    WrappedRun run;
    Permutation pi = instance.initial_permutation;
    if (!(canonic_partitioning(pi) == policy.partitioning()))
        throw WrapperDesyncError("run_wrapped: policy must start at cp(pi_0)");
    if (keep_states) run.states.push_back(pi);
    for (const RequestSet& request : instance.requests) {
        const Cost mssc_access = access_cost_mssc(pi, request);
        const Partitioning p_prev = policy.partitioning();
        EcStepOutcome outcome = policy.step(request);
        MimicResult mimic = mimic_step(pi, p_prev, policy.partitioning());

        WrappedStepRecord step;
        step.ec = std::move(outcome.record);
        step.mssc_access = mssc_access;
        step.mssc_reorder = mimic.reorder_cost;
        step.kendall = kendall_tau(pi, mimic.pi_next);
        step.swap_script_len = static_cast<int>(mimic.swap_script.size());
        step.permutation_digest = permutation_digest(mimic.pi_next);

        const Cost ec_step = outcome.breakdown.total();
        if (mssc_access + mimic.reorder_cost > 4 * ec_step)
            throw std::logic_error("run_wrapped: per-step 4x cost bound violated");
        run.ec_total += ec_step;
        run.ledger.add(mssc_access, mimic.reorder_cost);
        run.steps.push_back(std::move(step));
        pi = std::move(mimic.pi_next);
        if (keep_states) run.states.push_back(pi);
    }
    return run;
}

// LMA wrapped into an MSSC algorithm: the end-to-end randomized list policy.
WrappedRun run_wrapped_lma(const Instance& instance, std::uint64_t seed,
                           bool keep_states = false);

}  // namespace mssc
