#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mssc/core.hpp"
#include "mssc/ec.hpp"

namespace mssc {

struct OracleLimits {
    std::size_t mssc_dp_max_states = 5040;  // 7!
    std::size_t ec_dp_max_states = 4096;
    int dp_max_steps = 100000;
};

struct MsscOptTrace {
    std::vector<Permutation> states;  // states[0] is the initial permutation
    std::vector<std::pair<Cost, Cost>> per_step;  // (access, reorder)
    Cost total = 0;
    std::size_t state_space = 0;
};

struct EcOptTrace {
    std::vector<Partitioning> states;
    std::vector<std::pair<Cost, Cost>> per_step;  // (access, movement)
    Cost total = 0;
    std::size_t state_space = 0;
};

// Exact dynamic optimum by DP over all permutations of the padded universe.
// Ties resolve to the lexicographically smallest permutation sequence.
MsscOptTrace opt_mssc_dynamic(const Instance& instance, const OracleLimits& limits = {});

// Exact dynamic optimum over all valid partitionings, starting from
// cp(pi_0). Ties resolve to the lexicographically smallest chunk-map
// sequence.
EcOptTrace opt_ec_dynamic(const Instance& instance, const OracleLimits& limits = {});

struct StaticOptResult {
    Permutation permutation;
    Cost total = 0;
    bool exact = true;  // false for the greedy fallback beyond the cap
    std::size_t state_space = 0;
};

// Best single permutation (no reordering). Exhaustive within the cap;
// greedy cover heuristic beyond it, labeled exact = false.
StaticOptResult opt_mssc_static(const Instance& instance, const OracleLimits& limits = {});

struct ListStepResult {
    Permutation next;
    Cost access = 0;
    Cost reorder = 0;
};

// Move-All-Equally: every requested element advances d-1 positions, d being
// the position of the request's first member. Members are reinserted in
// increasing original-position order at their clamped targets.
ListStepResult mae_step(const Permutation& pi, const RequestSet& request);

// Brings the front-most requested element to position 1; nothing else moves.
ListStepResult mtf_step(const Permutation& pi, const RequestSet& request);

struct OnlineRun {
    std::vector<Permutation> states;
    CostLedger ledger;
};

OnlineRun run_mae(const Instance& instance);
OnlineRun run_mtf(const Instance& instance);

// Enumeration of all valid partitionings of a 2^w - 1 universe in
// lexicographic chunk-map order (shared with tests and the EC DP).
std::vector<Partitioning> enumerate_valid_partitionings(int w);

// State-space sizes for capacity prechecks; both saturate at cap + 1.
std::size_t mssc_dp_state_count(int padded_n, std::size_t cap);
std::size_t ec_dp_state_count(int padded_n, std::size_t cap);

}  // namespace mssc
