#pragma once

#include <cstdint>
#include <vector>

#include "mssc/core.hpp"
#include "mssc/rng.hpp"

namespace mssc {

// Cardinality 2^p(x) of the chunk holding x.
Cost chunk_size(const Partitioning& p, Element x);

// min over x in R of chunk_size(p, x).
Cost ec_access_cost(const Partitioning& p, const RequestSet& r);

// Sum over relocated elements of max{size before, size after}.
Cost ec_opt_movement_cost(const Partitioning& before, const Partitioning& after);

// Per-element budgets driving the lazy moves. Values stay within
// [0, 2 * 2^{p(z)}] at all times and within [0, 2^{p(z)}) at step ends.
struct BudgetTable {
    std::vector<Cost> b;

    explicit BudgetTable(int n = 0) : b(n, 0) {}
    Cost operator[](Element x) const { return b[x]; }
    Cost& operator[](Element x) { return b[x]; }
    int n() const { return static_cast<int>(b.size()); }
};

std::uint64_t budgets_digest(const BudgetTable& budgets);

struct MovedElement {
    Element el;
    int from_chunk;
    int to_chunk;
    Cost cost;  // max{2^from, 2^to}
};

struct FetchRecord {
    Element target;
    int from_chunk;       // chunk of target when the fetch fired
    Cost budget_before;   // b(target) when the fetch fired
    Cost movement_cost;   // 0 when from_chunk == 0
    std::vector<MovedElement> moved;
};

struct EcCostBreakdown {
    Cost access = 0;
    Cost movement = 0;
    int fetch_count = 0;

    Cost total() const { return access + movement; }
};

struct EcStepRecord {
    int step = 0;
    std::vector<Element> request;
    Element served = -1;  // the min-chunk element x
    Cost access_cost = 0;
    std::vector<FetchRecord> fetches;  // fetches[0] is fetch(x); the rest fired from the budget loop
    std::uint64_t budgets_digest = 0;
    std::uint64_t partitioning_digest = 0;

    Cost movement_cost() const {
        Cost m = 0;
        for (const auto& f : fetches) m += f.movement_cost;
        return m;
    }
    Cost total_cost() const { return access_cost + movement_cost(); }
};

struct EcState {
    Partitioning part;
    BudgetTable budgets;
    Rng rng;
    int step_index = 0;

    EcState(Partitioning p0, Rng rng_in)
        : part(std::move(p0)), budgets(part.n()), rng(rng_in) {}
};

// Hook points for invariant checks; default no-ops.
struct LmaObserver {
    virtual ~LmaObserver() = default;
    virtual void before_fetch(const EcState&, Element /*target*/) {}
    virtual void after_fetch(const EcState&, const FetchRecord&) {}
    virtual void after_budget_increments(const EcState&) {}
};

// Moves z to chunk 0, pushing one uniformly random element from each chunk
// below z's one chunk up; resets b(z). All random picks are drawn from the
// chunk contents as they stood before any move of this fetch.
FetchRecord fetch(EcState& state, Element z);

struct LmaStepResult {
    EcCostBreakdown breakdown;
    EcStepRecord record;
};

// One step of Lazy-Move-All-To-Front: serve the min-chunk element of the
// request, credit the rest, then fetch every element whose budget reached
// its chunk size. The budget loop fires at most |R| - 1 times.
LmaStepResult lma_step(EcState& state, const RequestSet& request, LmaObserver* observer = nullptr);

struct LmaRunTrace {
    std::uint64_t seed = 0;
    std::vector<EcStepRecord> steps;
    EcCostBreakdown totals;
    // Populated when keep_states is set: entry t is the state after step t
    // (entry 0 is the initial state).
    std::vector<Partitioning> states;
    std::vector<BudgetTable> budgets;

    Cost total() const { return totals.total(); }
};

LmaRunTrace run_lma(const Partitioning& p0, const std::vector<RequestSet>& requests,
                    std::uint64_t seed, bool keep_states = false,
                    LmaObserver* observer = nullptr);

// EC-algorithm interface used by the MSSC wrapper.
struct EcStepOutcome {
    EcCostBreakdown breakdown;
    EcStepRecord record;
};

class LmaPolicy {
public:
    LmaPolicy(Partitioning p0, Rng rng) : state_(std::move(p0), rng) {}

    EcStepOutcome step(const RequestSet& request) {
        auto result = lma_step(state_, request, observer_);
        return EcStepOutcome{result.breakdown, std::move(result.record)};
    }
    const Partitioning& partitioning() const { return state_.part; }
    EcState& state() { return state_; }
    void set_observer(LmaObserver* observer) { observer_ = observer; }

private:
    EcState state_;
    LmaObserver* observer_ = nullptr;
};

}  // namespace mssc
