#include "mssc/ec.hpp"

#include <algorithm>

#include "mssc/hash.hpp"

namespace mssc {

Cost chunk_size(const Partitioning& p, Element x) {
    return Cost{1} << p.chunk(x);
}

Cost ec_access_cost(const Partitioning& p, const RequestSet& r) {
    Cost best = Cost{1} << p.w();
    for (Element x : r.members()) best = std::min(best, chunk_size(p, x));
    return best;
}

Cost ec_opt_movement_cost(const Partitioning& before, const Partitioning& after) {
    if (before.n() != after.n())
        throw UniverseMismatchError("ec_opt_movement_cost: different universes");
    Cost total = 0;
    for (Element x = 0; x < before.n(); ++x) {
        const int cb = before.chunk(x);
        const int ca = after.chunk(x);
        if (cb != ca) total += Cost{1} << std::max(cb, ca);
    }
    return total;
}

std::uint64_t budgets_digest(const BudgetTable& budgets) {
    Fnv1a64 h;
    for (Cost v : budgets.b) h.i64(v);
    return h.value();
}

FetchRecord fetch(EcState& state, Element z) {
    FetchRecord rec;
    rec.target = z;
    rec.from_chunk = state.part.chunk(z);
    rec.budget_before = state.budgets[z];
    rec.movement_cost = 0;
    const int l = rec.from_chunk;
    if (l > 0) {
        // All picks come from the pre-move chunk contents; z sits in chunk l,
        // so it is never picked.
        std::vector<Element> picked(l);
        for (int i = 0; i < l; ++i) {
            const auto& chunk_members = state.part.members(i);
            picked[i] = chunk_members[state.rng.bounded(chunk_members.size())];
        }
        state.part.move_element(z, 0);
        rec.moved.push_back({z, l, 0, Cost{1} << l});
        rec.movement_cost += Cost{1} << l;
        for (int i = 0; i < l; ++i) {
            state.part.move_element(picked[i], i + 1);
            rec.moved.push_back({picked[i], i, i + 1, Cost{1} << (i + 1)});
            rec.movement_cost += Cost{1} << (i + 1);
        }
    }
    state.budgets[z] = 0;
    return rec;
}

namespace {

// Triggering element with the smallest (chunk, id), or -1 when all budgets
// are below their chunk sizes.
Element next_trigger(const EcState& state) {
    Element best = -1;
    int best_chunk = state.part.w();
    for (Element z = 0; z < state.part.n(); ++z) {
        if (state.budgets[z] >= chunk_size(state.part, z)) {
            const int c = state.part.chunk(z);
            if (c < best_chunk) {
                best = z;
                best_chunk = c;
            }
        }
    }
    return best;
}

}  // namespace

LmaStepResult lma_step(EcState& state, const RequestSet& request, LmaObserver* observer) {
    LmaStepResult result;
    auto& rec = result.record;
    rec.step = state.step_index;
    rec.request = request.members();

    // x: requested element with the smallest chunk index, ties by id
    // (members are sorted, so the scan resolves ties by lowest id).
    Element x = -1;
    int x_chunk = state.part.w();
    for (Element y : request.members()) {
        const int c = state.part.chunk(y);
        if (c < x_chunk) {
            x = y;
            x_chunk = c;
        }
    }
    rec.served = x;
    rec.access_cost = Cost{1} << x_chunk;
    result.breakdown.access = rec.access_cost;

    if (observer) observer->before_fetch(state, x);
    rec.fetches.push_back(fetch(state, x));
    if (observer) observer->after_fetch(state, rec.fetches.back());

    const Cost credit = Cost{1} << x_chunk;  // 2^{p(x)} as of request time
    for (Element y : request.members())
        if (y != x) state.budgets[y] += credit;
    if (observer) observer->after_budget_increments(state);

    const int max_lazy_fetches = request.size() - 1;
    int lazy_fetches = 0;
    for (;;) {
        const Element z = next_trigger(state);
        if (z < 0) break;
        if (++lazy_fetches > max_lazy_fetches)
            throw std::logic_error("lma_step: budget loop exceeded |R| - 1 fetches");
        if (observer) observer->before_fetch(state, z);
        rec.fetches.push_back(fetch(state, z));
        if (observer) observer->after_fetch(state, rec.fetches.back());
    }

    result.breakdown.movement = rec.movement_cost();
    result.breakdown.fetch_count = static_cast<int>(rec.fetches.size());
    rec.budgets_digest = budgets_digest(state.budgets);
    rec.partitioning_digest = partitioning_digest(state.part);
    ++state.step_index;
    return result;
}

LmaRunTrace run_lma(const Partitioning& p0, const std::vector<RequestSet>& requests,
                    std::uint64_t seed, bool keep_states, LmaObserver* observer) {
    LmaRunTrace trace;
    trace.seed = seed;
    EcState state(p0, Rng(seed));
    if (keep_states) {
        trace.states.push_back(state.part);
        trace.budgets.push_back(state.budgets);
    }
    for (const RequestSet& request : requests) {
        auto result = lma_step(state, request, observer);
        trace.totals.access += result.breakdown.access;
        trace.totals.movement += result.breakdown.movement;
        trace.totals.fetch_count += result.breakdown.fetch_count;
        trace.steps.push_back(std::move(result.record));
        if (keep_states) {
            trace.states.push_back(state.part);
            trace.budgets.push_back(state.budgets);
        }
    }
    return trace;
}

}  // namespace mssc
