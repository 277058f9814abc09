#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mssc {

// Elements are dense ids 0..n-1. List positions are 1-indexed.
using Element = std::int32_t;
using Cost = std::int64_t;

struct UniverseMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested exact oracle would exceed its configured state-space cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bijection between elements and list positions 1..n. A default-constructed
// permutation is an empty placeholder (n() == 0).
class Permutation {
public:
    Permutation() = default;
    static Permutation identity(int n);
    static Permutation from_order(const std::vector<Element>& front_to_back);

    int n() const { return static_cast<int>(order_.size()); }
    int position(Element x) const;
    Element element_at(int pos) const;
    const std::vector<Element>& order() const { return order_; }

    bool operator==(const Permutation&) const = default;

private:
    std::vector<int> pos_;        // by element id, values 1..n
    std::vector<Element> order_;  // by position-1
};

// Map from elements to chunk indexes 0..w-1; valid when chunk i holds
// exactly 2^i elements (so n = 2^w - 1).
class Partitioning {
public:
    Partitioning() = default;
    static Partitioning from_chunks(int w, std::vector<int> chunk_of);

    int w() const { return w_; }
    int n() const { return static_cast<int>(chunk_of_.size()); }
    int chunk(Element x) const;
    const std::vector<Element>& members(int chunk_index) const;
    const std::vector<int>& chunk_of() const { return chunk_of_; }

    // Relocates one element. Intermediate states may be invalid; callers
    // restore validity before the state is observed.
    void move_element(Element x, int to_chunk);
    bool valid() const;

    bool operator==(const Partitioning& o) const { return chunk_of_ == o.chunk_of_; }

private:
    int w_ = 0;
    std::vector<int> chunk_of_;
    std::vector<std::vector<Element>> members_;
};

// Nonempty set of distinct elements, stored sorted.
class RequestSet {
public:
    explicit RequestSet(std::vector<Element> members);
    const std::vector<Element>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }

    bool operator==(const RequestSet&) const = default;

private:
    std::vector<Element> members_;
};

struct Instance {
    int n_raw = 0;  // pre-padding universe size
    int n = 0;      // padded, 2^w - 1
    Permutation initial_permutation;  // over the padded universe
    std::vector<RequestSet> requests;
    int r = 0;  // max request cardinality
};

struct CostLedger {
    Cost access = 0;
    Cost reorder = 0;
    std::vector<std::pair<Cost, Cost>> per_step;

    void add(Cost access_cost, Cost reorder_cost) {
        access += access_cost;
        reorder += reorder_cost;
        per_step.emplace_back(access_cost, reorder_cost);
    }
    Cost total() const { return access + reorder; }
};

// Number of discordant pairs; equals the minimum number of adjacent swaps
// turning p1 into p2. O(n log n) merge count.
Cost kendall_tau(const Permutation& p1, const Permutation& p2);
// O(n^2) pair count, kept as the self-check oracle for kendall_tau.
Cost kendall_tau_naive(const Permutation& p1, const Permutation& p2);

// Adjacent-transposition cost 2|b-a| - 1 of exchanging positions a and b.
Cost swap_cost(int a, int b);

// p with the elements at positions a and b exchanged.
Permutation apply_swap(const Permutation& p, int a, int b);

Cost access_cost_mssc(const Permutation& p, const RequestSet& r);

// Smallest 2^w - 1 >= raw_n.
int padded_size(int raw_n);

struct PaddedUniverse {
    int n;
    Permutation permutation;
};

// Extends the universe with dummy elements (ids raw_n..n-1) occupying the
// last list positions; real elements keep their relative order.
PaddedUniverse pad_universe(int raw_n, const Permutation& raw_permutation);

// Builds a padded instance from raw data; validates that requests reference
// only real (non-dummy) elements and computes r.
Instance make_instance(int n_raw, const std::vector<Element>& initial_order,
                       const std::vector<std::vector<Element>>& request_sets);

std::uint64_t permutation_digest(const Permutation& p);
std::uint64_t partitioning_digest(const Partitioning& p);

}  // namespace mssc
