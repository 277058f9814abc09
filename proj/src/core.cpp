#include "mssc/core.hpp"

#include <algorithm>
#include <cstdio>

#include "mssc/hash.hpp"

namespace mssc {

Permutation Permutation::identity(int n) {
    std::vector<Element> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return from_order(order);
}

Permutation Permutation::from_order(const std::vector<Element>& front_to_back) {
    const int n = static_cast<int>(front_to_back.size());
    if (n < 1) throw std::invalid_argument("permutation must be nonempty");
    Permutation p;
    p.order_ = front_to_back;
    p.pos_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const Element x = front_to_back[i];
        if (x < 0 || x >= n) throw std::invalid_argument("element id out of range");
        if (p.pos_[x] != 0) throw std::invalid_argument("duplicate element in permutation");
        p.pos_[x] = i + 1;
    }
    return p;
}

int Permutation::position(Element x) const {
    if (x < 0 || x >= n()) throw std::invalid_argument("element id out of range");
    return pos_[x];
}

Element Permutation::element_at(int pos) const {
    if (pos < 1 || pos > n()) throw std::invalid_argument("position out of range");
    return order_[pos - 1];
}

Partitioning Partitioning::from_chunks(int w, std::vector<int> chunk_of) {
    if (w < 1) throw std::invalid_argument("w must be >= 1");
    const int n = (1 << w) - 1;
    if (static_cast<int>(chunk_of.size()) != n)
        throw std::invalid_argument("partitioning needs exactly 2^w - 1 elements");
    Partitioning p;
    p.w_ = w;
    p.chunk_of_ = std::move(chunk_of);
    p.members_.assign(w, {});
    for (Element x = 0; x < n; ++x) {
        const int c = p.chunk_of_[x];
        if (c < 0 || c >= w) throw std::invalid_argument("chunk index out of range");
        p.members_[c].push_back(x);
    }
    if (!p.valid()) throw std::invalid_argument("chunk i must hold exactly 2^i elements");
    return p;
}

int Partitioning::chunk(Element x) const {
    if (x < 0 || x >= n()) throw std::invalid_argument("element id out of range");
    return chunk_of_[x];
}

const std::vector<Element>& Partitioning::members(int chunk_index) const {
    if (chunk_index < 0 || chunk_index >= w_) throw std::invalid_argument("chunk index out of range");
    return members_[chunk_index];
}

void Partitioning::move_element(Element x, int to_chunk) {
    if (x < 0 || x >= n()) throw std::invalid_argument("element id out of range");
    if (to_chunk < 0 || to_chunk >= w_) throw std::invalid_argument("chunk index out of range");
    const int from = chunk_of_[x];
    if (from == to_chunk) return;
    auto& src = members_[from];
    src.erase(std::find(src.begin(), src.end(), x));
    members_[to_chunk].push_back(x);
    chunk_of_[x] = to_chunk;
}

bool Partitioning::valid() const {
    for (int i = 0; i < w_; ++i)
        if (members_[i].size() != static_cast<std::size_t>(1) << i) return false;
    return true;
}

RequestSet::RequestSet(std::vector<Element> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("request set must be nonempty");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
        throw std::invalid_argument("request set members must be distinct");
    if (members_.front() < 0) throw std::invalid_argument("element id out of range");
}

namespace {

// Merge count over seq[lo, hi); buf is scratch of the same size.
Cost count_inversions(std::vector<int>& seq, std::vector<int>& buf, int lo, int hi) {
    if (hi - lo <= 1) return 0;
    const int mid = lo + (hi - lo) / 2;
    Cost count = count_inversions(seq, buf, lo, mid) + count_inversions(seq, buf, mid, hi);
    int i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (seq[i] <= seq[j]) {
            buf[k++] = seq[i++];
        } else {
            count += mid - i;
            buf[k++] = seq[j++];
        }
    }
    while (i < mid) buf[k++] = seq[i++];
    while (j < hi) buf[k++] = seq[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, seq.begin() + lo);
    return count;
}

}  // namespace

Cost kendall_tau(const Permutation& p1, const Permutation& p2) {
    if (p1.n() != p2.n())
        throw UniverseMismatchError("kendall_tau: permutations over different universes");
    const int n = p1.n();
    std::vector<int> seq(n);
    for (int i = 0; i < n; ++i) seq[i] = p2.position(p1.element_at(i + 1));
    std::vector<int> buf(n);
    return count_inversions(seq, buf, 0, n);
}

Cost kendall_tau_naive(const Permutation& p1, const Permutation& p2) {
    if (p1.n() != p2.n())
        throw UniverseMismatchError("kendall_tau: permutations over different universes");
    const int n = p1.n();
    Cost count = 0;
    for (Element x = 0; x < n; ++x)
        for (Element y = x + 1; y < n; ++y)
            if ((p1.position(x) < p1.position(y)) != (p2.position(x) < p2.position(y))) ++count;
    return count;
}

Cost swap_cost(int a, int b) {
    if (a == b) throw std::invalid_argument("swap_cost: positions must differ");
    if (a < 1 || b < 1) throw std::invalid_argument("swap_cost: positions are 1-indexed");
    const int d = a > b ? a - b : b - a;
    return 2 * static_cast<Cost>(d) - 1;
}

Permutation apply_swap(const Permutation& p, int a, int b) {
    if (a < 1 || a > p.n() || b < 1 || b > p.n())
        throw std::invalid_argument("apply_swap: position out of range");
    if (a == b) throw std::invalid_argument("apply_swap: positions must differ");
    std::vector<Element> order = p.order();
    std::swap(order[a - 1], order[b - 1]);
    return Permutation::from_order(order);
}

Cost access_cost_mssc(const Permutation& p, const RequestSet& r) {
    int best = p.n() + 1;
    for (Element x : r.members()) best = std::min(best, p.position(x));
    return best;
}

int padded_size(int raw_n) {
    if (raw_n < 1) throw std::invalid_argument("universe size must be >= 1");
    int w = 1;
    while ((1 << w) - 1 < raw_n) ++w;
    return (1 << w) - 1;
}

PaddedUniverse pad_universe(int raw_n, const Permutation& raw_permutation) {
    if (raw_permutation.n() != raw_n)
        throw std::invalid_argument("pad_universe: permutation size mismatch");
    const int n = padded_size(raw_n);
    std::vector<Element> order = raw_permutation.order();
    for (Element d = raw_n; d < n; ++d) order.push_back(d);
    return PaddedUniverse{n, Permutation::from_order(order)};
}

Instance make_instance(int n_raw, const std::vector<Element>& initial_order,
                       const std::vector<std::vector<Element>>& request_sets) {
    if (static_cast<int>(initial_order.size()) != n_raw)
        throw std::invalid_argument("initial_order must list all n_raw elements");
    Instance inst;
    inst.n_raw = n_raw;
    auto padded = pad_universe(n_raw, Permutation::from_order(initial_order));
    inst.n = padded.n;
    inst.initial_permutation = std::move(padded.permutation);
    inst.requests.reserve(request_sets.size());
    inst.r = 0;
    for (const auto& members : request_sets) {
        RequestSet rs(members);
        if (rs.members().back() >= n_raw)
            throw std::invalid_argument("request references a dummy or unknown element");
        inst.r = std::max(inst.r, rs.size());
        inst.requests.push_back(std::move(rs));
    }
    return inst;
}

std::uint64_t permutation_digest(const Permutation& p) {
    Fnv1a64 h;
    for (Element x = 0; x < p.n(); ++x) h.i32(p.position(x));
    return h.value();
}

std::uint64_t partitioning_digest(const Partitioning& p) {
    Fnv1a64 h;
    for (int c : p.chunk_of()) h.i32(c);
    return h.value();
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::uint64_t from_hex(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

}  // namespace mssc
