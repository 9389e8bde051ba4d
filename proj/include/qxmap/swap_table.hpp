#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/errors.hpp"

namespace qxmap {

// Injective map from logical to physical qubits: assign[j] is the physical
// qubit hosting logical qubit j.
struct Placement {
    std::vector<int> assign;

    int num_logical() const { return static_cast<int>(assign.size()); }

    // Logical qubit sitting on a physical qubit, or -1 if it is empty.
    int occupant(int physical) const {
        for (int j = 0; j < num_logical(); ++j)
            if (assign[j] == physical) return j;
        return -1;
    }

    // Exchanges the contents (logical qubit or empty slot) of two physical
    // qubits.
    void exchange(int a, int b) {
        for (int& v : assign) {
            if (v == a)
                v = b;
            else if (v == b)
                v = a;
        }
    }

    auto operator<=>(const Placement&) const = default;
};

inline bool placement_injective(const Placement& p) {
    std::vector<int> vals = p.assign;
    std::sort(vals.begin(), vals.end());
    return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
}

// Minimal-SWAP distances between all injective placements of a fixed number
// of logical qubits into an allowed physical subset. A SWAP may sit on any
// undirected coupling edge inside the subset and exchanges whatever the two
// endpoints hold, occupied or empty. Distances come from breadth-first
// search over that move set and are precomputed for every source placement;
// the table is immutable afterwards and safe to read concurrently.
class SwapDistanceTable {
public:
    static constexpr std::size_t kDefaultPlacementCap = 10'000'000;

    SwapDistanceTable(const CouplingMap& cm, int num_logical, std::vector<int> allowed,
                      std::size_t placement_cap = kDefaultPlacementCap)
        : num_logical_(num_logical), allowed_(std::move(allowed)) {
        std::sort(allowed_.begin(), allowed_.end());
        allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
        if (num_logical_ < 0 || num_logical_ > static_cast<int>(allowed_.size()))
            throw std::invalid_argument("need at least as many allowed qubits as logical qubits");
        for (int v : allowed_)
            if (v < 0 || v >= cm.num_physical)
                throw std::invalid_argument("allowed qubit out of range");
        if (!detail::subset_connected(cm.undirected_adjacency(), allowed_) && !allowed_.empty())
            throw std::invalid_argument("allowed subset is not connected");

        for (const auto& [a, b] : cm.undirected_edges()) {
            if (std::binary_search(allowed_.begin(), allowed_.end(), a) &&
                std::binary_search(allowed_.begin(), allowed_.end(), b))
                edges_.emplace_back(a, b);
        }

        std::size_t count = 1;
        for (int i = 0; i < num_logical_; ++i) {
            count *= allowed_.size() - static_cast<std::size_t>(i);
            if (count > placement_cap)
                throw CapExceededError("placement space exceeds the cap of " +
                                       std::to_string(placement_cap));
        }
        // A dense all-pairs matrix is the simple representation; refuse sizes
        // where it stops being one.
        if (count > 20'000)
            throw CapExceededError("placement space too large for a dense distance table (" +
                                   std::to_string(count) + " placements)");

        enumerate_placements();
        build_neighbors();
        build_distances();
    }

    const std::vector<Placement>& placements() const { return placements_; }
    const std::vector<std::pair<int, int>>& generator_edges() const { return edges_; }
    const std::vector<int>& allowed() const { return allowed_; }
    int num_logical() const { return num_logical_; }

    std::size_t index_of(const Placement& p) const {
        auto it = index_.find(p.assign);
        if (it == index_.end()) throw std::invalid_argument("placement not in table");
        return it->second;
    }

    int distance(std::size_t a, std::size_t b) const {
        return dist_[a * placements_.size() + b];
    }

    int distance(const Placement& a, const Placement& b) const {
        return distance(index_of(a), index_of(b));
    }

    // One minimal sequence of undirected edges turning a into b. Ties are
    // broken by BFS discovery order with edges visited lexicographically, so
    // the result is deterministic.
    std::vector<std::pair<int, int>> witness(const Placement& a, const Placement& b) const {
        const std::size_t src = index_of(a);
        const std::size_t dst = index_of(b);
        const std::size_t size = placements_.size();
        std::vector<std::int32_t> pred_state(size, -1);
        std::vector<std::int32_t> pred_edge(size, -1);
        std::vector<char> seen(size, 0);
        std::queue<std::size_t> frontier;
        seen[src] = 1;
        frontier.push(src);
        while (!frontier.empty() && !seen[dst]) {
            std::size_t cur = frontier.front();
            frontier.pop();
            for (std::size_t e = 0; e < edges_.size(); ++e) {
                std::size_t nxt = neighbors_[cur * edges_.size() + e];
                if (!seen[nxt]) {
                    seen[nxt] = 1;
                    pred_state[nxt] = static_cast<std::int32_t>(cur);
                    pred_edge[nxt] = static_cast<std::int32_t>(e);
                    frontier.push(nxt);
                }
            }
        }
        std::vector<std::pair<int, int>> path;
        for (std::size_t cur = dst; cur != src; cur = pred_state[cur])
            path.push_back(edges_[pred_edge[cur]]);
        std::reverse(path.begin(), path.end());
        return path;
    }

private:
    void enumerate_placements() {
        Placement p;
        p.assign.assign(num_logical_, -1);
        std::vector<char> used(allowed_.size(), 0);
        auto recurse = [&](auto&& self, int j) -> void {
            if (j == num_logical_) {
                index_.emplace(p.assign, placements_.size());
                placements_.push_back(p);
                return;
            }
            for (std::size_t i = 0; i < allowed_.size(); ++i) {
                if (used[i]) continue;
                used[i] = 1;
                p.assign[j] = allowed_[i];
                self(self, j + 1);
                used[i] = 0;
            }
        };
        recurse(recurse, 0);
    }

    void build_neighbors() {
        neighbors_.resize(placements_.size() * edges_.size());
        for (std::size_t s = 0; s < placements_.size(); ++s) {
            for (std::size_t e = 0; e < edges_.size(); ++e) {
                Placement q = placements_[s];
                q.exchange(edges_[e].first, edges_[e].second);
                neighbors_[s * edges_.size() + e] =
                    static_cast<std::uint32_t>(index_.at(q.assign));
            }
        }
    }

    void build_distances() {
        const std::size_t size = placements_.size();
        dist_.assign(size * size, std::numeric_limits<std::uint16_t>::max());
        std::vector<std::size_t> frontier, next;
        for (std::size_t src = 0; src < size; ++src) {
            auto* row = dist_.data() + src * size;
            row[src] = 0;
            frontier.assign(1, src);
            std::uint16_t depth = 0;
            while (!frontier.empty()) {
                ++depth;
                next.clear();
                for (std::size_t cur : frontier) {
                    for (std::size_t e = 0; e < edges_.size(); ++e) {
                        std::size_t nxt = neighbors_[cur * edges_.size() + e];
                        if (row[nxt] == std::numeric_limits<std::uint16_t>::max()) {
                            row[nxt] = depth;
                            next.push_back(nxt);
                        }
                    }
                }
                frontier.swap(next);
            }
        }
    }

    int num_logical_;
    std::vector<int> allowed_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<Placement> placements_;
    std::map<std::vector<int>, std::size_t> index_;
    std::vector<std::uint32_t> neighbors_;
    std::vector<std::uint16_t> dist_;
};

// Process-wide cache, keyed by map structure, logical count and subset.
// Tables are expensive enough to share and cheap enough to keep.
inline std::shared_ptr<const SwapDistanceTable> shared_swap_table(const CouplingMap& cm,
                                                                  int num_logical,
                                                                  const std::vector<int>& allowed) {
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const SwapDistanceTable>> cache;

    std::ostringstream key;
    key << cm.num_physical << '|';
    for (const auto& [a, b] : cm.edges) key << a << ',' << b << ';';
    key << '|' << num_logical << '|';
    for (int v : allowed) key << v << ',';

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key.str());
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const SwapDistanceTable>(cm, num_logical, allowed);
    cache.emplace(key.str(), table);
    return table;
}

// Minimal number of coupling-edge SWAPs realizing a permutation of the full
// device: pi maps each physical qubit's state to its new physical position.
inline int swaps_of_permutation(const CouplingMap& cm, const std::vector<int>& pi) {
    if (static_cast<int>(pi.size()) != cm.num_physical)
        throw std::invalid_argument("permutation size must match the device");
    std::vector<char> seen(pi.size(), 0);
    for (int v : pi) {
        if (v < 0 || v >= static_cast<int>(pi.size()) || seen[v])
            throw std::invalid_argument("not a permutation");
        seen[v] = 1;
    }
    std::vector<int> all(cm.num_physical);
    std::iota(all.begin(), all.end(), 0);
    auto table = shared_swap_table(cm, cm.num_physical, all);
    Placement identity{all};
    Placement moved;
    moved.assign.resize(pi.size());
    for (std::size_t j = 0; j < pi.size(); ++j) moved.assign[j] = pi[j];
    return table->distance(identity, moved);
}

}  // namespace qxmap
