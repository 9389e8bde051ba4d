#pragma once

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/circuit.hpp"
#include "qxmap/errors.hpp"
#include "qxmap/swap_table.hpp"

namespace qxmap {

constexpr int kSwapCost = 7;   // one SWAP decomposes into 3 CNOTs + 4 H
constexpr int kSwitchCost = 4; // reversing a CNOT direction adds 4 H

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

inline void check_deadline(const Deadline& deadline) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
        throw TimeoutError("time budget exhausted");
}

struct SolveOptions {
    Deadline deadline;
    int jobs = 1;
};

// A complete mapping: one placement per CNOT, the direction switch flags,
// and the SWAP edges realizing each placement change. Keys of
// swap_sequences are 1-based CNOT indices (the permutation points).
struct MappingSolution {
    Placement initial;
    std::vector<Placement> placements;
    std::vector<bool> switches;
    std::map<int, std::vector<std::pair<int, int>>> swap_sequences;
    long long cost = 0;
    std::vector<int> subset_used;
};

namespace detail {

inline void validate_solver_inputs(const CnotSkeleton& sk, const CouplingMap& cm,
                                   const std::vector<int>& allowed,
                                   const std::set<int>& points) {
    if (static_cast<int>(allowed.size()) < sk.num_qubits)
        throw std::invalid_argument("need at least as many allowed qubits as logical qubits");
    for (int v : allowed)
        if (v < 0 || v >= cm.num_physical)
            throw std::invalid_argument("allowed qubit out of range");
    for (const CnotGate& g : sk.cnots) {
        if (g.control < 0 || g.control >= sk.num_qubits || g.target < 0 ||
            g.target >= sk.num_qubits || g.control == g.target)
            throw std::invalid_argument("skeleton gate indices out of range");
    }
    for (int k : points)
        if (k < 2 || k > static_cast<int>(sk.cnots.size()))
            throw std::invalid_argument("permutation point " + std::to_string(k) +
                                        " outside {2..cnot count}");
}

// Legality of a placement for one CNOT: 0 = forward edge available,
// 1 = reversed only (needs the 4-H switch), -1 = neither.
inline int direction_of(const Placement& p, const CnotGate& g, const CouplingMap& cm) {
    const int pc = p.assign[g.control];
    const int pt = p.assign[g.target];
    if (cm.has_edge(pc, pt)) return 0;
    if (cm.has_edge(pt, pc)) return 1;
    return -1;
}

inline MappingSolution empty_circuit_solution(const CnotSkeleton& sk,
                                              const std::vector<int>& allowed) {
    MappingSolution sol;
    sol.subset_used = allowed;
    std::sort(sol.subset_used.begin(), sol.subset_used.end());
    sol.initial.assign.assign(sk.num_qubits, -1);
    for (int j = 0; j < sk.num_qubits; ++j) sol.initial.assign[j] = sol.subset_used[j];
    return sol;
}

}  // namespace detail

// Exact minimum-cost mapping over the allowed subset with the given
// permutation points: a shortest path through per-CNOT placement layers
// where nodes cost 4 when only the reversed CNOT direction exists and layer
// transitions cost 7 per SWAP of the cheapest realizing sequence. Ties are
// broken toward the lexicographically smallest placement sequence. Returns
// nullopt when no legal placement sequence exists (possible with restricted
// points).
inline std::optional<MappingSolution> solve_exact(const CnotSkeleton& sk, const CouplingMap& cm,
                                                  const std::vector<int>& allowed,
                                                  const std::set<int>& points,
                                                  const SolveOptions& options = {}) {
    detail::validate_solver_inputs(sk, cm, allowed, points);
    if (sk.cnots.empty()) return detail::empty_circuit_solution(sk, allowed);

    auto table = shared_swap_table(cm, sk.num_qubits, allowed);
    const auto& placements = table->placements();
    const std::size_t size = placements.size();
    const int num_cnots = static_cast<int>(sk.cnots.size());
    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    // Node costs per layer; -1 direction marks an illegal placement.
    std::vector<std::vector<int>> direction(num_cnots, std::vector<int>(size));
    for (int k = 0; k < num_cnots; ++k) {
        bool any = false;
        for (std::size_t s = 0; s < size; ++s) {
            direction[k][s] = detail::direction_of(placements[s], sk.cnots[k], cm);
            any = any || direction[k][s] >= 0;
        }
        if (!any) return std::nullopt;
    }
    auto node_cost = [&](int k, std::size_t s) -> long long {
        return direction[k][s] == 1 ? kSwitchCost : 0;
    };

    // cost_to_go[k][s]: cheapest completion from layer k standing on s.
    std::vector<std::vector<long long>> cost_to_go(num_cnots,
                                                   std::vector<long long>(size, kInf));
    for (std::size_t s = 0; s < size; ++s)
        if (direction[num_cnots - 1][s] >= 0)
            cost_to_go[num_cnots - 1][s] = node_cost(num_cnots - 1, s);
    for (int k = num_cnots - 2; k >= 0; --k) {
        check_deadline(options.deadline);
        const bool is_point = points.count(k + 2) > 0;
        for (std::size_t s = 0; s < size; ++s) {
            if (direction[k][s] < 0) continue;
            long long best = kInf;
            if (is_point) {
                for (std::size_t t = 0; t < size; ++t) {
                    if (cost_to_go[k + 1][t] == kInf) continue;
                    long long c =
                        cost_to_go[k + 1][t] + kSwapCost * (long long)table->distance(s, t);
                    best = std::min(best, c);
                }
            } else if (cost_to_go[k + 1][s] != kInf) {
                best = cost_to_go[k + 1][s];
            }
            if (best != kInf) cost_to_go[k][s] = node_cost(k, s) + best;
        }
    }

    long long total = kInf;
    for (std::size_t s = 0; s < size; ++s) total = std::min(total, cost_to_go[0][s]);
    if (total == kInf) return std::nullopt;

    // Forward walk picking the smallest placement index that still achieves
    // the optimum; placement enumeration order is lexicographic.
    std::vector<std::size_t> chosen(num_cnots);
    for (std::size_t s = 0; s < size; ++s) {
        if (cost_to_go[0][s] == total) {
            chosen[0] = s;
            break;
        }
    }
    for (int k = 1; k < num_cnots; ++k) {
        const std::size_t prev = chosen[k - 1];
        const long long remaining = cost_to_go[k - 1][prev] - node_cost(k - 1, prev);
        const bool is_point = points.count(k + 1) > 0;
        bool found = false;
        for (std::size_t t = 0; t < size && !found; ++t) {
            if (cost_to_go[k][t] == kInf) continue;
            const long long trans =
                is_point ? kSwapCost * (long long)table->distance(prev, t)
                         : (t == prev ? 0 : kInf);
            if (trans != kInf && cost_to_go[k][t] + trans == remaining) {
                chosen[k] = t;
                found = true;
            }
        }
        if (!found) throw std::logic_error("path reconstruction lost the optimum");
    }

    MappingSolution sol;
    sol.subset_used = table->allowed();
    sol.cost = total;
    sol.initial = placements[chosen[0]];
    for (int k = 0; k < num_cnots; ++k) {
        sol.placements.push_back(placements[chosen[k]]);
        sol.switches.push_back(direction[k][chosen[k]] == 1);
    }
    for (int k : points)
        sol.swap_sequences[k] =
            table->witness(placements[chosen[k - 2]], placements[chosen[k - 1]]);
    return sol;
}

// Exhaustive reference search, deliberately sharing no search code with
// solve_exact: the CNOT list is cut into segments at the permutation points,
// every sequence of per-segment placements is enumerated outright, and each
// sequence is scored from the distance table plus direction penalties.
// Intended for tiny instances; throws CapExceededError beyond the cap.
inline std::optional<long long> brute_force_oracle(const CnotSkeleton& sk, const CouplingMap& cm,
                                                   const std::vector<int>& allowed,
                                                   const std::set<int>& points,
                                                   std::size_t combination_cap = 50'000'000,
                                                   const Deadline& deadline = {}) {
    detail::validate_solver_inputs(sk, cm, allowed, points);
    if (sk.cnots.empty()) return 0;

    auto table = shared_swap_table(cm, sk.num_qubits, allowed);
    const auto& placements = table->placements();

    double combos = 1.0;
    for (std::size_t i = 0; i <= points.size(); ++i) combos *= (double)placements.size();
    if (combos > (double)combination_cap)
        throw CapExceededError("oracle instance exceeds the combination cap");

    // Segment boundaries: CNOT 0 starts the first segment, each point k
    // starts a new one at 0-based index k-1.
    std::vector<std::size_t> segment_start{0};
    for (int k : points) segment_start.push_back(static_cast<std::size_t>(k - 1));
    segment_start.push_back(sk.cnots.size());

    const std::size_t num_segments = segment_start.size() - 1;

    // Per segment: placements legal for every CNOT in it, with the summed
    // direction penalty.
    std::vector<std::vector<std::pair<std::size_t, long long>>> legal(num_segments);
    for (std::size_t seg = 0; seg < num_segments; ++seg) {
        for (std::size_t s = 0; s < placements.size(); ++s) {
            long long penalty = 0;
            bool ok = true;
            for (std::size_t g = segment_start[seg]; g < segment_start[seg + 1]; ++g) {
                int dir = detail::direction_of(placements[s], sk.cnots[g], cm);
                if (dir < 0) {
                    ok = false;
                    break;
                }
                penalty += dir == 1 ? kSwitchCost : 0;
            }
            if (ok) legal[seg].emplace_back(s, penalty);
        }
        if (legal[seg].empty()) return std::nullopt;
    }

    long long best = std::numeric_limits<long long>::max();
    std::vector<std::size_t> stack_state(num_segments);
    auto recurse = [&](auto&& self, std::size_t seg, long long cost_so_far) -> void {
        if (seg % 2 == 0) check_deadline(deadline);
        if (seg == num_segments) {
            best = std::min(best, cost_so_far);
            return;
        }
        for (const auto& [s, penalty] : legal[seg]) {
            long long cost = cost_so_far + penalty;
            if (seg > 0)
                cost += kSwapCost * (long long)table->distance(stack_state[seg - 1], s);
            stack_state[seg] = s;
            self(self, seg + 1, cost);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

// Checks the structural invariants of a solution against the skeleton and
// architecture without reusing any of the search machinery.
inline bool validate_solution(const CnotSkeleton& sk, const CouplingMap& cm,
                              const MappingSolution& sol) {
    const int n = sk.num_qubits;
    const std::size_t num_cnots = sk.cnots.size();
    if (sol.placements.size() != num_cnots || sol.switches.size() != num_cnots) return false;
    if (sol.initial.num_logical() != n) return false;

    auto in_subset = [&](const Placement& p) {
        for (int v : p.assign)
            if (!std::binary_search(sol.subset_used.begin(), sol.subset_used.end(), v))
                return false;
        return true;
    };
    if (!placement_injective(sol.initial) || !in_subset(sol.initial)) return false;

    long long swaps = 0;
    Placement current = sol.initial;
    for (std::size_t k = 0; k < num_cnots; ++k) {
        if (k == 0) {
            if (sol.placements[0] != sol.initial) return false;
        } else {
            auto it = sol.swap_sequences.find(static_cast<int>(k) + 1);
            if (it != sol.swap_sequences.end()) {
                for (const auto& [a, b] : it->second) {
                    if (!cm.has_undirected(a, b)) return false;
                    current.exchange(a, b);
                    ++swaps;
                }
            }
            if (sol.placements[k] != current) return false;
        }
        if (!placement_injective(sol.placements[k]) || !in_subset(sol.placements[k]))
            return false;
        const int pc = sol.placements[k].assign[sk.cnots[k].control];
        const int pt = sol.placements[k].assign[sk.cnots[k].target];
        if (sol.switches[k] ? !cm.has_edge(pt, pc) : !cm.has_edge(pc, pt)) return false;
    }
    long long switch_count = std::count(sol.switches.begin(), sol.switches.end(), true);
    return sol.cost == kSwapCost * swaps + kSwitchCost * switch_count;
}

namespace detail {

// Total order used to merge equal-cost solutions deterministically.
inline bool solution_less(const MappingSolution& a, const MappingSolution& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.placements != b.placements) return a.placements < b.placements;
    if (a.subset_used != b.subset_used) return a.subset_used < b.subset_used;
    return a.swap_sequences < b.swap_sequences;
}

}  // namespace detail

// Solves every connected size-n subset separately and keeps the cheapest
// result. Subsets may be evaluated in parallel; the merge is a deterministic
// minimum, so the outcome does not depend on the job count.
inline std::optional<MappingSolution> solve_with_subsets(const CnotSkeleton& sk,
                                                         const CouplingMap& cm,
                                                         const std::set<int>& points,
                                                         const SolveOptions& options = {}) {
    if (sk.num_qubits > cm.num_physical)
        throw std::invalid_argument("more logical than physical qubits");
    const auto subsets = connected_subsets(cm, std::max(sk.num_qubits, 1));
    if (subsets.empty()) return std::nullopt;

    std::vector<std::optional<MappingSolution>> results(subsets.size());
    if (options.jobs > 1) {
        std::vector<std::future<std::optional<MappingSolution>>> futures;
        futures.reserve(subsets.size());
        for (const auto& subset : subsets)
            futures.push_back(std::async(std::launch::async, [&, subset] {
                return solve_exact(sk, cm, subset, points, options);
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < subsets.size(); ++i)
            results[i] = solve_exact(sk, cm, subsets[i], points, options);
    }

    std::optional<MappingSolution> best;
    for (auto& r : results) {
        if (!r) continue;
        if (!best || detail::solution_less(*r, *best)) best = std::move(r);
    }
    return best;
}

}  // namespace qxmap
