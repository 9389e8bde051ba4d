#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/circuit.hpp"

namespace qxmap {

// Where the placement may change: before every CNOT except the first, or
// only before a restricted point set. Point indices are 1-based CNOT
// positions, always within {2..|cnots|}.
enum class PermutationPolicy { AllGates, DisjointQubits, OddGates, QubitTriangle, Custom };

inline std::set<int> points_all(const CnotSkeleton& sk) {
    std::set<int> points;
    for (int k = 2; k <= static_cast<int>(sk.cnots.size()); ++k) points.insert(k);
    return points;
}

namespace detail {

// Greedy left-to-right clustering: extend the current block while the
// predicate accepts the next CNOT, then start a new block there. Returns the
// 1-based first-gate index of every block except the first.
template <typename StartBlock, typename Extends>
std::set<int> cluster_points(const CnotSkeleton& sk, StartBlock start_block, Extends extends) {
    std::set<int> points;
    bool in_block = false;
    for (std::size_t k = 0; k < sk.cnots.size(); ++k) {
        if (in_block && extends(sk.cnots[k])) continue;
        if (in_block) points.insert(static_cast<int>(k) + 1);
        start_block(sk.cnots[k]);
        in_block = true;
    }
    return points;
}

}  // namespace detail

// Consecutive CNOTs touching pairwise disjoint qubit sets can share one
// placement, so a permutation is only allowed at each block boundary.
inline std::set<int> points_disjoint_qubits(const CnotSkeleton& sk) {
    std::set<int> support;
    return detail::cluster_points(
        sk,
        [&](const CnotGate& g) { support = {g.control, g.target}; },
        [&](const CnotGate& g) {
            if (support.count(g.control) || support.count(g.target)) return false;
            support.insert(g.control);
            support.insert(g.target);
            return true;
        });
}

// Permutations only before odd gate positions (3, 5, ...).
inline std::set<int> points_odd_gates(const CnotSkeleton& sk) {
    std::set<int> points;
    for (int k = 3; k <= static_cast<int>(sk.cnots.size()); k += 2) points.insert(k);
    return points;
}

inline bool has_triangle(const CouplingMap& cm) {
    const auto edges = cm.undirected_edges();
    for (const auto& [a, b] : edges)
        for (int c = b + 1; c < cm.num_physical; ++c)
            if (cm.has_undirected(a, c) && cm.has_undirected(b, c)) return true;
    return false;
}

// Blocks of consecutive CNOTs whose combined support stays within three
// qubits can be hosted on one triangle of the device, so permutations are
// only allowed at block boundaries. Requires the undirected coupling graph
// to contain a 3-clique.
inline std::set<int> points_qubit_triangle(const CnotSkeleton& sk, const CouplingMap& cm) {
    if (!has_triangle(cm))
        throw std::invalid_argument("architecture has no qubit triangle");
    std::set<int> support;
    return detail::cluster_points(
        sk,
        [&](const CnotGate& g) { support = {g.control, g.target}; },
        [&](const CnotGate& g) {
            std::set<int> extended = support;
            extended.insert(g.control);
            extended.insert(g.target);
            if (extended.size() > 3) return false;
            support = std::move(extended);
            return true;
        });
}

// The odd-gates restriction assumes some qubit can talk to two others;
// callers may use this to warn when that does not hold.
inline bool odd_gates_supported(const CouplingMap& cm) {
    const auto adj = cm.undirected_adjacency();
    for (const auto& neighbors : adj)
        if (neighbors.size() >= 2) return true;
    return false;
}

inline std::set<int> points_for_policy(PermutationPolicy policy, const CnotSkeleton& sk,
                                       const CouplingMap& cm,
                                       const std::set<int>& custom = {}) {
    switch (policy) {
        case PermutationPolicy::AllGates: return points_all(sk);
        case PermutationPolicy::DisjointQubits: return points_disjoint_qubits(sk);
        case PermutationPolicy::OddGates: return points_odd_gates(sk);
        case PermutationPolicy::QubitTriangle: return points_qubit_triangle(sk, cm);
        case PermutationPolicy::Custom: {
            if (custom.count(1))
                throw std::invalid_argument("the initial mapping is free; 1 is not a point");
            for (int k : custom)
                if (k < 2 || k > static_cast<int>(sk.cnots.size()))
                    throw std::invalid_argument("point " + std::to_string(k) +
                                                " outside the circuit");
            return custom;
        }
    }
    throw std::logic_error("unknown policy");
}

}  // namespace qxmap
