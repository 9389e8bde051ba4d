#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/circuit.hpp"
#include "qxmap/solver.hpp"
#include "qxmap/swap_table.hpp"

namespace qxmap {

struct Clause {
    std::vector<int> lits;  // DIMACS literals, 1-based variables
};

struct SoftClause {
    long long weight = 0;
    int lit = 0;  // always a negated selector variable
};

// Variable numbering for one encoded instance. Ids are dense and 1-based:
// first the placement variables x, then the transition selectors y, then the
// direction switches z, then all auxiliary (Tseitin) variables.
//
//   x(k, i, j)  logical j sits on physical i before CNOT k    (k 1-based)
//   y(k, a, b)  the placement pair (a, b) is taken at point k (table indices)
//   z(k)        CNOT k is applied with control/target switched
struct VarBook {
    int num_cnots = 0;
    int num_logical = 0;
    std::vector<int> allowed;          // sorted physical subset
    std::vector<int> points;           // sorted, 1-based CNOT indices
    std::size_t num_placements = 0;

    int x_begin = 1, x_count = 0;
    int y_begin = 0, y_count = 0;
    int z_begin = 0, z_count = 0;
    int aux_begin = 0, aux_count = 0;

    int allowed_pos(int physical) const {
        auto it = std::lower_bound(allowed.begin(), allowed.end(), physical);
        if (it == allowed.end() || *it != physical)
            throw std::invalid_argument("physical qubit not in the allowed subset");
        return static_cast<int>(it - allowed.begin());
    }

    int x(int k, int physical, int logical) const {
        return x_begin +
               ((k - 1) * static_cast<int>(allowed.size()) + allowed_pos(physical)) *
                   num_logical +
               logical;
    }

    int y(int k, std::size_t prev_index, std::size_t cur_index) const {
        auto it = std::lower_bound(points.begin(), points.end(), k);
        if (it == points.end() || *it != k)
            throw std::invalid_argument("not a permutation point");
        std::size_t point_pos = static_cast<std::size_t>(it - points.begin());
        return y_begin + static_cast<int>((point_pos * num_placements + prev_index) *
                                              num_placements +
                                          cur_index);
    }

    int z(int k) const { return z_begin + (k - 1); }
};

struct EncodedInstance {
    int var_count = 0;
    std::vector<Clause> hard;
    std::vector<SoftClause> soft;
    VarBook book;
    std::string circuit_id;
    std::string arch_id;
    std::shared_ptr<const SwapDistanceTable> table;
};

// Builds the Boolean formulation of the mapping problem over the allowed
// subset with permutations admitted at the given 1-based CNOT points:
//   - per step and logical qubit exactly one host, per host at most one
//     logical qubit (at-least-one clause plus pairwise at-most-one);
//   - per CNOT a disjunction over coupling edges of "control/target sit on
//     the edge", in either orientation, via implication-defined auxiliaries;
//   - per point a selector y for every ordered placement pair, tied to
//     placement-selector auxiliaries of the two adjacent steps, so exactly
//     one y holds in every model; non-point steps pin equal placements;
//   - z defined as "the reversed orientation is the one realized";
//   - soft unit clauses not-y weighted 7 per SWAP of the pair's distance and
//     not-z weighted 4.
inline EncodedInstance encode(const CnotSkeleton& sk, const CouplingMap& cm,
                              const std::vector<int>& allowed, const std::set<int>& points) {
    if (sk.cnots.empty()) throw std::invalid_argument("skeleton has no CNOT gates");
    if (points.count(1)) throw std::invalid_argument("the initial mapping is free; 1 is not a point");
    detail::validate_solver_inputs(sk, cm, allowed, points);

    EncodedInstance inst;
    inst.table = shared_swap_table(cm, sk.num_qubits, allowed);
    const auto& placements = inst.table->placements();
    const std::size_t num_placements = placements.size();
    const int num_cnots = static_cast<int>(sk.cnots.size());
    const int n = sk.num_qubits;

    VarBook& book = inst.book;
    book.num_cnots = num_cnots;
    book.num_logical = n;
    book.allowed = inst.table->allowed();
    book.points.assign(points.begin(), points.end());
    book.num_placements = num_placements;
    const int a_size = static_cast<int>(book.allowed.size());

    book.x_count = num_cnots * a_size * n;
    book.y_begin = book.x_begin + book.x_count;
    const std::size_t y_total = points.size() * num_placements * num_placements;
    if (y_total > 50'000'000)
        throw CapExceededError("transition selector count too large to encode");
    book.y_count = static_cast<int>(y_total);
    book.z_begin = book.y_begin + book.y_count;
    book.z_count = num_cnots;
    book.aux_begin = book.z_begin + book.z_count;

    int next_aux = book.aux_begin;
    auto fresh_aux = [&] { return next_aux++; };
    auto add_hard = [&](std::vector<int> lits) { inst.hard.push_back({std::move(lits)}); };

    // Placement well-formedness per step.
    for (int k = 1; k <= num_cnots; ++k) {
        for (int j = 0; j < n; ++j) {
            std::vector<int> at_least_one;
            for (int i : book.allowed) at_least_one.push_back(book.x(k, i, j));
            add_hard(at_least_one);
            for (std::size_t a = 0; a < book.allowed.size(); ++a)
                for (std::size_t b = a + 1; b < book.allowed.size(); ++b)
                    add_hard({-book.x(k, book.allowed[a], j), -book.x(k, book.allowed[b], j)});
        }
        for (int i : book.allowed)
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = j1 + 1; j2 < n; ++j2)
                    add_hard({-book.x(k, i, j1), -book.x(k, i, j2)});
    }

    // Coupling admissibility and switch definition per CNOT. The reversed
    // orientation auxiliaries are shared between the admissibility
    // disjunction and the z definition.
    std::vector<std::pair<int, int>> subset_edges;
    for (const auto& e : cm.edges)
        if (std::binary_search(book.allowed.begin(), book.allowed.end(), e.first) &&
            std::binary_search(book.allowed.begin(), book.allowed.end(), e.second))
            subset_edges.push_back(e);

    for (int k = 1; k <= num_cnots; ++k) {
        const int c = sk.cnots[k - 1].control;
        const int t = sk.cnots[k - 1].target;
        std::vector<int> any_orientation;
        std::vector<int> reversed_auxes;
        for (const auto& [i, j] : subset_edges) {
            const int forward = fresh_aux();
            add_hard({-forward, book.x(k, i, c)});
            add_hard({-forward, book.x(k, j, t)});
            any_orientation.push_back(forward);

            const int reversed = fresh_aux();
            add_hard({-reversed, book.x(k, i, t)});
            add_hard({-reversed, book.x(k, j, c)});
            add_hard({-book.x(k, i, t), -book.x(k, j, c), reversed});
            any_orientation.push_back(reversed);
            reversed_auxes.push_back(reversed);
        }
        add_hard(any_orientation);

        std::vector<int> z_or{-book.z(k)};
        for (int aux : reversed_auxes) {
            add_hard({-aux, book.z(k)});
            z_or.push_back(aux);
        }
        add_hard(z_or);
    }

    // Placement selectors per step adjacent to a point; s(step, p) implies
    // the full x description of placement p, and at least one selector holds
    // per step (uniqueness follows from the x constraints).
    std::set<int> selector_steps;
    for (int k : points) {
        selector_steps.insert(k - 1);
        selector_steps.insert(k);
    }
    std::map<int, int> selector_base;
    for (int step : selector_steps) {
        selector_base[step] = next_aux;
        next_aux += static_cast<int>(num_placements);
        std::vector<int> at_least_one;
        for (std::size_t p = 0; p < num_placements; ++p) {
            const int s = selector_base[step] + static_cast<int>(p);
            for (int j = 0; j < n; ++j)
                add_hard({-s, book.x(step, placements[p].assign[j], j)});
            at_least_one.push_back(s);
        }
        add_hard(at_least_one);
    }

    // Transitions: selectors at points, hard equality elsewhere.
    for (int k = 2; k <= num_cnots; ++k) {
        if (!points.count(k)) {
            for (int i : book.allowed)
                for (int j = 0; j < n; ++j) {
                    add_hard({-book.x(k - 1, i, j), book.x(k, i, j)});
                    add_hard({book.x(k - 1, i, j), -book.x(k, i, j)});
                }
            continue;
        }
        for (std::size_t a = 0; a < num_placements; ++a) {
            for (std::size_t b = 0; b < num_placements; ++b) {
                const int y = book.y(k, a, b);
                const int sa = selector_base.at(k - 1) + static_cast<int>(a);
                const int sb = selector_base.at(k) + static_cast<int>(b);
                add_hard({-y, sa});
                add_hard({-y, sb});
                add_hard({-sa, -sb, y});
                const long long weight =
                    (long long)kSwapCost * inst.table->distance(a, b);
                if (weight > 0) inst.soft.push_back({weight, -y});
            }
        }
    }

    for (int k = 1; k <= num_cnots; ++k) inst.soft.push_back({kSwitchCost, -book.z(k)});

    book.aux_count = next_aux - book.aux_begin;
    inst.var_count = next_aux - 1;
    inst.arch_id = cm.name.empty() ? "anonymous" : cm.name;
    std::ostringstream id;
    id << n << "q-" << num_cnots << "cx-a" << a_size << "-p" << points.size();
    inst.circuit_id = id.str();
    return inst;
}

// Standard weighted CNF text: hard clauses carry the top weight
// 1 + sum of soft weights. Output is deterministic byte-for-byte.
inline std::string emit_wcnf(const EncodedInstance& inst) {
    long long top = 1;
    for (const SoftClause& s : inst.soft) top += s.weight;

    std::ostringstream out;
    out << "c circuit " << inst.circuit_id << "\n";
    out << "c arch " << inst.arch_id << "\n";
    out << "c vars x " << inst.book.x_begin << " " << inst.book.x_count << " y "
        << inst.book.y_begin << " " << inst.book.y_count << " z " << inst.book.z_begin << " "
        << inst.book.z_count << " aux " << inst.book.aux_begin << " " << inst.book.aux_count
        << "\n";
    out << "p wcnf " << inst.var_count << " " << inst.hard.size() + inst.soft.size() << " "
        << top << "\n";
    for (const Clause& c : inst.hard) {
        out << top;
        for (int lit : c.lits) out << ' ' << lit;
        out << " 0\n";
    }
    for (const SoftClause& s : inst.soft) out << s.weight << ' ' << s.lit << " 0\n";
    return out.str();
}

// Sidecar describing the variable layout so external solver models can be
// decoded: id ranges per family, the orderings, and the placement list the
// y indices refer to.
inline std::string emit_varmap(const EncodedInstance& inst) {
    const VarBook& b = inst.book;
    std::ostringstream out;
    out << "arch " << inst.arch_id << "\n";
    out << "circuit " << inst.circuit_id << "\n";
    out << "logical " << b.num_logical << "\n";
    out << "cnots " << b.num_cnots << "\n";
    out << "allowed";
    for (int v : b.allowed) out << ' ' << v;
    out << "\npoints";
    for (int k : b.points) out << ' ' << k;
    out << "\nplacements " << b.num_placements << "\n";
    for (std::size_t p = 0; p < inst.table->placements().size(); ++p) {
        out << "placement " << p;
        for (int v : inst.table->placements()[p].assign) out << ' ' << v;
        out << "\n";
    }
    out << "x-range " << b.x_begin << " " << b.x_count << "\n";
    out << "x-layout row-major (cnot 1.." << b.num_cnots << ", allowed-position, logical)\n";
    out << "y-range " << b.y_begin << " " << b.y_count << "\n";
    out << "y-layout row-major (point in listed order, previous placement, current placement)\n";
    out << "z-range " << b.z_begin << " " << b.z_count << "\n";
    out << "z-layout (cnot 1.." << b.num_cnots << ")\n";
    out << "aux-range " << b.aux_begin << " " << b.aux_count << "\n";
    return out.str();
}

struct EvalResult {
    bool satisfies = false;
    long long cost = 0;
};

// Checks all hard clauses and sums the weights of violated soft clauses;
// that sum is exactly the cost objective of the instance. The assignment is
// 1-based: assignment[v] for variable v, index 0 unused.
inline EvalResult evaluate_assignment(const EncodedInstance& inst,
                                      const std::vector<bool>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(inst.var_count) + 1)
        throw std::invalid_argument("assignment must cover all variables");
    auto lit_true = [&](int lit) {
        return lit > 0 ? assignment[lit] : !assignment[-lit];
    };
    EvalResult res;
    res.satisfies = true;
    for (const Clause& c : inst.hard) {
        bool sat = false;
        for (int lit : c.lits)
            if (lit_true(lit)) {
                sat = true;
                break;
            }
        if (!sat) {
            res.satisfies = false;
            break;
        }
    }
    for (const SoftClause& s : inst.soft)
        if (!lit_true(s.lit)) res.cost += s.weight;
    return res;
}

// Translates a solver result into a full variable assignment: x from the
// per-CNOT placements, y from the realized transition at each point, z from
// the switch flags, auxiliaries propagated from their definitions.
inline std::vector<bool> solution_to_assignment(const MappingSolution& sol,
                                                const EncodedInstance& inst) {
    const VarBook& b = inst.book;
    if (static_cast<int>(sol.placements.size()) != b.num_cnots ||
        sol.initial.num_logical() != b.num_logical || sol.subset_used != b.allowed)
        throw std::invalid_argument("solution shape does not match the instance");

    std::vector<bool> assignment(static_cast<std::size_t>(inst.var_count) + 1, false);
    for (int k = 1; k <= b.num_cnots; ++k)
        for (int j = 0; j < b.num_logical; ++j)
            assignment[b.x(k, sol.placements[k - 1].assign[j], j)] = true;

    for (int k : b.points) {
        const std::size_t prev = inst.table->index_of(sol.placements[k - 2]);
        const std::size_t cur = inst.table->index_of(sol.placements[k - 1]);
        assignment[b.y(k, prev, cur)] = true;
    }
    for (int k = 1; k <= b.num_cnots; ++k)
        if (sol.switches[k - 1]) assignment[b.z(k)] = true;

    // Auxiliaries are definitionally determined by x; rebuilding the clause
    // structure here would duplicate encode(), so instead derive them from
    // the recorded hard clauses: any aux id defined by implication clauses
    // (-aux, lit1)(-aux, lit2) is set to the conjunction of its literals,
    // and selector auxes likewise follow their implications.
    std::map<int, std::vector<int>> aux_implied;  // aux -> implied literals
    for (const Clause& c : inst.hard) {
        if (c.lits.size() == 2 && c.lits[0] < 0 && -c.lits[0] >= b.aux_begin)
            aux_implied[-c.lits[0]].push_back(c.lits[1]);
    }
    auto lit_true = [&](int lit) {
        return lit > 0 ? assignment[lit] : !assignment[-lit];
    };
    for (const auto& [aux, lits] : aux_implied) {
        bool all = true;
        for (int lit : lits)
            if (!lit_true(lit)) {
                all = false;
                break;
            }
        assignment[aux] = all;
    }
    return assignment;
}

}  // namespace qxmap
