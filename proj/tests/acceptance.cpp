// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/encoder.hpp"
#include "qxmap/qasm.hpp"
#include "qxmap/reconstruction.hpp"
#include "qxmap/solver.hpp"
#include "qxmap/strategies.hpp"
#include "qxmap/swap_table.hpp"
#include "qxmap/verifier.hpp"

using namespace qxmap;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

QuantumCircuit sample4q() {
    QuantumCircuit c;
    c.num_qubits = 4;
    c.gates = {
        SingleGate{2, SingleKind::H}, CnotGate{2, 3}, CnotGate{0, 1},
        SingleGate{1, SingleKind::H}, CnotGate{1, 2}, SingleGate{0, SingleKind::T},
        CnotGate{2, 0},               CnotGate{0, 1},
    };
    return c;
}

CouplingMap line3_map() {
    CouplingMap cm;
    cm.name = "line3";
    cm.num_physical = 3;
    cm.edges = {{0, 1}, {1, 2}};
    return cm;
}

std::vector<int> all_qubits(const CouplingMap& cm) {
    std::vector<int> all(cm.num_physical);
    std::iota(all.begin(), all.end(), 0);
    return all;
}

// One randomized instance together with everything later criteria need.
struct SuiteEntry {
    CouplingMap cm;
    QuantumCircuit circuit;
    CnotSkeleton skeleton;
    std::set<int> points;
    MappingSolution solution;
};

// Deterministic randomized suite over ibm-qx4 and a 3-qubit line. CNOT
// counts are bounded per qubit count so the exhaustive oracle stays within
// its combination cap.
std::vector<SuiteEntry> build_suite(std::size_t count) {
    std::mt19937 rng(987654321);
    const CouplingMap qx4 = builtin_qx4();
    const CouplingMap line3 = line3_map();
    std::vector<SuiteEntry> suite;
    while (suite.size() < count) {
        SuiteEntry e;
        const bool use_line = suite.size() % 3 == 0;
        e.cm = use_line ? line3 : qx4;
        std::uniform_int_distribution<int> nd(2, use_line ? 3 : 4);
        const int n = nd(rng);
        const int max_cnots = use_line ? 5 : (n == 4 ? 3 : (n == 3 ? 4 : 5));
        std::uniform_int_distribution<int> gd(1, max_cnots);
        std::uniform_int_distribution<int> sd(0, 3);
        const int num_cnots = gd(rng);
        const int num_singles = sd(rng);

        e.circuit.num_qubits = n;
        std::uniform_int_distribution<int> qubit(0, n - 1);
        std::uniform_int_distribution<int> kind(0, 7);
        for (int i = 0; i < num_cnots; ++i) {
            int a = qubit(rng), b = qubit(rng);
            while (b == a) b = qubit(rng);
            e.circuit.gates.emplace_back(CnotGate{a, b});
        }
        for (int i = 0; i < num_singles; ++i)
            e.circuit.gates.emplace_back(
                SingleGate{qubit(rng), static_cast<SingleKind>(kind(rng))});
        std::shuffle(e.circuit.gates.begin(), e.circuit.gates.end(), rng);

        e.skeleton = extract_skeleton(e.circuit);
        e.points = points_all(e.skeleton);
        auto sol = solve_exact(e.skeleton, e.cm, all_qubits(e.cm), e.points);
        if (!sol) continue;  // full-point instances on a connected map always solve
        e.solution = *sol;
        suite.push_back(std::move(e));
    }
    return suite;
}

const std::vector<SuiteEntry>& suite() {
    static const std::vector<SuiteEntry> instances = build_suite(240);
    return instances;
}

bool criterion_running_example(std::string& detail) {
    const auto circuit = sample4q();
    const auto sk = extract_skeleton(circuit);
    const auto cm = builtin_qx4();
    const auto start = std::chrono::steady_clock::now();
    const auto sol = solve_exact(sk, cm, all_qubits(cm), points_all(sk));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!sol) {
        detail = "no solution";
        return false;
    }
    std::size_t swaps = 0;
    for (const auto& entry : sol->swap_sequences) swaps += entry.second.size();
    const auto switches = std::count(sol->switches.begin(), sol->switches.end(), true);
    const auto mc = build_mapped_circuit(circuit, *sol, cm);
    std::ostringstream s;
    s << "F=" << sol->cost << " swaps=" << swaps << " switches=" << switches
      << " mapped=" << mc.gates.size() << " time=" << std::fixed << std::setprecision(2)
      << seconds << "s";
    detail = s.str();
    return sol->cost == 4 && swaps == 0 && switches == 1 && mc.gates.size() == 12 &&
           seconds < 5.0;
}

bool criterion_search_space(std::string& detail) {
    const auto sk = extract_skeleton(sample4q());
    const auto cm = builtin_qx4();
    const auto full = encode(sk, cm, all_qubits(cm), points_all(sk));
    const auto subsets = connected_subsets(cm, 4);
    bool all_contain_p3 = true;
    int subset_x = -1;
    for (const auto& subset : subsets) {
        all_contain_p3 =
            all_contain_p3 && std::find(subset.begin(), subset.end(), 2) != subset.end();
        const auto inst = encode(sk, cm, subset, points_all(sk));
        if (subset_x == -1) subset_x = inst.book.x_count;
        if (inst.book.x_count != subset_x) subset_x = -2;
    }
    std::ostringstream s;
    s << "x-vars full=" << full.book.x_count << " subset=" << subset_x
      << " subsets=" << subsets.size() << (all_contain_p3 ? " (all contain p3)" : "");
    detail = s.str();
    return full.book.x_count == 100 && subset_x == 80 && subsets.size() == 4 && all_contain_p3;
}

bool criterion_strategy_points(std::string& detail) {
    const auto sk = extract_skeleton(sample4q());
    const auto cm = builtin_qx4();
    const auto disjoint = points_disjoint_qubits(sk);
    const auto odd = points_odd_gates(sk);
    const auto triangle = points_qubit_triangle(sk, cm);
    bool sets_ok = disjoint == std::set<int>{3, 4, 5} && odd == std::set<int>{3, 5} &&
                   triangle == std::set<int>{2};
    bool costs_ok = true;
    for (const auto& points : {disjoint, odd, triangle}) {
        const auto sol = solve_exact(sk, cm, all_qubits(cm), points);
        costs_ok = costs_ok && sol && sol->cost == 4;
    }
    auto render = [](const std::set<int>& points) {
        std::string s = "{";
        for (int k : points) s += (s.size() > 1 ? "," : "") + std::to_string(k);
        return s + "}";
    };
    detail = "disjoint=" + render(disjoint) + " odd=" + render(odd) +
             " triangle=" + render(triangle) +
             (costs_ok ? ", each solves at cost 4" : ", cost mismatch");
    return sets_ok && costs_ok;
}

bool criterion_oracle_equivalence(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t checked = 0;
    for (const auto& e : suite()) {
        const auto oracle =
            brute_force_oracle(e.skeleton, e.cm, all_qubits(e.cm), e.points);
        if (!oracle || *oracle != e.solution.cost) {
            detail = "mismatch at instance " + std::to_string(checked);
            return false;
        }
        ++checked;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream s;
    s << checked << " instances, " << std::fixed << std::setprecision(1) << seconds << "s";
    detail = s.str();
    return checked >= 200 && seconds < 600.0;
}

bool criterion_encoder_soundness(std::string& detail) {
    std::size_t checked = 0;
    for (const auto& e : suite()) {
        const auto inst = encode(e.skeleton, e.cm, all_qubits(e.cm), e.points);
        const auto eval = evaluate_assignment(inst, solution_to_assignment(e.solution, inst));
        if (!eval.satisfies || eval.cost != e.solution.cost) {
            detail = "unsound at instance " + std::to_string(checked);
            return false;
        }
        ++checked;
    }
    detail = std::to_string(checked) + " solutions decoded";
    return true;
}

bool criterion_monotonicity(std::string& detail) {
    std::size_t comparisons = 0;
    for (const auto& e : suite()) {
        std::vector<std::set<int>> restrictions{points_disjoint_qubits(e.skeleton),
                                                points_odd_gates(e.skeleton)};
        if (has_triangle(e.cm))
            restrictions.push_back(points_qubit_triangle(e.skeleton, e.cm));
        for (const auto& points : restrictions) {
            const auto sol = solve_exact(e.skeleton, e.cm, all_qubits(e.cm), points);
            if (sol) {
                if (sol->cost < e.solution.cost) {
                    detail = "a restricted mode beat the exact optimum";
                    return false;
                }
                ++comparisons;
            }
        }
        const auto subsets = solve_with_subsets(e.skeleton, e.cm, e.points);
        if (!subsets || subsets->cost < e.solution.cost) {
            detail = "subset mode beat the exact optimum";
            return false;
        }
        ++comparisons;
    }
    detail = std::to_string(comparisons) + " comparisons, all deltas nonnegative";
    return true;
}

bool criterion_semantic_verification(std::string& detail) {
    Unitary h_conj(2);
    h_conj.apply_single(0, Unitary::gate_matrix(SingleKind::H));
    h_conj.apply_single(1, Unitary::gate_matrix(SingleKind::H));
    h_conj.apply_cnot(1, 0);
    h_conj.apply_single(0, Unitary::gate_matrix(SingleKind::H));
    h_conj.apply_single(1, Unitary::gate_matrix(SingleKind::H));
    Unitary cnot01(2);
    cnot01.apply_cnot(0, 1);
    if (h_conj.max_abs_diff(cnot01) > 1e-12) {
        detail = "H-conjugation identity failed";
        return false;
    }

    Unitary pattern(2);
    for (int rep = 0; rep < 3; ++rep) {
        pattern.apply_cnot(0, 1);
        if (rep < 2) {
            pattern.apply_single(0, Unitary::gate_matrix(SingleKind::H));
            pattern.apply_single(1, Unitary::gate_matrix(SingleKind::H));
        }
    }
    Unitary swap(2);
    swap.apply_cnot(0, 1);
    swap.apply_cnot(1, 0);
    swap.apply_cnot(0, 1);
    if (pattern.max_abs_diff(swap) > 1e-12) {
        detail = "7-gate SWAP identity failed";
        return false;
    }

    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& e : suite()) {
        const auto mc = build_mapped_circuit(e.circuit, e.solution, e.cm);
        const auto report = verify_all(e.circuit, mc, e.solution, e.cm);
        worst = std::max(worst, report.max_deviation);
        if (!report.coupling_legal || !report.tracking_ok || !report.unitary_ok) {
            detail = "verification failed at instance " + std::to_string(checked);
            return false;
        }
        ++checked;
    }
    std::ostringstream s;
    s << checked << " reconstructions, max deviation " << std::scientific
      << std::setprecision(1) << worst;
    detail = s.str();
    return true;
}

bool criterion_swap_metric(std::string& detail) {
    const auto cm = builtin_qx4();
    std::mt19937 rng(13579);
    for (int logical : {4, 5}) {
        const SwapDistanceTable table(cm, logical, all_qubits(cm));
        std::uniform_int_distribution<std::size_t> pick(0, table.placements().size() - 1);
        for (int i = 0; i < 1000; ++i) {
            const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
            if (table.distance(a, a) != 0 || table.distance(a, b) != table.distance(b, a) ||
                table.distance(a, c) > table.distance(a, b) + table.distance(b, c)) {
                detail = "metric axiom violated";
                return false;
            }
        }
        for (int i = 0; i < 100; ++i) {
            const auto& p = table.placements()[pick(rng)];
            for (const auto& [u, v] : table.generator_edges()) {
                Placement q = p;
                q.exchange(u, v);
                if (q == p) continue;  // both slots empty
                if (table.distance(p, q) != 1) {
                    detail = "single-edge exchange is not distance 1";
                    return false;
                }
            }
        }
    }
    detail = "2000 triples + single-edge exchanges on n=4 and n=5 tables";
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"running-example-minimum", criterion_running_example},
        {"search-space-bookkeeping", criterion_search_space},
        {"strategy-point-sets", criterion_strategy_points},
        {"oracle-equivalence", criterion_oracle_equivalence},
        {"encoder-soundness", criterion_encoder_soundness},
        {"monotonicity", criterion_monotonicity},
        {"semantic-verification", criterion_semantic_verification},
        {"swap-distance-metric", criterion_swap_metric},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion.name;
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << std::endl;
        if (!ok) ++failures;
    }
    if (failures > 0) std::cout << failures << " criterion(s) failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
