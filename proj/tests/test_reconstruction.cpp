#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qxmap/reconstruction.hpp"
#include "qxmap/strategies.hpp"
#include "test_support.hpp"

using namespace qxmap;

namespace {

const std::vector<int> kAllQx4{0, 1, 2, 3, 4};

MappedCircuit map_sample() {
    const auto circuit = testsupport::sample4q_circuit();
    const auto sk = extract_skeleton(circuit);
    const auto sol = solve_exact(sk, builtin_qx4(), kAllQx4, points_all(sk));
    REQUIRE(sol.has_value());
    return build_mapped_circuit(circuit, *sol, builtin_qx4());
}

}  // namespace

TEST_CASE("the mapped sample has 8 original gates plus 4 direction H gates") {
    const auto mc = map_sample();
    REQUIRE(mc.gates.size() == 12);
    REQUIRE(mc.count(Provenance::Original) == 8);
    REQUIRE(mc.count(Provenance::DirectionH) == 4);
    REQUIRE(mc.count(Provenance::SwapInserted) == 0);
}

TEST_CASE("a solution with one swap inserts exactly seven gates") {
    // Three pairwise-interacting qubits on a line force at least one SWAP.
    QuantumCircuit circuit;
    circuit.num_qubits = 3;
    circuit.gates = {CnotGate{0, 1}, CnotGate{0, 2}, CnotGate{1, 2}};
    const auto sk = extract_skeleton(circuit);
    const auto cm = testsupport::line3_map();
    const auto sol = solve_exact(sk, cm, {0, 1, 2}, points_all(sk));
    REQUIRE(sol.has_value());
    REQUIRE(brute_force_oracle(sk, cm, {0, 1, 2}, points_all(sk)) == sol->cost);
    std::size_t swaps = 0;
    for (const auto& entry : sol->swap_sequences) swaps += entry.second.size();
    REQUIRE(swaps == 1);
    const auto mc = build_mapped_circuit(circuit, *sol, cm);
    REQUIRE(mc.count(Provenance::SwapInserted) == 7);
    REQUIRE(mc.gates.size() == circuit.gates.size() + static_cast<std::size_t>(sol->cost));
}

TEST_CASE("a CNOT-free circuit is emitted under the initial placement") {
    QuantumCircuit circuit;
    circuit.num_qubits = 2;
    circuit.gates = {SingleGate{0, SingleKind::H}, SingleGate{1, SingleKind::T}};
    MappingSolution sol;
    sol.initial.assign = {3, 1};
    sol.subset_used = {1, 3};
    const auto mc = build_mapped_circuit(circuit, sol, builtin_qx4());
    REQUIRE(mc.gates.size() == 2);
    REQUIRE(mc.gates[0] == MappedGate{SingleGate{3, SingleKind::H}, Provenance::Original});
    REQUIRE(mc.gates[1] == MappedGate{SingleGate{1, SingleKind::T}, Provenance::Original});
}

TEST_CASE("inserted gates account for the whole cost") {
    std::mt19937 rng(2024);
    const auto cm = builtin_qx4();
    for (int i = 0; i < 30; ++i) {
        const auto circuit = testsupport::random_circuit(rng, 2 + i % 3, 1 + i % 5, 2);
        const auto sk = extract_skeleton(circuit);
        const auto sol = solve_exact(sk, cm, kAllQx4, points_all(sk));
        REQUIRE(sol.has_value());
        const auto mc = build_mapped_circuit(circuit, *sol, cm);
        REQUIRE(mc.gates.size() == circuit.gates.size() + static_cast<std::size_t>(sol->cost));
        std::size_t swaps = 0;
        for (const auto& entry : sol->swap_sequences) swaps += entry.second.size();
        REQUIRE(mc.count(Provenance::SwapInserted) == 7 * swaps);
        REQUIRE(mc.count(Provenance::DirectionH) ==
                4 * static_cast<std::size_t>(
                        std::count(sol->switches.begin(), sol->switches.end(), true)));
    }
}

TEST_CASE("emitted qasm parses back to the same mapped circuit") {
    const auto mc = map_sample();
    const std::string text = emit_qasm(mc);
    REQUIRE(emit_qasm(mc) == text);  // deterministic bytes
    const auto back = parse_mapped_qasm(text);
    REQUIRE(back.num_physical == mc.num_physical);
    REQUIRE(back.gates == mc.gates);
}

TEST_CASE("an empty mapped circuit emits only the header") {
    MappedCircuit mc;
    mc.num_physical = 5;
    REQUIRE(emit_qasm(mc) == "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[5];\n");
}

TEST_CASE("mapped qasm keeps every CNOT on a coupling edge") {
    const auto mc = map_sample();
    const auto cm = builtin_qx4();
    for (const MappedGate& g : mc.gates)
        if (const auto* cx = std::get_if<CnotGate>(&g.gate))
            REQUIRE(cm.has_edge(cx->control, cx->target));
}

TEST_CASE("build rejects a solution that does not fit") {
    const auto circuit = testsupport::sample4q_circuit();
    MappingSolution sol;  // wrong shape entirely
    REQUIRE_THROWS_AS(build_mapped_circuit(circuit, sol, builtin_qx4()),
                      std::invalid_argument);
}
