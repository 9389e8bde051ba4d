#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qxmap/architecture.hpp"
#include "qxmap/circuit.hpp"
#include "qxmap/qasm.hpp"
#include "qxmap/solver.hpp"

namespace qxmap {

enum class Provenance { Original, SwapInserted, DirectionH };

struct MappedGate {
    Gate gate;  // qubit indices are physical
    Provenance origin = Provenance::Original;

    bool operator==(const MappedGate&) const = default;
};

// A circuit over the physical qubits of a device, with each gate tagged by
// where it came from: the input circuit, a SWAP decomposition, or a
// direction switch.
struct MappedCircuit {
    int num_physical = 0;
    std::vector<MappedGate> gates;

    std::size_t count(Provenance p) const {
        std::size_t c = 0;
        for (const MappedGate& g : gates)
            if (g.origin == p) ++c;
        return c;
    }
};

// Expands a mapping into an executable physical circuit. Per CNOT: the
// preceding single-qubit gates are emitted first, on the lines their logical
// qubits occupy before the transition; then the SWAP sequence, each SWAP as
// the 7-gate pattern CX,H,H,CX,H,H,CX along the coupling-legal direction of
// its edge; then the CNOT itself, conjugated with 4 H gates when its
// direction is switched. Epilogue singles follow under the final placement.
inline MappedCircuit build_mapped_circuit(const QuantumCircuit& circuit,
                                          const MappingSolution& sol, const CouplingMap& cm) {
    const CnotSkeleton sk = extract_skeleton(circuit);
    if (!sk.cnots.empty() && !validate_solution(sk, cm, sol))
        throw std::invalid_argument("solution does not fit the circuit/architecture");
    if (sk.cnots.empty() && sol.initial.num_logical() != sk.num_qubits)
        throw std::invalid_argument("solution does not fit the circuit/architecture");

    MappedCircuit mc;
    mc.num_physical = cm.num_physical;
    Placement current = sol.initial;

    auto emit_singles = [&](const std::vector<SingleGate>& singles) {
        for (const SingleGate& s : singles)
            mc.gates.push_back({SingleGate{current.assign[s.qubit], s.kind},
                                Provenance::Original});
    };
    auto emit_swap = [&](int a, int b) {
        // Fixed direction along the coupling map; for an edge present in
        // both directions the (a,b) orientation is preferred.
        const int c = cm.has_edge(a, b) ? a : b;
        const int t = cm.has_edge(a, b) ? b : a;
        if (!cm.has_edge(c, t)) throw std::invalid_argument("SWAP edge not in coupling map");
        for (int rep = 0; rep < 3; ++rep) {
            mc.gates.push_back({CnotGate{c, t}, Provenance::SwapInserted});
            if (rep < 2) {
                mc.gates.push_back({SingleGate{c, SingleKind::H}, Provenance::SwapInserted});
                mc.gates.push_back({SingleGate{t, SingleKind::H}, Provenance::SwapInserted});
            }
        }
    };

    for (std::size_t k = 0; k < sk.cnots.size(); ++k) {
        emit_singles(sk.preludes[k]);
        if (auto it = sol.swap_sequences.find(static_cast<int>(k) + 1);
            it != sol.swap_sequences.end())
            for (const auto& [a, b] : it->second) emit_swap(a, b);
        current = sol.placements[k];

        const int pc = current.assign[sk.cnots[k].control];
        const int pt = current.assign[sk.cnots[k].target];
        if (sol.switches[k]) {
            mc.gates.push_back({SingleGate{pc, SingleKind::H}, Provenance::DirectionH});
            mc.gates.push_back({SingleGate{pt, SingleKind::H}, Provenance::DirectionH});
            mc.gates.push_back({CnotGate{pt, pc}, Provenance::Original});
            mc.gates.push_back({SingleGate{pc, SingleKind::H}, Provenance::DirectionH});
            mc.gates.push_back({SingleGate{pt, SingleKind::H}, Provenance::DirectionH});
        } else {
            mc.gates.push_back({CnotGate{pc, pt}, Provenance::Original});
        }
    }
    emit_singles(sk.epilogue);
    return mc;
}

// OpenQASM 2.0 text for a mapped circuit, one statement per line, inserted
// gates marked by a trailing comment. Deterministic bytes.
inline std::string emit_qasm(const MappedCircuit& mc) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "qreg q[" << mc.num_physical << "];\n";
    for (const MappedGate& g : mc.gates) {
        if (const auto* s = std::get_if<SingleGate>(&g.gate))
            out << to_qasm_name(s->kind) << " q[" << s->qubit << "];";
        else {
            const auto& cx = std::get<CnotGate>(g.gate);
            out << "cx q[" << cx.control << "],q[" << cx.target << "];";
        }
        if (g.origin == Provenance::SwapInserted) out << " // inserted: swap";
        if (g.origin == Provenance::DirectionH) out << " // inserted: direction-h";
        out << "\n";
    }
    return out.str();
}

// Reads back a mapped-circuit QASM file, recovering the provenance tags from
// the trailing comments. Expects the one-statement-per-line layout that
// emit_qasm produces.
inline MappedCircuit parse_mapped_qasm(const std::string& text) {
    std::vector<Provenance> tags;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto comment = line.find("//");
        std::string code = comment == std::string::npos ? line : line.substr(0, comment);
        const auto first = code.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        code = code.substr(first);
        const bool is_gate = code.rfind("cx ", 0) == 0 ||
                             [&] {
                                 for (const auto& [name, kind] : detail::single_gate_names())
                                     if (code.rfind(name + " ", 0) == 0) return true;
                                 return false;
                             }();
        if (!is_gate) continue;
        Provenance p = Provenance::Original;
        if (comment != std::string::npos) {
            std::string_view tail = std::string_view(line).substr(comment);
            if (tail.find("inserted: swap") != std::string_view::npos)
                p = Provenance::SwapInserted;
            else if (tail.find("inserted: direction-h") != std::string_view::npos)
                p = Provenance::DirectionH;
        }
        tags.push_back(p);
    }

    const ParsedQasm parsed = parse_qasm(text);
    if (parsed.circuit.gates.size() != tags.size())
        throw std::invalid_argument("mapped circuit must have one gate per line");
    MappedCircuit mc;
    mc.num_physical = parsed.circuit.num_qubits;
    for (std::size_t i = 0; i < tags.size(); ++i)
        mc.gates.push_back({parsed.circuit.gates[i], tags[i]});
    return mc;
}

}  // namespace qxmap
