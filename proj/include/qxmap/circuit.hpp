#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qxmap {

// Single-qubit gates understood by the toolchain. The set is fixed so that
// the simulator can work from an exact matrix table.
enum class SingleKind { H, T, Tdg, S, Sdg, X, Y, Z };

inline const char* to_qasm_name(SingleKind k) {
    switch (k) {
        case SingleKind::H: return "h";
        case SingleKind::T: return "t";
        case SingleKind::Tdg: return "tdg";
        case SingleKind::S: return "s";
        case SingleKind::Sdg: return "sdg";
        case SingleKind::X: return "x";
        case SingleKind::Y: return "y";
        case SingleKind::Z: return "z";
    }
    return "?";
}

struct SingleGate {
    int qubit = 0;
    SingleKind kind = SingleKind::H;

    bool operator==(const SingleGate&) const = default;
};

struct CnotGate {
    int control = 0;
    int target = 0;

    bool operator==(const CnotGate&) const = default;
};

using Gate = std::variant<SingleGate, CnotGate>;

// Ordered gate list over n logical qubits. Gate order is program order;
// nothing here ever reorders.
struct QuantumCircuit {
    int num_qubits = 0;
    std::vector<Gate> gates;

    bool operator==(const QuantumCircuit&) const = default;
};

// The circuit split into its CNOT sequence plus the single-qubit gates that
// sit between consecutive CNOTs. preludes[k] holds the singles immediately
// before cnots[k]; epilogue holds the singles after the last CNOT.
struct CnotSkeleton {
    int num_qubits = 0;
    std::vector<CnotGate> cnots;
    std::vector<std::vector<SingleGate>> preludes;
    std::vector<SingleGate> epilogue;

    bool operator==(const CnotSkeleton&) const = default;
};

inline CnotSkeleton extract_skeleton(const QuantumCircuit& circuit) {
    CnotSkeleton sk;
    sk.num_qubits = circuit.num_qubits;
    std::vector<SingleGate> pending;
    for (const Gate& g : circuit.gates) {
        if (const auto* s = std::get_if<SingleGate>(&g)) {
            pending.push_back(*s);
        } else {
            sk.preludes.push_back(std::move(pending));
            pending.clear();
            sk.cnots.push_back(std::get<CnotGate>(g));
        }
    }
    sk.epilogue = std::move(pending);
    return sk;
}

inline QuantumCircuit reassemble(const CnotSkeleton& sk) {
    if (sk.preludes.size() != sk.cnots.size())
        throw std::invalid_argument("skeleton preludes/cnots size mismatch");
    QuantumCircuit c;
    c.num_qubits = sk.num_qubits;
    for (std::size_t k = 0; k < sk.cnots.size(); ++k) {
        for (const SingleGate& s : sk.preludes[k]) c.gates.emplace_back(s);
        c.gates.emplace_back(sk.cnots[k]);
    }
    for (const SingleGate& s : sk.epilogue) c.gates.emplace_back(s);
    return c;
}

}  // namespace qxmap
