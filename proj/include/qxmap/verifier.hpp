#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qxmap/circuit.hpp"
#include "qxmap/reconstruction.hpp"
#include "qxmap/solver.hpp"

namespace qxmap {

// Dense unitary over up to 6 qubits, enough to check circuit equivalence
// exactly. Wire w is bit w of the basis-state index.
class Unitary {
public:
    explicit Unitary(int qubits) : qubits_(qubits), dim_(std::size_t{1} << qubits) {
        if (qubits < 0 || qubits > 6)
            throw std::invalid_argument("unitary simulation is capped at 6 qubits");
        data_.assign(dim_ * dim_, {0.0, 0.0});
        for (std::size_t i = 0; i < dim_; ++i) at(i, i) = 1.0;
    }

    int qubits() const { return qubits_; }
    std::size_t dim() const { return dim_; }

    std::complex<double>& at(std::size_t row, std::size_t col) {
        return data_[row * dim_ + col];
    }
    const std::complex<double>& at(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    // Left-multiplies by a single-qubit gate on the given wire.
    void apply_single(int wire, const std::array<std::complex<double>, 4>& u) {
        const std::size_t bit = std::size_t{1} << wire;
        for (std::size_t col = 0; col < dim_; ++col) {
            for (std::size_t row = 0; row < dim_; ++row) {
                if (row & bit) continue;
                const auto a = at(row, col);
                const auto b = at(row | bit, col);
                at(row, col) = u[0] * a + u[1] * b;
                at(row | bit, col) = u[2] * a + u[3] * b;
            }
        }
    }

    // Left-multiplies by a CNOT with the given control and target wires.
    void apply_cnot(int control, int target) {
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        for (std::size_t col = 0; col < dim_; ++col) {
            for (std::size_t row = 0; row < dim_; ++row) {
                if ((row & cbit) && !(row & tbit)) std::swap(at(row, col), at(row | tbit, col));
            }
        }
    }

    void apply(const Gate& g) {
        if (const auto* s = std::get_if<SingleGate>(&g))
            apply_single(s->qubit, gate_matrix(s->kind));
        else {
            const auto& cx = std::get<CnotGate>(g);
            apply_cnot(cx.control, cx.target);
        }
    }

    // Basis permutation moving wire w to dest[w].
    static Unitary wire_permutation(int qubits, const std::vector<int>& dest) {
        Unitary p(qubits);
        std::fill(p.data_.begin(), p.data_.end(), std::complex<double>{0.0, 0.0});
        for (std::size_t x = 0; x < p.dim_; ++x) {
            std::size_t y = 0;
            for (int w = 0; w < qubits; ++w)
                if (x & (std::size_t{1} << w)) y |= std::size_t{1} << dest[w];
            p.at(y, x) = 1.0;
        }
        return p;
    }

    Unitary multiply(const Unitary& rhs) const {
        Unitary out(qubits_);
        for (std::size_t i = 0; i < dim_ * dim_; ++i) out.data_[i] = {0.0, 0.0};
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t k = 0; k < dim_; ++k) {
                const auto v = at(r, k);
                if (v == std::complex<double>{0.0, 0.0}) continue;
                for (std::size_t c = 0; c < dim_; ++c) out.at(r, c) += v * rhs.at(k, c);
            }
        return out;
    }

    Unitary adjoint() const {
        Unitary out(qubits_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) out.at(r, c) = std::conj(at(c, r));
        return out;
    }

    double max_abs_diff(const Unitary& other) const {
        double dev = 0.0;
        for (std::size_t i = 0; i < dim_ * dim_; ++i)
            dev = std::max(dev, std::abs(data_[i] - other.data_[i]));
        return dev;
    }

    bool is_unitary(double tol = 1e-10) const {
        return multiply(adjoint()).max_abs_diff(Unitary(qubits_)) <= tol;
    }

    static std::array<std::complex<double>, 4> gate_matrix(SingleKind kind) {
        using namespace std::complex_literals;
        const double r = 1.0 / std::numbers::sqrt2;
        const std::complex<double> t = std::exp(1i * (std::numbers::pi / 4.0));
        switch (kind) {
            case SingleKind::H: return {r, r, r, -r};
            case SingleKind::T: return {1.0, 0.0, 0.0, t};
            case SingleKind::Tdg: return {1.0, 0.0, 0.0, std::conj(t)};
            case SingleKind::S: return {1.0, 0.0, 0.0, 1i};
            case SingleKind::Sdg: return {1.0, 0.0, 0.0, -1i};
            case SingleKind::X: return {0.0, 1.0, 1.0, 0.0};
            case SingleKind::Y: return {0.0, -1i, 1i, 0.0};
            case SingleKind::Z: return {1.0, 0.0, 0.0, -1.0};
        }
        throw std::logic_error("unknown gate kind");
    }

private:
    int qubits_;
    std::size_t dim_;
    std::vector<std::complex<double>> data_;
};

inline Unitary circuit_unitary(const QuantumCircuit& circuit) {
    Unitary u(circuit.num_qubits);
    for (const Gate& g : circuit.gates) u.apply(g);
    return u;
}

inline Unitary mapped_unitary(const MappedCircuit& mc) {
    Unitary u(mc.num_physical);
    for (const MappedGate& g : mc.gates) u.apply(g.gate);
    return u;
}

struct EquivalenceReport {
    bool coupling_legal = false;
    bool tracking_ok = false;
    bool unitary_ok = false;
    double max_deviation = 0.0;
};

// Every CNOT of the mapped circuit must sit on a coupling-map edge, in the
// stated direction.
inline bool check_coupling_legal(const MappedCircuit& mc, const CouplingMap& cm) {
    for (const MappedGate& g : mc.gates)
        if (const auto* cx = std::get_if<CnotGate>(&g.gate))
            if (!cm.has_edge(cx->control, cx->target)) return false;
    return true;
}

// Symbolic replay of the mapped circuit: folds each tagged 7-gate SWAP block
// into an exchange of the tracked placement and each 4-H conjugated CNOT
// into its unswitched form, then compares the folded gate list with the
// original circuit. Any structural deviation returns false.
inline bool check_tracking(const QuantumCircuit& circuit, const MappedCircuit& mc,
                           const MappingSolution& sol) {
    if (sol.initial.num_logical() != circuit.num_qubits) return false;
    std::vector<int> occupant(mc.num_physical, -1);
    for (int j = 0; j < circuit.num_qubits; ++j) {
        const int pos = sol.initial.assign[j];
        if (pos < 0 || pos >= mc.num_physical || occupant[pos] != -1) return false;
        occupant[pos] = j;
    }

    const auto& gates = mc.gates;
    std::vector<Gate> folded;
    std::size_t i = 0;
    auto is_h_on = [&](const MappedGate& g, Provenance origin) -> int {
        if (g.origin != origin) return -1;
        const auto* s = std::get_if<SingleGate>(&g.gate);
        return s && s->kind == SingleKind::H ? s->qubit : -1;
    };

    while (i < gates.size()) {
        const MappedGate& g = gates[i];
        if (g.origin == Provenance::SwapInserted) {
            if (i + 7 > gates.size()) return false;
            const auto* cx0 = std::get_if<CnotGate>(&gates[i].gate);
            if (!cx0) return false;
            const int a = cx0->control, b = cx0->target;
            // CX, H(a), H(b) twice, then the closing CX; the H pair may come
            // in either order.
            for (int rep = 0; rep < 2; ++rep) {
                const std::size_t base = i + 3 * rep;
                const auto* cx = std::get_if<CnotGate>(&gates[base].gate);
                if (gates[base].origin != Provenance::SwapInserted || !cx ||
                    cx->control != a || cx->target != b)
                    return false;
                const int h1 = is_h_on(gates[base + 1], Provenance::SwapInserted);
                const int h2 = is_h_on(gates[base + 2], Provenance::SwapInserted);
                if (h1 < 0 || h2 < 0 || std::min(h1, h2) != std::min(a, b) ||
                    std::max(h1, h2) != std::max(a, b))
                    return false;
            }
            const auto* cx_last = std::get_if<CnotGate>(&gates[i + 6].gate);
            if (gates[i + 6].origin != Provenance::SwapInserted || !cx_last ||
                cx_last->control != a || cx_last->target != b)
                return false;
            std::swap(occupant[a], occupant[b]);
            i += 7;
        } else if (g.origin == Provenance::DirectionH) {
            if (i + 5 > gates.size()) return false;
            const int h1 = is_h_on(gates[i], Provenance::DirectionH);
            const int h2 = is_h_on(gates[i + 1], Provenance::DirectionH);
            const auto* cx = std::get_if<CnotGate>(&gates[i + 2].gate);
            if (h1 < 0 || h2 < 0 || gates[i + 2].origin != Provenance::Original || !cx)
                return false;
            if (std::min(h1, h2) != std::min(cx->control, cx->target) ||
                std::max(h1, h2) != std::max(cx->control, cx->target))
                return false;
            const int h3 = is_h_on(gates[i + 3], Provenance::DirectionH);
            const int h4 = is_h_on(gates[i + 4], Provenance::DirectionH);
            if (h3 < 0 || h4 < 0 || std::min(h3, h4) != std::min(h1, h2) ||
                std::max(h3, h4) != std::max(h1, h2))
                return false;
            // Unswitched form: the emitted CNOT runs target->control.
            const int logical_control = occupant[cx->target];
            const int logical_target = occupant[cx->control];
            if (logical_control < 0 || logical_target < 0) return false;
            folded.emplace_back(CnotGate{logical_control, logical_target});
            i += 5;
        } else {
            if (const auto* s = std::get_if<SingleGate>(&g.gate)) {
                if (occupant[s->qubit] < 0) return false;
                folded.emplace_back(SingleGate{occupant[s->qubit], s->kind});
            } else {
                const auto& cx = std::get<CnotGate>(g.gate);
                if (occupant[cx.control] < 0 || occupant[cx.target] < 0) return false;
                folded.emplace_back(CnotGate{occupant[cx.control], occupant[cx.target]});
            }
            ++i;
        }
    }
    return folded == circuit.gates;
}

// Matrix-level equivalence: the mapped circuit must equal the original one
// embedded through the initial placement and read out through the final
// positions of every line (idle lines included, since SWAPs move them too).
inline EquivalenceReport check_unitary_equivalence(const QuantumCircuit& circuit,
                                                   const MappedCircuit& mc,
                                                   const MappingSolution& sol) {
    const int n = circuit.num_qubits;
    const int m = mc.num_physical;
    if (n > 6 || m > 6)
        throw std::invalid_argument("unitary equivalence is capped at 6 qubits");
    if (sol.initial.num_logical() != n)
        throw std::invalid_argument("solution does not match the circuit");

    // Canonical wires: 0..n-1 carry the logical qubits, the rest carry the
    // initially idle physical lines in ascending order.
    std::vector<int> in_dest(m, -1);
    std::vector<char> used(m, 0);
    for (int j = 0; j < n; ++j) {
        in_dest[j] = sol.initial.assign[j];
        used[sol.initial.assign[j]] = 1;
    }
    int next = n;
    for (int p = 0; p < m; ++p)
        if (!used[p]) in_dest[next++] = p;

    // Replay the SWAP sequence over all lines to find where each canonical
    // wire ends up.
    std::vector<int> position = in_dest;
    for (const auto& entry : sol.swap_sequences)
        for (const auto& [a, b] : entry.second)
            for (int& pos : position) {
                if (pos == a)
                    pos = b;
                else if (pos == b)
                    pos = a;
            }

    Unitary embedded(m);
    for (const Gate& g : circuit.gates) embedded.apply(g);

    const Unitary e_in = Unitary::wire_permutation(m, in_dest);
    const Unitary e_out = Unitary::wire_permutation(m, position);
    const Unitary expected = e_out.multiply(embedded.multiply(e_in.adjoint()));
    const Unitary actual = mapped_unitary(mc);

    EquivalenceReport report;
    report.max_deviation = actual.max_abs_diff(expected);
    report.unitary_ok = report.max_deviation <= 1e-10;
    return report;
}

// Runs all three checks and combines them into one report.
inline EquivalenceReport verify_all(const QuantumCircuit& circuit, const MappedCircuit& mc,
                                    const MappingSolution& sol, const CouplingMap& cm) {
    EquivalenceReport report = check_unitary_equivalence(circuit, mc, sol);
    report.coupling_legal = check_coupling_legal(mc, cm);
    report.tracking_ok = check_tracking(circuit, mc, sol);
    return report;
}

}  // namespace qxmap
