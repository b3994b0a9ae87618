#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/encoding.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/shift.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

// One term alpha * U of a linear combination of unitaries. Coefficients are
// strictly positive; signs and phases live inside the unitary (a GPHASE op
// absorbs a factor of -1).
struct LcuTerm {
    double alpha;
    QuantumCircuit unitary;
};

struct LcuDecomposition {
    std::vector<LcuTerm> terms;

    int data_qubits() const { return terms.empty() ? 0 : terms.front().unitary.n_qubits(); }

    int ancilla_qubits() const {
        int a = 0;
        while ((std::size_t(1) << a) < terms.size()) ++a;
        return a;
    }

    // normalization lambda = sum of coefficients
    double lambda() const {
        double l = 0.0;
        for (const LcuTerm& t : terms) l += t.alpha;
        return l;
    }

    void validate() const {
        if (terms.empty()) throw validation_error("LCU needs at least one term");
        for (const LcuTerm& t : terms) {
            if (!(t.alpha > 0.0)) throw validation_error("LCU coefficients must be positive");
            if (t.unitary.n_qubits() != data_qubits())
                throw validation_error("LCU terms act on different register widths");
        }
    }
};

struct LcuResult {
    Statevector state;           // data register after post-selecting ancilla |0...0>
    double success_probability;  // = ||M psi||^2 / lambda^2
};

// Apply M/lambda = sum_i (alpha_i/lambda) U_i probabilistically:
// PREPARE loads sqrt(alpha_i/lambda) onto the ancilla, SELECT applies U_i
// controlled on ancilla value i, PREPARE† recombines, and the ancilla is
// post-selected on |0...0>.
inline LcuResult lcu_apply(const LcuDecomposition& decomp, const Statevector& input) {
    decomp.validate();
    const int n = decomp.data_qubits();
    if (input.n_qubits() != n)
        throw validation_error("input state does not match the LCU register");
    const int a = decomp.ancilla_qubits();

    if (a == 0) {  // single unitary: success is certain
        Statevector out = execute(decomp.terms.front().unitary, input);
        out.set_classical_norm(input.classical_norm());
        return {std::move(out), 1.0};
    }

    // composite register: data bits [0, n), ancilla bits [n, n+a)
    Statevector full(n + a);
    {
        std::vector<cplx> amps(full.dim(), cplx(0.0, 0.0));
        for (std::uint64_t i = 0; i < input.dim(); ++i) amps[i] = input[i];
        full = Statevector::from_amplitudes(n + a, std::move(amps));
    }

    QuantumCircuit circuit(n + a);
    std::vector<double> weights(std::size_t(1) << a, 0.0);
    for (std::size_t i = 0; i < decomp.terms.size(); ++i)
        weights[i] = std::sqrt(decomp.terms[i].alpha);
    QuantumCircuit prepare(a);
    {
        EncodeResult enc = amplitude_encode(weights);
        prepare = std::move(enc.circuit);
    }
    circuit.append_shifted(prepare, n);

    std::vector<int> ancilla(a);
    for (int j = 0; j < a; ++j) ancilla[j] = n + j;
    for (std::size_t i = 0; i < decomp.terms.size(); ++i) {
        // promote the term circuit with ancilla controls matching pattern i
        for (CircuitOp op : decomp.terms[i].unitary.ops()) {
            for (int j = 0; j < a; ++j) {
                if (i & (std::size_t(1) << j))
                    op.control_pattern |= std::uint64_t(1) << op.controls.size();
                else
                    op.control_pattern &= ~(std::uint64_t(1) << op.controls.size());
                op.controls.push_back(ancilla[j]);
            }
            circuit.append(std::move(op));
        }
    }
    circuit.append_shifted(adjoint(prepare), n);

    full = execute(circuit, std::move(full));

    // post-select ancilla = |0...0>
    std::vector<cplx> data(input.dim(), cplx(0.0, 0.0));
    double p = 0.0;
    for (std::uint64_t i = 0; i < input.dim(); ++i) {
        data[i] = full[i];
        p += std::norm(data[i]);
    }
    if (p <= 0.0) throw numerical_error("LCU post-selection has zero success probability");
    const double scale = 1.0 / std::sqrt(p);
    for (cplx& v : data) v *= scale;
    Statevector out = Statevector::from_amplitudes(n, std::move(data));
    out.set_classical_norm(input.classical_norm());
    return {std::move(out), p};
}

// LCU form of a finite-difference step matrix: identity plus cyclic shifts.
//   explicit:  (1-2r) I + (r - c/2) S_down + (r + c/2) S_up
//   implicit:  (1+2r) I - (r - c/2) S_down - (r + c/2) S_up
// where S_up maps |i> -> |i+1 mod N| (the subdiagonal) and S_down its
// inverse (the superdiagonal). Negative coefficients fold the sign into the
// unitary as a GPHASE(pi).
inline LcuDecomposition lcu_decomposition(const StepOperator& op) {
    int k = 0;
    for (int d = op.n; d > 1; d >>= 1) ++k;
    if ((1 << k) != op.n) throw validation_error("LCU step operator needs a power-of-two grid");

    const double r = op.diffusion_number, c = op.courant_number;
    const bool explicit_scheme = op.scheme == Scheme::Explicit;
    const double diag = explicit_scheme ? 1.0 - 2.0 * r : 1.0 + 2.0 * r;
    const double super = (explicit_scheme ? 1.0 : -1.0) * (r - c / 2.0);
    const double sub = (explicit_scheme ? 1.0 : -1.0) * (r + c / 2.0);

    auto signed_term = [&](double coeff, QuantumCircuit base) -> LcuTerm {
        if (coeff < 0.0) base.gphase(std::numbers::pi);
        return {std::abs(coeff), std::move(base)};
    };

    LcuDecomposition decomp;
    if (diag != 0.0) decomp.terms.push_back(signed_term(diag, QuantumCircuit(k)));
    if (super != 0.0) decomp.terms.push_back(signed_term(super, cyclic_shift_circuit(k, -1)));
    if (sub != 0.0) decomp.terms.push_back(signed_term(sub, cyclic_shift_circuit(k, +1)));
    decomp.validate();
    return decomp;
}

}  // namespace qcfd
