#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/error.hpp"

namespace qcfd {

// Gate folding: every gate G becomes G (G† G)^((c-1)/2), leaving the ideal
// action unchanged while exposing the circuit to c times the noise. c must
// be odd (or 1).
inline QuantumCircuit noise_scaled_circuit(const QuantumCircuit& circuit, int scale) {
    if (scale < 1 || scale % 2 == 0)
        throw validation_error("noise scale must be an odd positive integer");
    if (scale == 1) return circuit;
    QuantumCircuit out(circuit.n_qubits());
    out.set_durations(circuit.durations());
    for (const CircuitOp& op : circuit.ops()) {
        if (op.kind == OpKind::Measure) {
            out.append(op);
            continue;
        }
        if (op.kind == OpKind::Idle) {
            CircuitOp stretched = op;
            stretched.duration *= scale;
            out.append(std::move(stretched));
            continue;
        }
        CircuitOp inverse = op;
        if (op.parameterized()) {
            inverse.params[0] = -inverse.params[0];
        } else if (op.kind == OpKind::Unitary) {
            inverse.matrix = std::make_shared<const GateMatrix>(op.matrix->adjoint());
        }  // H, X, Y, Z, Swap are self-inverse
        out.append(op);
        for (int rep = 0; rep < (scale - 1) / 2; ++rep) {
            out.append(inverse);
            out.append(op);
        }
    }
    return out;
}

// Polynomial (Lagrange) extrapolation of observable estimates taken at
// noise scales c >= 1 down to the zero-noise limit c = 0. Two points at
// scales 1 and 2 reduce to 2*v(1) - v(2).
inline double richardson_extrapolate(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw validation_error("extrapolation needs at least two noise scales");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw validation_error("duplicate noise scales in extrapolation input");
    double value = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double weight = 1.0;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            weight *= points[j].first / (points[j].first - points[i].first);
        }
        value += weight * points[i].second;
    }
    return value;
}

}  // namespace qcfd
