#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qcfd/circuit.hpp"

namespace qcfd {

struct EncodeResult {
    QuantumCircuit circuit;
    double classical_norm;  // Euclidean norm of the input data
};

// Amplitude encoding of a real vector of length 2^k: a binary tree of
// pattern-controlled Ry rotations (O(2^k) gates — the linear state-prep cost
// is visible in the circuit metrics). Executing the circuit on |0...0> gives
// amplitudes data/||data||; signs are realized at the deepest tree level.
// When all rotations of a level share one angle the controls are dropped,
// so uniform data compresses to single-qubit rotations.
inline EncodeResult amplitude_encode(std::span<const double> data) {
    const std::size_t n = data.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw validation_error("amplitude encoding needs a power-of-two data length >= 2");
    int k = 0;
    for (std::size_t d = n; d > 1; d >>= 1) ++k;

    // node norms: tree[1] is the root, children of node i are 2i and 2i+1;
    // leaves tree[n .. 2n) hold the signed data values
    std::vector<double> tree(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tree[n + i] = data[i];
    for (std::size_t i = n - 1; i >= 1; --i)
        tree[i] = std::sqrt(tree[2 * i] * tree[2 * i] + tree[2 * i + 1] * tree[2 * i + 1]);
    const double norm = tree[1];
    if (!(norm > 0.0)) throw validation_error("cannot amplitude-encode the zero vector");

    QuantumCircuit circuit(k);
    // level d splits on qubit (k-1-d); node index within the level is the
    // integer formed by the already-fixed higher qubits
    for (int d = 0; d < k; ++d) {
        const int target = k - 1 - d;
        const std::size_t level_nodes = std::size_t(1) << d;
        std::vector<double> angles(level_nodes, 0.0);
        bool any = false, all_equal = true;
        for (std::size_t node = 0; node < level_nodes; ++node) {
            const std::size_t idx = level_nodes + node;
            const double left = tree[2 * idx], right = tree[2 * idx + 1];
            if (tree[idx] > 0.0) {
                angles[node] = 2.0 * std::atan2(right, left);
                any = true;
            }
            if (angles[node] != angles[0]) all_equal = false;
        }
        if (!any) continue;
        if (all_equal) {
            if (angles[0] != 0.0) circuit.ry(target, angles[0]);
            continue;
        }
        for (std::size_t node = 0; node < level_nodes; ++node) {
            const std::size_t idx = level_nodes + node;
            if (tree[idx] == 0.0 || angles[node] == 0.0) continue;
            CircuitOp op{OpKind::RY, {target}, {}, 0, {angles[node]},
                         circuit.durations().two_qubit, nullptr};
            // controls are the d higher qubits; node bit j corresponds to
            // qubit k-1-j
            for (int j = 0; j < d; ++j) {
                op.controls.push_back(k - 1 - j);
                if (node & (std::size_t(1) << (d - 1 - j)))
                    op.control_pattern |= std::uint64_t(1) << j;
            }
            circuit.append(std::move(op));
        }
    }
    return {std::move(circuit), norm};
}

// Statevector holding data/||data|| with classical_norm = ||data||.
inline Statevector encode_state(std::span<const double> data) {
    EncodeResult enc = amplitude_encode(data);
    Statevector s = execute(enc.circuit);
    s.set_classical_norm(enc.classical_norm);
    return s;
}

// --- basis (fractional binary) encoding ------------------------------------

// Truncate value in [0,1) toward zero to an n-bit fraction; the basis index.
inline std::uint64_t fractional_binary_encode(double value, int n_bits) {
    if (n_bits < 1 || n_bits > 62) throw validation_error("bit count out of range");
    if (!(value >= 0.0) || value >= 1.0)
        throw validation_error("fractional binary encoding needs value in [0, 1)");
    const std::uint64_t cells = std::uint64_t(1) << n_bits;
    auto index = static_cast<std::uint64_t>(value * static_cast<double>(cells));
    return index < cells ? index : cells - 1;  // guard the rounding edge at 1.0
}

// index / 2^n, the value a basis state |index> represents.
inline double fractional_binary_decode(std::uint64_t index, int n_bits) {
    if (n_bits < 1 || n_bits > 62) throw validation_error("bit count out of range");
    if (index >> n_bits) throw validation_error("basis index wider than n_bits");
    return static_cast<double>(index) / static_cast<double>(std::uint64_t(1) << n_bits);
}

}  // namespace qcfd
