#pragma once

#include "qcfd/circuit.hpp"

namespace qcfd {

// Cyclic streaming shift: maps basis |i> to |(i + direction) mod 2^n> via a
// ripple-carry ladder of multi-controlled X gates. direction must be +1 or -1.
inline QuantumCircuit cyclic_shift_circuit(int n, int direction = +1) {
    if (n < 1) throw validation_error("shift register needs at least one qubit");
    if (direction != 1 && direction != -1)
        throw validation_error("shift direction must be +1 or -1");
    QuantumCircuit c(n);
    // increment: flip bit j when all lower bits are 1, top bit first so each
    // gate reads pre-increment values
    for (int j = n - 1; j >= 1; --j) {
        CircuitOp op{OpKind::X, {j}, {}, ~std::uint64_t(0), {}, c.durations().two_qubit, nullptr};
        for (int q = 0; q < j; ++q) op.controls.push_back(q);
        c.append(std::move(op));
    }
    c.x(0);
    return direction == 1 ? c : adjoint(c);
}

}  // namespace qcfd
