#pragma once

#include "qcfd/circuit.hpp"

namespace qcfd {

// H on qubit 0 followed by CNOT(0 -> 1): maps |00> to (|00> + |11>)/sqrt(2).
inline QuantumCircuit bell_circuit() {
    QuantumCircuit c(2);
    c.h(0).cx(0, 1);
    return c;
}

}  // namespace qcfd
