#pragma once

#include <numbers>

#include "qcfd/circuit.hpp"

namespace qcfd {

// Quantum Fourier transform on n qubits. With qubit 0 as the least
// significant bit, the circuit's full unitary equals the DFT matrix
// F[j,k] = exp(+2*pi*i*j*k/2^n)/sqrt(2^n) acting on basis indices.
// Gate count: n Hadamards, n(n-1)/2 controlled phases, floor(n/2) swaps.
inline QuantumCircuit qft_circuit(int n, bool inverse = false) {
    if (n < 1 || n > 25) throw validation_error("qft size out of supported range 1..25");
    QuantumCircuit c(n);
    for (int q = n - 1; q >= 0; --q) {
        c.h(q);
        for (int m = 1; m <= q; ++m)
            c.cphase(q - m, q, std::numbers::pi / static_cast<double>(1 << m));
    }
    for (int q = 0; q < n / 2; ++q) c.swap(q, n - 1 - q);
    return inverse ? adjoint(c) : c;
}

}  // namespace qcfd
