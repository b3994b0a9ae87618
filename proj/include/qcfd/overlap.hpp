#pragma once

#include <cstdint>
#include <numbers>

#include "qcfd/circuit.hpp"
#include "qcfd/sampling.hpp"

namespace qcfd {

// SWAP test between two equal-width states. Register layout:
// [ancilla 0][a 1..n][b n+1..2n]. P(ancilla=0) = (1 + |<a|b>|^2)/2, so the
// returned estimator has mean |<a|b>|^2 and standard error <= 1/sqrt(shots).
inline double swap_test(const Statevector& a, const Statevector& b, std::uint64_t shots,
                        std::uint64_t seed) {
    if (a.n_qubits() != b.n_qubits())
        throw validation_error("swap test requires equal register sizes");
    if (shots < 1) throw validation_error("swap test requires at least one shot");
    const int n = a.n_qubits();

    std::vector<cplx> amps(std::uint64_t(1) << (2 * n + 1), cplx(0.0, 0.0));
    for (std::uint64_t i = 0; i < a.dim(); ++i)
        for (std::uint64_t j = 0; j < b.dim(); ++j)
            amps[(j << (n + 1)) | (i << 1)] = a[i] * b[j];
    Statevector full = Statevector::from_amplitudes(2 * n + 1, std::move(amps));

    QuantumCircuit c(2 * n + 1);
    c.h(0);
    for (int q = 0; q < n; ++q) {
        CircuitOp cswap{OpKind::Swap, {1 + q, 1 + n + q}, {0}, ~std::uint64_t(0), {},
                        c.durations().two_qubit, nullptr};
        c.append(std::move(cswap));
    }
    c.h(0);
    full = execute(c, std::move(full));

    ShotHistogram hist = sample_shots(full, shots, seed);
    std::uint64_t zeros = 0;
    for (const auto& [idx, count] : hist.counts)
        if ((idx & 1) == 0) zeros += count;
    const double p0 = static_cast<double>(zeros) / static_cast<double>(shots);
    return 2.0 * p0 - 1.0;
}

enum class OverlapPart { Real, Imaginary };

// Hadamard test: estimates Re<psi|U|psi> (or Im with an S† on the ancilla).
// Register layout: [ancilla 0][data 1..n]. Standard error <= 1/sqrt(shots).
inline double hadamard_test(const QuantumCircuit& u, const Statevector& state, OverlapPart part,
                            std::uint64_t shots, std::uint64_t seed) {
    if (u.n_qubits() != state.n_qubits())
        throw validation_error("hadamard test: circuit and state sizes differ");
    if (shots < 1) throw validation_error("hadamard test requires at least one shot");
    const int n = state.n_qubits();

    std::vector<cplx> amps(std::uint64_t(1) << (n + 1), cplx(0.0, 0.0));
    for (std::uint64_t i = 0; i < state.dim(); ++i) amps[i << 1] = state[i];
    Statevector full = Statevector::from_amplitudes(n + 1, std::move(amps));

    QuantumCircuit c(n + 1);
    c.h(0);
    const std::array<int, 1> ctrl{0};
    c.append_shifted(u, 1, ctrl);
    if (part == OverlapPart::Imaginary) c.phase(0, -std::numbers::pi / 2);
    c.h(0);
    full = execute(c, std::move(full));

    ShotHistogram hist = sample_shots(full, shots, seed);
    std::uint64_t zeros = 0;
    for (const auto& [idx, count] : hist.counts)
        if ((idx & 1) == 0) zeros += count;
    const double p0 = static_cast<double>(zeros) / static_cast<double>(shots);
    return 2.0 * p0 - 1.0;
}

}  // namespace qcfd
