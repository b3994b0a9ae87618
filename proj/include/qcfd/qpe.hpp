#pragma once

#include <cstdint>

#include "qcfd/circuit.hpp"
#include "qcfd/qft.hpp"
#include "qcfd/sampling.hpp"

namespace qcfd {

// Quantum phase estimation circuit on a composite register laid out as
// [data 0..n_d) [clock n_d..n_d+l). For U|u> = e^{2 pi i phi}|u>, measuring
// the clock yields integers k concentrated at k ~ phi * 2^l.
inline QuantumCircuit phase_estimation_circuit(const QuantumCircuit& unitary, int clock_qubits) {
    if (clock_qubits < 1) throw validation_error("phase estimation needs at least one clock qubit");
    const int n_d = unitary.n_qubits();
    const int total = n_d + clock_qubits;
    QuantumCircuit c(total);
    for (int j = 0; j < clock_qubits; ++j) c.h(n_d + j);
    for (int j = 0; j < clock_qubits; ++j) {
        const std::array<int, 1> ctrl{n_d + j};
        for (std::uint64_t rep = 0; rep < (std::uint64_t(1) << j); ++rep)
            c.append_shifted(unitary, 0, ctrl);
    }
    c.append_shifted(qft_circuit(clock_qubits, /*inverse=*/true), n_d);
    return c;
}

// Run QPE on an eigenstate of `unitary` and sample the clock register.
// The histogram indexes l-bit phase values.
inline ShotHistogram phase_estimation(const QuantumCircuit& unitary, int clock_qubits,
                                      const Statevector& eigenstate,
                                      std::uint64_t shots = 4096, std::uint64_t seed = 0) {
    if (eigenstate.n_qubits() != unitary.n_qubits())
        throw validation_error("eigenstate register does not match the unitary");
    const int n_d = unitary.n_qubits();
    Statevector full(n_d + clock_qubits);
    // embed eigenstate in the data register
    {
        std::vector<cplx> amps(full.dim(), cplx(0.0, 0.0));
        for (std::uint64_t i = 0; i < eigenstate.dim(); ++i) amps[i] = eigenstate[i];
        full = Statevector::from_amplitudes(n_d + clock_qubits, std::move(amps));
    }
    full = execute(phase_estimation_circuit(unitary, clock_qubits), std::move(full));

    ShotHistogram raw = sample_shots(full, shots, seed);
    ShotHistogram clock;
    clock.n_qubits = clock_qubits;
    for (const auto& [idx, count] : raw.counts) clock.add(idx >> n_d, count);
    return clock;
}

}  // namespace qcfd
