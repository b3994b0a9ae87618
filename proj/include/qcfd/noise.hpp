#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "qcfd/circuit.hpp"
#include "qcfd/rng.hpp"
#include "qcfd/sampling.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

// Device imperfection description. Decoherence is modeled per gate from its
// duration; gate errors are per-gate Pauli faults; rotation angles carry a
// coherent miscalibration spread.
struct NoiseModel {
    double t1 = 0.0;                 // relaxation time, seconds (0 = disabled)
    double t2 = 0.0;                 // dephasing time, seconds (0 = disabled), T2 <= 2*T1
    double gate_error_rate = 0.0;    // probability of a random Pauli per gate
    double overrotation_sigma = 0.0; // radians, Gaussian angle jitter
    double readout_error = 0.0;      // per-qubit bit-flip probability at measurement

    void validate() const {
        if (t1 < 0.0 || t2 < 0.0) throw validation_error("decoherence times must be nonnegative");
        if (t2 > 0.0 && t1 > 0.0 && t2 > 2.0 * t1 + 1e-15)
            throw validation_error("unphysical noise model: T2 must not exceed 2*T1");
        for (double p : {gate_error_rate, readout_error})
            if (p < 0.0 || p > 1.0) throw validation_error("rates must lie in [0, 1]");
        if (overrotation_sigma < 0.0)
            throw validation_error("overrotation spread must be nonnegative");
    }

    bool silent() const {
        return t1 == 0.0 && t2 == 0.0 && gate_error_rate == 0.0 && overrotation_sigma == 0.0;
    }

    // pure-dephasing rate 1/T2' = 1/T2 - 1/(2*T1)
    double pure_dephasing_rate() const {
        if (t2 <= 0.0) return 0.0;
        return 1.0 / t2 - (t1 > 0.0 ? 1.0 / (2.0 * t1) : 0.0);
    }

    // IBM Sherbrooke median calibration, June 2024.
    static NoiseModel sherbrooke_2024() {
        NoiseModel m;
        m.t1 = 275.72e-6;
        m.t2 = 160.63e-6;
        m.gate_error_rate = 1e-3;
        return m;
    }
};

// Eq.-of-state angles of a single-qubit state
//   |psi> = e^{i beta1} (cos(beta2)|0> + e^{i beta3} sin(beta2)|1>)
// with beta2 in [0, pi/2] by convention.
struct BlochAngles {
    double beta1 = 0.0;  // global phase
    double beta2 = 0.0;  // polar angle
    double beta3 = 0.0;  // relative phase
};

inline BlochAngles bloch_angles(const Statevector& state) {
    if (state.n_qubits() != 1) throw validation_error("Bloch angles are single-qubit only");
    const cplx a0 = state[0], a1 = state[1];
    BlochAngles b;
    b.beta2 = std::atan2(std::abs(a1), std::abs(a0));
    if (std::abs(a0) > 0.0) {
        b.beta1 = std::arg(a0);
        b.beta3 = std::abs(a1) > 0.0 ? std::arg(a1) - b.beta1 : 0.0;
    } else {
        b.beta1 = 0.0;
        b.beta3 = std::arg(a1);
    }
    return b;
}

inline Statevector state_from_bloch(const BlochAngles& b) {
    const cplx a0 = std::polar(std::cos(b.beta2), b.beta1);
    const cplx a1 = std::polar(std::sin(b.beta2), b.beta1 + b.beta3);
    return Statevector::from_amplitudes(1, {a0, a1});
}

namespace detail {

// Amplitude-damping step over an interval dt: with probability
// p_jump = (1 - e^{-dt/T1}) * P(|1>) collapse the qubit to |0>, otherwise
// apply the no-jump Kraus diag(1, sqrt(e^{-dt/T1})) and renormalize.
inline void damping_step(Statevector& state, int qubit, double p1_gate, Rng& rng) {
    const double p_excited = state.excited_population(qubit);
    if (p_excited <= 0.0) return;
    if (rng.bernoulli(p1_gate * p_excited)) {
        state.project_qubit(qubit, 1);     // select the decaying branch
        state.apply_1q(gate::x(), qubit);  // and drop it into |0>
    } else {
        GateMatrix k0(2, {1.0, 0.0, 0.0, std::sqrt(1.0 - p1_gate)});
        state.apply_1q_nonunitary(k0, qubit);
    }
}

}  // namespace detail

// One stochastic trajectory of the circuit under the noise model,
// bit-for-bit reproducible for a given seed. Per gate: ideal action (with
// jittered angle for rotations), then per touched qubit a T1 amplitude-
// damping jump with probability 1-e^{-dt/T1}, a dephasing Z jump with
// probability 1-e^{-dt/T2'}, and with probability gate_error_rate a uniform
// random Pauli. Idle ops decohere but take no gate fault.
inline Statevector noisy_execute(const QuantumCircuit& circuit, const NoiseModel& noise,
                                 std::uint64_t seed,
                                 Statevector state_in = Statevector(1)) {
    noise.validate();
    Statevector state = state_in.n_qubits() == circuit.n_qubits()
                            ? std::move(state_in)
                            : Statevector(circuit.n_qubits());
    Rng rng(seed);
    const double dephasing_rate = noise.pure_dephasing_rate();

    for (const CircuitOp& op : circuit.ops()) {
        if (op.kind == OpKind::Measure) continue;
        if (op.kind != OpKind::Idle) {
            double shift = 0.0;
            if (noise.overrotation_sigma > 0.0 && op.parameterized())
                shift = noise.overrotation_sigma * rng.gaussian();
            state.apply_controlled_pattern(op.resolve(shift), op.controls, op.control_pattern,
                                           op.targets);
        }
        if (op.duration > 0.0) {
            const double p_damp = noise.t1 > 0.0 ? 1.0 - std::exp(-op.duration / noise.t1) : 0.0;
            const double p_z =
                dephasing_rate > 0.0 ? 1.0 - std::exp(-op.duration * dephasing_rate) : 0.0;
            for (int q : op.targets) {
                if (p_damp > 0.0) detail::damping_step(state, q, p_damp, rng);
                if (p_z > 0.0 && rng.bernoulli(p_z)) state.apply_1q(gate::z(), q);
            }
            for (int q : op.controls) {
                if (p_damp > 0.0) detail::damping_step(state, q, p_damp, rng);
                if (p_z > 0.0 && rng.bernoulli(p_z)) state.apply_1q(gate::z(), q);
            }
        }
        if (op.kind != OpKind::Idle && noise.gate_error_rate > 0.0 &&
            rng.bernoulli(noise.gate_error_rate)) {
            auto pauli = [&](int q) {
                switch (rng.integer(3)) {
                    case 0: state.apply_1q(gate::x(), q); break;
                    case 1: state.apply_1q(gate::y(), q); break;
                    default: state.apply_1q(gate::z(), q); break;
                }
            };
            for (int q : op.targets) pauli(q);
            for (int q : op.controls) pauli(q);
        }
    }
    return state;
}

// Histogram over `shots` independent noisy trajectories, one measurement
// each; readout bit flips applied per the model.
inline ShotHistogram noisy_histogram(const QuantumCircuit& circuit, const NoiseModel& noise,
                                     std::uint64_t shots, std::uint64_t seed,
                                     const Statevector* initial = nullptr) {
    if (shots < 1) throw validation_error("sampling requires at least one shot");
    ShotHistogram hist;
    hist.n_qubits = circuit.n_qubits();
    for (std::uint64_t s = 0; s < shots; ++s) {
        const std::uint64_t traj_seed = derive_seed(seed, s);
        Statevector out = noisy_execute(circuit, noise, traj_seed,
                                        initial ? *initial : Statevector(circuit.n_qubits()));
        ShotHistogram one = sample_shots(out, 1, derive_seed(traj_seed, 0x5eedu),
                                         noise.readout_error);
        for (const auto& [idx, count] : one.counts) hist.add(idx, count);
    }
    return hist;
}

}  // namespace qcfd
