#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcfd/error.hpp"
#include "qcfd/gate.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

enum class OpKind {
    H,
    X,
    Y,
    Z,
    RX,
    RY,
    RZ,
    Phase,
    GPhase,  // e^{i theta} on the control subspace (global phase when uncontrolled)
    Swap,
    Idle,     // identity with a duration, for decoherence studies
    Unitary,  // dense k-qubit matrix
    Measure,  // tag only; sampling happens outside circuit execution
};

inline const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::H: return "H";
        case OpKind::X: return "X";
        case OpKind::Y: return "Y";
        case OpKind::Z: return "Z";
        case OpKind::RX: return "RX";
        case OpKind::RY: return "RY";
        case OpKind::RZ: return "RZ";
        case OpKind::Phase: return "PHASE";
        case OpKind::GPhase: return "GPHASE";
        case OpKind::Swap: return "SWAP";
        case OpKind::Idle: return "IDLE";
        case OpKind::Unitary: return "UNITARY";
        case OpKind::Measure: return "MEASURE";
    }
    return "?";
}

// Default gate times. The device literature quotes coherence times but not
// gate durations, so these are configurable; values are typical for the
// cited hardware era.
struct GateDurations {
    double one_qubit = 35e-9;
    double two_qubit = 300e-9;
};

struct CircuitOp {
    OpKind kind;
    std::vector<int> targets;
    std::vector<int> controls;
    std::uint64_t control_pattern = ~std::uint64_t(0);  // bit i: required value of controls[i]
    std::vector<double> params;
    double duration = 0.0;
    std::shared_ptr<const GateMatrix> matrix;  // Unitary ops only

    bool parameterized() const {
        return kind == OpKind::RX || kind == OpKind::RY || kind == OpKind::RZ ||
               kind == OpKind::Phase || kind == OpKind::GPhase;
    }

    int involved_qubits() const { return static_cast<int>(targets.size() + controls.size()); }

    // resolve the 2x2 / dense matrix for execution
    GateMatrix resolve(double angle_shift = 0.0) const {
        switch (kind) {
            case OpKind::H: return gate::h();
            case OpKind::X: return gate::x();
            case OpKind::Y: return gate::y();
            case OpKind::Z: return gate::z();
            case OpKind::RX: return gate::rx(params[0] + angle_shift);
            case OpKind::RY: return gate::ry(params[0] + angle_shift);
            case OpKind::RZ: return gate::rz(params[0] + angle_shift);
            case OpKind::Phase: return gate::phase(params[0] + angle_shift);
            case OpKind::GPhase: return gate::gphase(params[0] + angle_shift);
            case OpKind::Swap: return gate::swap();
            case OpKind::Idle: return gate::identity(2);
            case OpKind::Unitary: return *matrix;
            case OpKind::Measure: break;
        }
        throw validation_error("measure tag has no matrix");
    }
};

struct CircuitMetrics {
    int width = 0;
    int depth = 0;
    std::uint64_t one_q_gates = 0;
    std::uint64_t two_q_gates = 0;
    std::uint64_t many_q_gates = 0;  // ops with three or more involved qubits
    double total_duration = 0.0;     // seconds, summed over ops
};

class QuantumCircuit {
public:
    QuantumCircuit() = default;
    explicit QuantumCircuit(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1) throw validation_error("circuit needs at least one qubit");
    }

    int n_qubits() const { return n_qubits_; }
    const std::vector<CircuitOp>& ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }
    bool has_measurement() const {
        return std::any_of(ops_.begin(), ops_.end(),
                           [](const CircuitOp& op) { return op.kind == OpKind::Measure; });
    }

    void append(CircuitOp op) {
        validate(op);
        ops_.push_back(std::move(op));
    }

    // convenience builders; durations default per gate arity
    QuantumCircuit& h(int q) { return add1(OpKind::H, q); }
    QuantumCircuit& x(int q) { return add1(OpKind::X, q); }
    QuantumCircuit& y(int q) { return add1(OpKind::Y, q); }
    QuantumCircuit& z(int q) { return add1(OpKind::Z, q); }
    QuantumCircuit& rx(int q, double theta) { return add1(OpKind::RX, q, theta); }
    QuantumCircuit& ry(int q, double theta) { return add1(OpKind::RY, q, theta); }
    QuantumCircuit& rz(int q, double theta) { return add1(OpKind::RZ, q, theta); }
    QuantumCircuit& phase(int q, double theta) { return add1(OpKind::Phase, q, theta); }
    QuantumCircuit& gphase(double theta) { return add1(OpKind::GPhase, 0, theta); }
    QuantumCircuit& idle(int q, double seconds) {
        CircuitOp op{OpKind::Idle, {q}, {}, ~std::uint64_t(0), {}, seconds, nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& swap(int a, int b) {
        CircuitOp op{OpKind::Swap, {a, b}, {}, ~std::uint64_t(0), {}, durations_.two_qubit, nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& cx(int control, int target) {
        CircuitOp op{OpKind::X, {target}, {control}, ~std::uint64_t(0), {}, durations_.two_qubit,
                     nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& cphase(int control, int target, double theta) {
        CircuitOp op{OpKind::Phase, {target},          {control}, ~std::uint64_t(0), {theta},
                     durations_.two_qubit, nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& cry(int control, int target, double theta) {
        CircuitOp op{OpKind::RY,  {target},          {control}, ~std::uint64_t(0), {theta},
                     durations_.two_qubit, nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& measure(std::vector<int> qubits) {
        CircuitOp op{OpKind::Measure, std::move(qubits), {}, ~std::uint64_t(0), {}, 0.0, nullptr};
        append(std::move(op));
        return *this;
    }
    QuantumCircuit& unitary(std::vector<int> targets, GateMatrix m, double duration = -1.0) {
        // full U†U check up to dim 256; column norms + neighbor orthogonality beyond
        bool ok = true;
        if (m.dim <= 256) {
            ok = m.is_unitary(1e-10);
        } else {
            for (int c = 0; c < m.dim && ok; ++c) {
                cplx dot = 0.0;
                double n2 = 0.0;
                for (int r = 0; r < m.dim; ++r) {
                    n2 += std::norm(m(r, c));
                    if (c + 1 < m.dim) dot += std::conj(m(r, c)) * m(r, c + 1);
                }
                ok = std::abs(n2 - 1.0) <= 1e-10 && std::abs(dot) <= 1e-10;
            }
        }
        if (!ok) throw validation_error("unitary op: matrix is not unitary");
        CircuitOp op{OpKind::Unitary,
                     std::move(targets),
                     {},
                     ~std::uint64_t(0),
                     {},
                     duration >= 0.0 ? duration
                                     : (m.dim == 2 ? durations_.one_qubit : durations_.two_qubit),
                     std::make_shared<const GateMatrix>(std::move(m))};
        append(std::move(op));
        return *this;
    }

    const GateDurations& durations() const { return durations_; }
    void set_durations(GateDurations d) { durations_ = d; }

    // Append every op of `other`, shifting its qubit indices by `offset`.
    void append_shifted(const QuantumCircuit& other, int offset,
                        std::span<const int> extra_controls = {}) {
        for (CircuitOp op : other.ops()) {
            for (int& q : op.targets) q += offset;
            for (int& q : op.controls) q += offset;
            for (std::size_t i = 0; i < extra_controls.size(); ++i) {
                op.control_pattern |= std::uint64_t(1) << op.controls.size();
                op.controls.push_back(extra_controls[i]);
            }
            append(std::move(op));
        }
    }

private:
    QuantumCircuit& add1(OpKind kind, int q, std::optional<double> theta = std::nullopt) {
        CircuitOp op{kind, {q}, {}, ~std::uint64_t(0), {}, durations_.one_qubit, nullptr};
        if (theta) {
            if (!std::isfinite(*theta)) throw validation_error("gate angle must be finite");
            op.params.push_back(*theta);
        }
        append(std::move(op));
        return *this;
    }

    void validate(const CircuitOp& op) const {
        for (int q : op.targets) check_index(q);
        for (int q : op.controls) check_index(q);
        for (int q : op.controls)
            for (int t : op.targets)
                if (q == t) throw validation_error("control qubit overlaps target");
        for (double p : op.params)
            if (!std::isfinite(p)) throw validation_error("gate parameter must be finite");
        if (op.parameterized() && op.params.size() != 1)
            throw validation_error("rotation/phase ops carry exactly one angle");
        if (op.duration < 0.0) throw validation_error("gate duration must be nonnegative");
        if (op.kind == OpKind::Unitary) {
            if (!op.matrix) throw validation_error("unitary op lacks a matrix");
            if (op.matrix->qubits() != static_cast<int>(op.targets.size()))
                throw validation_error("unitary op target count does not match matrix size");
        }
        if (op.kind == OpKind::Swap && op.targets.size() != 2)
            throw validation_error("swap needs exactly two targets");
    }

    void check_index(int q) const {
        if (q < 0 || q >= n_qubits_)
            throw index_error("op touches qubit " + std::to_string(q) + " outside the " +
                              std::to_string(n_qubits_) + "-qubit register");
    }

    int n_qubits_ = 1;
    std::vector<CircuitOp> ops_;
    GateDurations durations_;
};

inline QuantumCircuit append_gate(QuantumCircuit circuit, CircuitOp op) {
    circuit.append(std::move(op));
    return circuit;
}

// Reversed op order with each gate conjugate-transposed. Rejects circuits
// containing measure tags.
inline QuantumCircuit adjoint(const QuantumCircuit& circuit) {
    if (circuit.has_measurement())
        throw validation_error("cannot take the adjoint of a circuit with measurements");
    QuantumCircuit out(circuit.n_qubits());
    out.set_durations(circuit.durations());
    const auto& ops = circuit.ops();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        CircuitOp op = *it;
        switch (op.kind) {
            case OpKind::H:
            case OpKind::X:
            case OpKind::Y:
            case OpKind::Z:
            case OpKind::Swap:
            case OpKind::Idle:
                break;  // self-adjoint
            case OpKind::RX:
            case OpKind::RY:
            case OpKind::RZ:
            case OpKind::Phase:
            case OpKind::GPhase:
                op.params[0] = -op.params[0];
                break;
            case OpKind::Unitary:
                op.matrix = std::make_shared<const GateMatrix>(op.matrix->adjoint());
                break;
            case OpKind::Measure:
                break;  // unreachable
        }
        out.append(std::move(op));
    }
    return out;
}

// The circuit applied `power` times with every gate promoted to controlled
// form on `control`. The returned circuit spans max(n_qubits, control+1)
// qubits; the caller lays out the composite register.
inline QuantumCircuit controlled_power(const QuantumCircuit& circuit, int power, int control) {
    if (power < 1) throw validation_error("controlled power requires power >= 1");
    if (circuit.has_measurement())
        throw validation_error("cannot control a circuit with measurements");
    const int width = std::max(circuit.n_qubits(), control + 1);
    QuantumCircuit out(width);
    out.set_durations(circuit.durations());
    const std::array<int, 1> ctrl{control};
    for (int rep = 0; rep < power; ++rep) out.append_shifted(circuit, 0, ctrl);
    return out;
}

// Greedy layer packing: each op enters the earliest layer in which none of
// its qubits are occupied.
inline CircuitMetrics metrics(const QuantumCircuit& circuit) {
    CircuitMetrics m;
    m.width = circuit.n_qubits();
    std::vector<int> next_free(circuit.n_qubits(), 0);
    for (const CircuitOp& op : circuit.ops()) {
        int layer = 0;
        for (int q : op.targets) layer = std::max(layer, next_free[q]);
        for (int q : op.controls) layer = std::max(layer, next_free[q]);
        for (int q : op.targets) next_free[q] = layer + 1;
        for (int q : op.controls) next_free[q] = layer + 1;
        m.depth = std::max(m.depth, layer + 1);
        m.total_duration += op.duration;
        if (op.kind == OpKind::Measure || op.kind == OpKind::Idle) continue;
        switch (op.involved_qubits()) {
            case 1: ++m.one_q_gates; break;
            case 2: ++m.two_q_gates; break;
            default: ++m.many_q_gates; break;
        }
    }
    return m;
}

// Noiseless execution: ops applied in order via the statevector kernels.
// Measure tags are inert here; sampling is a separate operation.
inline Statevector execute(const QuantumCircuit& circuit, Statevector state) {
    if (circuit.n_qubits() != state.n_qubits())
        throw validation_error("circuit and state qubit counts differ");
    for (const CircuitOp& op : circuit.ops()) {
        if (op.kind == OpKind::Measure || op.kind == OpKind::Idle) continue;
        state.apply_controlled_pattern(op.resolve(), op.controls, op.control_pattern, op.targets);
    }
    return state;
}

inline Statevector execute(const QuantumCircuit& circuit) {
    return execute(circuit, Statevector(circuit.n_qubits()));
}

// A ∘ B: run B first, then A.
inline QuantumCircuit compose(const QuantumCircuit& after, const QuantumCircuit& before) {
    if (after.n_qubits() != before.n_qubits())
        throw validation_error("composed circuits must share a register width");
    QuantumCircuit out = before;
    for (const CircuitOp& op : after.ops()) out.append(op);
    return out;
}

}  // namespace qcfd
