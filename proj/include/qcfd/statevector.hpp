#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcfd/error.hpp"
#include "qcfd/gate.hpp"

namespace qcfd {

// Bit convention used everywhere in this library: qubit 0 is the least
// significant bit of the basis-state integer, so |q2 q1 q0> = |011> is
// basis index 3.
//
// The amplitude array is the only O(2^n) allocation; gates update it in
// place through stride arithmetic and never materialize operator matrices
// over the full register.
class Statevector {
public:
    static constexpr int max_qubits = 30;

    explicit Statevector(int n_qubits) : Statevector(n_qubits, 0) {}

    Statevector(int n_qubits, std::uint64_t basis_index) {
        if (n_qubits < 1 || n_qubits > max_qubits)
            throw capacity_error("statevector with n=" + std::to_string(n_qubits) +
                                 " qubits needs 2^" + std::to_string(n_qubits) +
                                 " amplitudes; supported range is 1..30");
        n_qubits_ = n_qubits;
        amps_.assign(std::uint64_t(1) << n_qubits, cplx(0.0, 0.0));
        if (basis_index >= amps_.size())
            throw index_error("basis index out of range");
        amps_[basis_index] = 1.0;
    }

    static Statevector from_amplitudes(int n_qubits, std::vector<cplx> amplitudes,
                                       double classical_norm = 1.0) {
        Statevector s(n_qubits);
        if (amplitudes.size() != s.amps_.size())
            throw validation_error("amplitude vector length must be exactly 2^n_qubits");
        s.amps_ = std::move(amplitudes);
        s.set_classical_norm(classical_norm);
        double n2 = 0.0;
        for (const cplx& a : s.amps_) n2 += std::norm(a);
        if (std::abs(n2 - 1.0) > 1e-9)
            throw validation_error("amplitudes are not normalized");
        s.norm_sq_ = n2;
        return s;
    }

    int n_qubits() const { return n_qubits_; }
    std::uint64_t dim() const { return amps_.size(); }

    const cplx& operator[](std::uint64_t i) const { return amps_[i]; }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes_mut() { return amps_; }

    // Scale factor relating unit-norm amplitudes to the physical field they
    // encode (quantum states are normalized, velocity fields are not).
    double classical_norm() const { return classical_norm_; }
    void set_classical_norm(double value) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw validation_error("classical_norm must be positive and finite");
        classical_norm_ = value;
    }

    double probability(std::uint64_t basis_index) const { return std::norm(amps_[basis_index]); }

    double norm() const {
        double n2 = 0.0;
        for (const cplx& a : amps_) n2 += std::norm(a);
        return std::sqrt(n2);
    }

    // |norm^2 - 1| accumulated by gate applications since the last renormalization
    double norm_drift() const { return std::abs(norm_sq_ - 1.0); }
    double max_recorded_drift() const { return max_drift_; }
    int renormalization_count() const { return renorm_count_; }

    // --- gate application -------------------------------------------------

    void apply_1q(const GateMatrix& gate, int target) {
        require_gate(gate, 2);
        require_qubit(target);
        const cplx g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
        const std::uint64_t step = std::uint64_t(1) << target;
        const std::uint64_t n = amps_.size();
        double delta = 0.0;
        for (std::uint64_t base = 0; base < n; base += 2 * step) {
            for (std::uint64_t i0 = base; i0 < base + step; ++i0) {
                const std::uint64_t i1 = i0 | step;
                const cplx a0 = amps_[i0], a1 = amps_[i1];
                amps_[i0] = g00 * a0 + g01 * a1;
                amps_[i1] = g10 * a0 + g11 * a1;
                delta += std::norm(amps_[i0]) + std::norm(amps_[i1]) - std::norm(a0) - std::norm(a1);
            }
        }
        note_drift(delta);
    }

    void apply_controlled(const GateMatrix& gate, std::span<const int> controls, int target) {
        apply_controlled_pattern(gate, controls, all_ones(controls.size()), std::array{target});
    }

    // General dense k-qubit gate, optionally conditioned on control qubits
    // matching a bit pattern (pattern bit i corresponds to controls[i];
    // all-ones reproduces the usual controlled gate).
    template <typename Targets>
    void apply_controlled_pattern(const GateMatrix& gate, std::span<const int> controls,
                                  std::uint64_t pattern, const Targets& targets) {
        const int k = gate.qubits();
        if (static_cast<int>(std::size(targets)) != k)
            throw validation_error("gate dimension does not match target count");
        std::uint64_t seen = 0;
        for (int q : targets) {
            require_qubit(q);
            if (seen & (std::uint64_t(1) << q))
                throw validation_error("duplicate target qubit");
            seen |= std::uint64_t(1) << q;
        }
        std::uint64_t cmask = 0, cvalue = 0;
        for (std::size_t i = 0; i < controls.size(); ++i) {
            const int q = controls[i];
            require_qubit(q);
            const std::uint64_t bit = std::uint64_t(1) << q;
            if ((seen | cmask) & bit)
                throw validation_error("control qubit overlaps another control or target");
            cmask |= bit;
            if (pattern & (std::uint64_t(1) << i)) cvalue |= bit;
        }

        std::array<int, 64> sorted{};
        {
            int i = 0;
            for (int q : targets) sorted[i++] = q;
            std::sort(sorted.begin(), sorted.begin() + k);
        }

        const std::uint64_t dim = gate.dim;
        std::vector<cplx> in(dim), out(dim);
        double delta = 0.0;
        const std::uint64_t n = amps_.size();
        // iterate over base indices with all target bits 0
        for (std::uint64_t raw = 0; raw < (n >> k); ++raw) {
            // spread raw over the non-target bit positions (ascending insertion)
            std::uint64_t base = raw;
            for (int t = 0; t < k; ++t) {
                const std::uint64_t bit = std::uint64_t(1) << sorted[t];
                base = ((base & ~(bit - 1)) << 1) | (base & (bit - 1));
            }
            if ((base & cmask) != cvalue) continue;
            for (std::uint64_t sub = 0; sub < dim; ++sub) {
                std::uint64_t idx = base;
                for (int t = 0; t < k; ++t)
                    if (sub & (std::uint64_t(1) << t)) idx |= std::uint64_t(1) << targets[t];
                in[sub] = amps_[idx];
            }
            for (std::uint64_t r = 0; r < dim; ++r) {
                cplx acc = 0.0;
                const cplx* row = gate.m.data() + r * dim;
                for (std::uint64_t c = 0; c < dim; ++c) acc += row[c] * in[c];
                out[r] = acc;
                delta += std::norm(acc) - std::norm(in[r]);
            }
            for (std::uint64_t sub = 0; sub < dim; ++sub) {
                std::uint64_t idx = base;
                for (int t = 0; t < k; ++t)
                    if (sub & (std::uint64_t(1) << t)) idx |= std::uint64_t(1) << targets[t];
                amps_[idx] = out[sub];
            }
        }
        note_drift(delta);
    }

    // Apply a (possibly non-unitary) 2x2 operator and renormalize; used by
    // stochastic noise trajectories where Kraus branches shrink the norm.
    void apply_1q_nonunitary(const GateMatrix& op, int target) {
        if (op.dim != 2) throw validation_error("unexpected gate dimension");
        require_qubit(target);
        const cplx g00 = op(0, 0), g01 = op(0, 1), g10 = op(1, 0), g11 = op(1, 1);
        const std::uint64_t step = std::uint64_t(1) << target;
        for (std::uint64_t base = 0; base < amps_.size(); base += 2 * step) {
            for (std::uint64_t i0 = base; i0 < base + step; ++i0) {
                const std::uint64_t i1 = i0 | step;
                const cplx a0 = amps_[i0], a1 = amps_[i1];
                amps_[i0] = g00 * a0 + g01 * a1;
                amps_[i1] = g10 * a0 + g11 * a1;
            }
        }
        renormalize();
        --renorm_count_;  // expected renormalization, not drift repair
    }

    // --- measurement-style projections -------------------------------------

    // Probability that the given qubit reads 1.
    double excited_population(int qubit) const {
        require_qubit(qubit);
        const std::uint64_t bit = std::uint64_t(1) << qubit;
        double p = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            if (i & bit) p += std::norm(amps_[i]);
        return p;
    }

    // Collapse one qubit to the given outcome and renormalize.
    // Returns the pre-collapse probability of that outcome.
    double project_qubit(int qubit, int outcome) {
        require_qubit(qubit);
        const std::uint64_t bit = std::uint64_t(1) << qubit;
        double p = 0.0;
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            if (((i & bit) != 0) == (outcome != 0)) p += std::norm(amps_[i]);
        if (p <= 0.0) throw numerical_error("projection onto zero-probability outcome");
        const double scale = 1.0 / std::sqrt(p);
        for (std::uint64_t i = 0; i < amps_.size(); ++i) {
            if (((i & bit) != 0) == (outcome != 0))
                amps_[i] *= scale;
            else
                amps_[i] = 0.0;
        }
        norm_sq_ = 1.0;
        return p;
    }

    void renormalize() {
        const double n = norm();
        if (n <= 0.0) throw numerical_error("cannot normalize a zero state");
        for (cplx& a : amps_) a /= n;
        norm_sq_ = 1.0;
        ++renorm_count_;
    }

private:
    void require_qubit(int q) const {
        if (q < 0 || q >= n_qubits_)
            throw index_error("qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n_qubits_) + "-qubit state");
    }

    static void require_gate(const GateMatrix& gate, int dim) {
        if (gate.dim != dim) throw validation_error("unexpected gate dimension");
        if (!gate.is_unitary(1e-12)) throw validation_error("gate matrix is not unitary");
    }

    static std::uint64_t all_ones(std::size_t n) {
        return n >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
    }

    // Track norm^2 incrementally; renormalize only when drift exceeds the
    // threshold so silent gate bugs still surface as recorded drift.
    void note_drift(double delta) {
        norm_sq_ += delta;
        const double drift = std::abs(norm_sq_ - 1.0);
        max_drift_ = std::max(max_drift_, drift);
        if (drift > 1e-10) {
            norm_sq_ = 1.0;
            double n2 = 0.0;
            for (const cplx& a : amps_) n2 += std::norm(a);
            if (std::abs(n2 - 1.0) > 1e-10) {
                const double scale = 1.0 / std::sqrt(n2);
                for (cplx& a : amps_) a *= scale;
                ++renorm_count_;
            }
        }
    }

    int n_qubits_ = 0;
    std::vector<cplx> amps_;
    double classical_norm_ = 1.0;
    double norm_sq_ = 1.0;
    double max_drift_ = 0.0;
    int renorm_count_ = 0;
};

// |0...0> on n qubits, classical_norm 1.
inline Statevector new_zero_state(int n_qubits) { return Statevector(n_qubits); }

inline cplx inner_product(const Statevector& a, const Statevector& b) {
    if (a.n_qubits() != b.n_qubits())
        throw validation_error("inner product requires equal qubit counts");
    cplx acc = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

// |<a|b>| of unit states, clipped to [0, 1].
inline double fidelity(const Statevector& a, const Statevector& b) {
    return std::min(1.0, std::abs(inner_product(a, b)));
}

// free-function forms
inline void apply_1q(Statevector& state, const GateMatrix& gate, int target) {
    state.apply_1q(gate, target);
}

inline void apply_controlled(Statevector& state, const GateMatrix& gate,
                             std::span<const int> controls, int target) {
    state.apply_controlled(gate, controls, target);
}

}  // namespace qcfd
