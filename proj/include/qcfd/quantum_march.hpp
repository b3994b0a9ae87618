#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "qcfd/encoding.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/hhl.hpp"
#include "qcfd/lcu.hpp"

namespace qcfd {

enum class MarchMethod { Hhl, Lcu };

struct QuantumMarchConfig {
    MarchMethod method = MarchMethod::Hhl;
    HhlConfig hhl;
    // Pick the HHL evolution time so the eigenvalue carrying most of the
    // current field lands exactly on the clock grid (classical spectral
    // preprocessing of the small step matrix). Without it, phase-rounding
    // bias compounds over the march.
    bool auto_align = true;
};

struct QuantumMarchResult {
    std::vector<Eigen::VectorXd> trajectory;     // steps+1 fields incl. u0
    std::vector<double> fidelities;              // per step, vs classical march
    std::vector<double> success_probabilities;   // per step
};

// Time marching through the quantum pipeline: encode the field, apply the
// step (HHL inversion for the implicit scheme, LCU application for the
// explicit one), read the statevector back exactly (noiseless), and restore
// the physical norm. Fidelities are recorded against classical_march.
inline QuantumMarchResult quantum_march(const StepOperator& op, const Eigen::VectorXd& u0,
                                        int steps, const QuantumMarchConfig& config) {
    if (u0.size() != op.n) throw validation_error("field size does not match the operator");
    if (steps < 0) throw validation_error("step count must be nonnegative");
    if (config.method == MarchMethod::Hhl && op.scheme != Scheme::Implicit)
        throw validation_error("HHL marching inverts the implicit step matrix");
    if (config.method == MarchMethod::Lcu && op.scheme != Scheme::Explicit)
        throw validation_error("LCU marching applies the explicit step matrix");

    const std::vector<Eigen::VectorXd> reference = classical_march(op, u0, steps);

    QuantumMarchResult result;
    result.trajectory.reserve(steps + 1);
    result.trajectory.push_back(u0);

    // spectral preprocessing for HHL alignment (dilated operator; the step
    // matrix is constant over the march)
    Eigen::MatrixXd dilated;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (config.method == MarchMethod::Hhl && config.auto_align) {
        const int n = op.n;
        dilated = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        dilated.topRightCorner(n, n) = op.matrix;
        dilated.bottomLeftCorner(n, n) = op.matrix.transpose();
        es.compute(dilated);
        if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    }

    Eigen::VectorXd u = u0;
    for (int step = 0; step < steps; ++step) {
        double success = 1.0;
        Eigen::VectorXd next;

        if (config.method == MarchMethod::Hhl) {
            HhlConfig hhl_cfg = config.hhl;
            if (config.auto_align) {
                const int n = op.n;
                Eigen::VectorXd padded = Eigen::VectorXd::Zero(2 * n);
                padded.head(n) = u / u.norm();
                const Eigen::VectorXd weights =
                    (es.eigenvectors().transpose() * padded).cwiseAbs2();
                int dominant = 0;
                weights.maxCoeff(&dominant);
                const double sigma_star = std::abs(es.eigenvalues()(dominant));
                const double sigma_max = es.eigenvalues().cwiseAbs().maxCoeff();
                const double sigma_min = es.eigenvalues().cwiseAbs().minCoeff();
                const std::uint64_t cells = std::uint64_t(1) << hhl_cfg.clock_qubits;
                const double grid = 1.0 / static_cast<double>(cells);
                const double s_max = (0.5 - 2.0 * grid) / sigma_max;
                const double k_star = std::floor(sigma_star * s_max * cells);
                if (k_star >= 1.0) {
                    const double s = k_star / (cells * sigma_star);
                    hhl_cfg.evolution_time = 2.0 * std::numbers::pi * s;
                    hhl_cfg.rotation_constant = std::max(0.95 * sigma_min * s, grid);
                }
            }
            HhlResult solve = hhl_solve(op.matrix, u, hhl_cfg);
            success = solve.success_probability;
            // ||M^{-1} u_hat|| = sqrt(p) * s / C, and u = ||u|| * u_hat
            const double magnitude =
                u.norm() * std::sqrt(success) * solve.eigenvalue_scale / solve.rotation_constant;
            next.resize(op.n);
            for (int i = 0; i < op.n; ++i) next(i) = solve.solution[i].real();
            next *= magnitude / next.norm();
        } else {
            const LcuDecomposition decomp = lcu_decomposition(op);
            std::vector<double> data(u.data(), u.data() + op.n);
            Statevector encoded = encode_state(data);
            LcuResult applied = lcu_apply(decomp, encoded);
            success = applied.success_probability;
            // ||M u|| = ||u|| * lambda * sqrt(p)
            const double magnitude = u.norm() * decomp.lambda() * std::sqrt(success);
            next.resize(op.n);
            for (int i = 0; i < op.n; ++i) next(i) = applied.state[i].real();
            next *= magnitude / next.norm();
        }

        // the readout direction carries an arbitrary overall sign; the field
        // evolves continuously, so align with the previous step
        if (next.dot(u) < 0.0) next = -next;

        const Eigen::VectorXd& ref = reference[step + 1];
        result.fidelities.push_back(std::abs(next.dot(ref)) / (next.norm() * ref.norm()));
        result.success_probabilities.push_back(success);
        result.trajectory.push_back(next);
        u = next;
    }
    return result;
}

}  // namespace qcfd
