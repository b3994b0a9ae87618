#pragma once

// Test-only brute-force oracles. These deliberately take the expensive dense
// route (full Kronecker products, dense DFT matrices, closed-form QPE
// amplitudes) so the stride-based implementation is checked against an
// independent computation path.

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/statevector.hpp"

namespace oracles {

using qcfd::cplx;

// Full 2^n x 2^n operator of a k-qubit gate with controls, built by summing
// basis-state images. Exponential in n; for oracle use only.
inline Eigen::MatrixXcd dense_operator(const qcfd::CircuitOp& op, int n_qubits) {
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    const qcfd::GateMatrix g = op.resolve();
    const int k = g.qubits();

    for (Eigen::Index col = 0; col < dim; ++col) {
        bool active = true;
        for (std::size_t ci = 0; ci < op.controls.size(); ++ci) {
            const bool want = (op.control_pattern >> ci) & 1;
            const bool have = (col >> op.controls[ci]) & 1;
            if (want != have) { active = false; break; }
        }
        if (!active) {
            full(col, col) = 1.0;
            continue;
        }
        std::uint64_t sub = 0;
        for (int t = 0; t < k; ++t)
            if (col & (Eigen::Index(1) << op.targets[t])) sub |= std::uint64_t(1) << t;
        for (std::uint64_t r = 0; r < std::uint64_t(g.dim); ++r) {
            Eigen::Index row = col;
            for (int t = 0; t < k; ++t) {
                const Eigen::Index bit = Eigen::Index(1) << op.targets[t];
                if (r & (std::uint64_t(1) << t))
                    row |= bit;
                else
                    row &= ~bit;
            }
            full(row, col) += g(static_cast<int>(r), static_cast<int>(sub));
        }
    }
    return full;
}

inline Eigen::MatrixXcd dense_circuit_unitary(const qcfd::QuantumCircuit& circuit) {
    const Eigen::Index dim = Eigen::Index(1) << circuit.n_qubits();
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(dim, dim);
    for (const qcfd::CircuitOp& op : circuit.ops()) {
        if (op.kind == qcfd::OpKind::Measure || op.kind == qcfd::OpKind::Idle) continue;
        full = dense_operator(op, circuit.n_qubits()) * full;
    }
    return full;
}

// DFT matrix with the library's convention: F[j,k] = w^{jk}/sqrt(N),
// w = exp(+2 pi i / N), qubit 0 the least significant index bit.
inline Eigen::MatrixXcd dft_matrix(int n_qubits) {
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Eigen::MatrixXcd f(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index k = 0; k < dim; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(double(dim)),
                                 2.0 * std::numbers::pi * double((j * k) % dim) / double(dim));
    return f;
}

inline Eigen::VectorXcd to_eigen(const qcfd::Statevector& s) {
    Eigen::VectorXcd v(s.dim());
    for (std::uint64_t i = 0; i < s.dim(); ++i) v(i) = s[i];
    return v;
}

// Closed-form QPE clock distribution for eigenphase phi with l bits:
// P(k) = |sin(pi(2^l phi - k))|^2 / (4^l |sin(pi(phi - k/2^l))|^2).
inline std::vector<double> qpe_distribution(double phi, int l) {
    const std::uint64_t cells = std::uint64_t(1) << l;
    std::vector<double> p(cells, 0.0);
    for (std::uint64_t k = 0; k < cells; ++k) {
        const double delta = phi - double(k) / double(cells);
        const double den = std::sin(std::numbers::pi * delta);
        if (std::abs(den) < 1e-14) {
            p[k] = 1.0;
            continue;
        }
        const double num = std::sin(std::numbers::pi * (double(cells) * phi - double(k)));
        p[k] = (num * num) / (double(cells) * double(cells) * den * den);
    }
    return p;
}

// random normalized complex state, deterministic per seed
inline qcfd::Statevector random_state(int n_qubits, unsigned seed) {
    std::mt19937 eng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<cplx> amps(std::uint64_t(1) << n_qubits);
    double norm2 = 0.0;
    for (cplx& a : amps) {
        a = cplx(dist(eng), dist(eng));
        norm2 += std::norm(a);
    }
    for (cplx& a : amps) a /= std::sqrt(norm2);
    return qcfd::Statevector::from_amplitudes(n_qubits, std::move(amps));
}

// random Hermitian positive-definite matrix with condition number <= kappa
inline Eigen::MatrixXd random_spd(int n, double kappa, unsigned seed) {
    std::mt19937 eng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = dist(eng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::MatrixXd q = qr.householderQ();
    std::uniform_real_distribution<double> ud(1.0, kappa);
    Eigen::VectorXd eigs(n);
    for (int i = 0; i < n; ++i) eigs(i) = ud(eng);
    eigs(0) = 1.0;
    eigs(n - 1) = kappa;
    return q * eigs.asDiagonal() * q.transpose();
}

}  // namespace oracles
