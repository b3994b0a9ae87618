#pragma once

#include <Eigen/Dense>

#include "qcfd/error.hpp"
#include "qcfd/gate.hpp"

namespace qcfd {

// Hermitian operator on a power-of-two dimensional space.
struct HermitianOperator {
    Eigen::MatrixXcd matrix;

    explicit HermitianOperator(Eigen::MatrixXcd m) : matrix(std::move(m)) {
        const auto n = matrix.rows();
        if (n < 1 || matrix.cols() != n || (n & (n - 1)) != 0)
            throw validation_error("operator must be square with power-of-two dimension");
        if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw validation_error("operator is not Hermitian");
    }

    int dim() const { return static_cast<int>(matrix.rows()); }
};

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// exp(-i H t) via exact eigendecomposition (hbar = 1).
inline GateMatrix hamiltonian_evolution(const HermitianOperator& h, double t) {
    const int n = h.dim();
    if (n > 4096) throw capacity_error("hamiltonian evolution supports dimensions up to 2^12");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
    if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    Eigen::VectorXcd phases(n);
    for (int i = 0; i < n; ++i)
        phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
    const Eigen::MatrixXcd u =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    GateMatrix g;
    g.dim = n;
    g.m.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = u(r, c);
    return g;
}

inline GateMatrix hamiltonian_evolution(const Eigen::MatrixXcd& h, double t) {
    return hamiltonian_evolution(HermitianOperator(h), t);
}

}  // namespace qcfd
