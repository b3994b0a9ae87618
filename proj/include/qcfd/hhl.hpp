#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/encoding.hpp"
#include "qcfd/evolution.hpp"
#include "qcfd/qft.hpp"
#include "qcfd/rng.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

struct HhlConfig {
    int clock_qubits = 8;          // eigenvalue register width l
    double evolution_time = 0.0;   // t0 for e^{iHt0}; 0 = Gershgorin auto-scaling
    double rotation_constant = 0.0;  // C; 0 = auto from the Gershgorin lower bound
    // When nonzero, pick t0 so this |eigenvalue| lands exactly on the l-bit
    // grid (still respecting the spectral bound). Lets a caller that knows
    // the dominant eigencomponent of b avoid phase-rounding bias.
    double align_eigenvalue = 0.0;
    // When set, the success probability is estimated from this many
    // Bernoulli draws of the flag measurement instead of read exactly.
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;
};

struct HhlWarning {
    std::string message;
    double fidelity_vs_dense = 0.0;
};

struct HhlResult {
    std::vector<cplx> solution;     // unit-norm direction of M^{-1} b
    double success_probability = 0.0;  // P(ancilla flag and clock reset), for normalized b

    // diagnostics and norm bookkeeping
    double evolution_time = 0.0;
    double eigenvalue_scale = 0.0;   // s = t0 / (2 pi); ||M^{-1} b_hat|| = sqrt(p) * s / C
    double rotation_constant = 0.0;
    bool dilated = false;            // Hermitian dilation [[0,M],[M†,0]] used
    bool signed_spectrum = false;    // two's-complement clock decoding active
    int data_qubits = 0, total_qubits = 0;
    CircuitMetrics circuit_metrics;
    std::optional<HhlWarning> warning;
};

// Success convention: the conditional-rotation ancilla must read |1> and the
// clock register |0...0>. (Conventions differ across the literature; this
// library pins this one.)
namespace detail {

inline double decode_clock(std::uint64_t k, int l, bool signed_mode) {
    const double v = static_cast<double>(k) / static_cast<double>(std::uint64_t(1) << l);
    if (signed_mode && k >= (std::uint64_t(1) << (l - 1))) return v - 1.0;
    return v;
}

}  // namespace detail

// Quantum linear solver: prepares |b>, runs QPE with exp(+iHt0) as the
// controlled unitary, rotates the ancilla by the inverted eigenvalues,
// uncomputes the QPE, and post-selects. Non-Hermitian matrices go through
// the Hermitian dilation [[0, M], [M†, 0]] with b padded into the first
// half; the solution is read from the second half.
inline HhlResult hhl_solve(const Eigen::MatrixXcd& m, const Eigen::VectorXd& b,
                           const HhlConfig& config) {
    const int n = static_cast<int>(m.rows());
    if (n < 2 || m.cols() != n || (n & (n - 1)) != 0)
        throw validation_error("matrix must be square with power-of-two dimension >= 2");
    if (b.size() != n) throw validation_error("right-hand side length does not match matrix");
    if (!(b.norm() > 0.0)) throw validation_error("right-hand side must be nonzero");
    const int l = config.clock_qubits;
    if (l < 1) throw validation_error("at least one clock qubit is required");

    {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
        lu.setThreshold(1e-12);
        if (lu.rank() < n)
            throw numerical_error("matrix is singular (condition number effectively infinite)");
    }

    HhlResult result;
    result.dilated = !is_hermitian(m);

    Eigen::MatrixXcd h;
    Eigen::VectorXd rhs;
    if (result.dilated) {
        h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        h.topRightCorner(n, n) = m;
        h.bottomLeftCorner(n, n) = m.adjoint();
        rhs = Eigen::VectorXd::Zero(2 * n);
        rhs.head(n) = b;
    } else {
        h = m;
        rhs = b;
    }
    const int dim = static_cast<int>(h.rows());
    int n_d = 0;
    for (int d = dim; d > 1; d >>= 1) ++n_d;

    // Gershgorin discs of the Hermitian operator
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        double radius = 0.0;
        for (int j = 0; j < dim; ++j)
            if (j != i) radius += std::abs(h(i, j));
        lo = std::min(lo, h(i, i).real() - radius);
        hi = std::max(hi, h(i, i).real() + radius);
    }
    const double abs_max = std::max(std::abs(lo), std::abs(hi));
    if (!(abs_max > 0.0)) throw numerical_error("spectral bound of the operator is zero");
    result.signed_spectrum = lo <= 0.0;

    const std::uint64_t cells = std::uint64_t(1) << l;
    const double grid = 1.0 / static_cast<double>(cells);
    const double top = result.signed_spectrum ? 0.5 : 1.0;

    // eigenvalue scale s: scaled eigenvalues lambda*s must fit the clock range
    double s;
    if (config.evolution_time > 0.0) {
        s = config.evolution_time / (2.0 * std::numbers::pi);
    } else if (config.align_eigenvalue > 0.0) {
        const double s_max = (top - 2.0 * grid) / abs_max;
        const double k_star = std::floor(config.align_eigenvalue * s_max * cells);
        s = k_star >= 1.0 ? k_star / (cells * config.align_eigenvalue)
                          : (top - grid) / abs_max;
    } else {
        s = (top - grid) / abs_max;
    }
    const double t0 = 2.0 * std::numbers::pi * s;
    result.evolution_time = t0;
    result.eigenvalue_scale = s;

    double c_rot = config.rotation_constant;
    if (!(c_rot > 0.0)) c_rot = std::max(0.9 * lo * s, grid);
    result.rotation_constant = c_rot;

    // eigendecomposition once; exact controlled powers exp(+i H t0 2^j)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    const double min_abs_eig = es.eigenvalues().cwiseAbs().minCoeff();

    const int total = n_d + l + 1;
    const int ancilla = n_d + l;
    result.data_qubits = n_d;
    result.total_qubits = total;

    QuantumCircuit circuit(total);
    {
        std::vector<double> data(rhs.data(), rhs.data() + dim);
        EncodeResult enc = amplitude_encode(data);
        circuit.append_shifted(enc.circuit, 0);
    }

    QuantumCircuit qpe(total);
    for (int j = 0; j < l; ++j) qpe.h(n_d + j);
    for (int j = 0; j < l; ++j) {
        Eigen::VectorXcd phases(dim);
        for (int i = 0; i < dim; ++i)
            phases(i) = std::polar(1.0, es.eigenvalues()(i) * t0 * static_cast<double>(1 << j));
        const Eigen::MatrixXcd u =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        GateMatrix gm;
        gm.dim = dim;
        gm.m.resize(static_cast<std::size_t>(dim) * dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) gm(r, c) = u(r, c);
        std::vector<int> targets(n_d);
        for (int q = 0; q < n_d; ++q) targets[q] = q;
        QuantumCircuit one(total);
        one.unitary(targets, std::move(gm));
        qpe.append_shifted(one, 0, std::array{n_d + j});
    }
    qpe.append_shifted(qft_circuit(l, /*inverse=*/true), n_d);
    for (const CircuitOp& op : qpe.ops()) circuit.append(op);

    // conditional rotation: Ry(2 asin(C / lambda_k)) on the ancilla for every
    // clock value k; the inversion saturates where |lambda_k| < C
    std::vector<int> clock(l);
    for (int j = 0; j < l; ++j) clock[j] = n_d + j;
    for (std::uint64_t k = 1; k < cells; ++k) {
        const double lambda_k = detail::decode_clock(k, l, result.signed_spectrum);
        const double ratio = std::clamp(c_rot / lambda_k, -1.0, 1.0);
        CircuitOp op{OpKind::RY, {ancilla}, clock, k, {2.0 * std::asin(ratio)},
                     circuit.durations().two_qubit, nullptr};
        circuit.append(std::move(op));
    }

    {
        QuantumCircuit unqpe = adjoint(qpe);
        for (const CircuitOp& op : unqpe.ops()) circuit.append(op);
    }
    result.circuit_metrics = metrics(circuit);

    Statevector state = execute(circuit);

    // post-select ancilla=1, clock=0
    const std::uint64_t flag = std::uint64_t(1) << ancilla;
    std::vector<cplx> selected(static_cast<std::size_t>(dim), cplx(0.0, 0.0));
    double p = 0.0;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) {
        selected[i] = state[i | flag];
        p += std::norm(selected[i]);
    }
    if (p <= 0.0) throw numerical_error("post-selection has zero success probability");
    result.success_probability = p;
    if (config.shots) {
        if (*config.shots < 1) throw validation_error("shot count must be positive");
        Rng rng(config.seed);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < *config.shots; ++t)
            if (rng.bernoulli(p)) ++hits;
        result.success_probability =
            static_cast<double>(hits) / static_cast<double>(*config.shots);
    }

    // extract the solution direction (second half when dilated)
    std::vector<cplx> sol;
    if (result.dilated) {
        sol.assign(selected.begin() + n, selected.end());
    } else {
        sol = std::move(selected);
    }
    double norm2 = 0.0;
    for (const cplx& v : sol) norm2 += std::norm(v);
    if (norm2 <= 0.0) throw numerical_error("solution slice has zero weight");
    // fix the global phase: largest-magnitude entry becomes real positive
    std::size_t imax = 0;
    for (std::size_t i = 1; i < sol.size(); ++i)
        if (std::abs(sol[i]) > std::abs(sol[imax])) imax = i;
    const cplx rot = std::abs(sol[imax]) > 0.0 ? std::conj(sol[imax]) / std::abs(sol[imax])
                                               : cplx(1.0, 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& v : sol) v *= rot * inv;
    result.solution = std::move(sol);

    if (min_abs_eig * s < 2.0 * grid) {
        // spectrum not resolvable at this clock width; report the achieved
        // fidelity against a dense solve
        Eigen::VectorXcd dense = m.fullPivLu().solve(b.cast<cplx>());
        dense.normalize();
        cplx overlap = 0.0;
        for (int i = 0; i < n; ++i) overlap += std::conj(dense(i)) * result.solution[i];
        result.warning = HhlWarning{
            "clock register too narrow: smallest scaled eigenvalue " +
                std::to_string(min_abs_eig * s) + " is below two grid cells",
            std::abs(overlap)};
    }
    return result;
}

inline HhlResult hhl_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                           const HhlConfig& config) {
    return hhl_solve(Eigen::MatrixXcd(m.cast<cplx>()), b, config);
}

}  // namespace qcfd
