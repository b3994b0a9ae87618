#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qcfd/gate.hpp"
#include "qcfd/qft.hpp"
#include "qcfd/qpe.hpp"

using namespace qcfd;

TEST(Qft, UniformFromZero) {
    const int n = 4;
    const Statevector s = execute(qft_circuit(n));
    const double want = std::pow(2.0, -n / 2.0);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        EXPECT_NEAR(s[i].real(), want, 1e-12);
        EXPECT_NEAR(s[i].imag(), 0.0, 1e-12);
    }
}

TEST(Qft, InverseUndoes) {
    const Statevector psi = oracles::random_state(5, 17);
    const Statevector round = execute(qft_circuit(5, true), execute(qft_circuit(5), psi));
    EXPECT_GT(fidelity(round, psi), 1.0 - 1e-10);
}

TEST(Qft, MatchesDftColumn) {
    // n=3, input |001> (index 1): amplitudes must equal DFT column 1
    const int n = 3;
    const Eigen::MatrixXcd f = oracles::dft_matrix(n);
    const Statevector out = execute(qft_circuit(n), Statevector(n, 1));
    for (Eigen::Index j = 0; j < f.rows(); ++j)
        EXPECT_LT(std::abs(out[j] - f(j, 1)), 1e-12) << "row " << j;
}

// property: full unitary action equals the dense DFT matrix on every basis
// state for n up to 10
TEST(Qft, DenseOracleEquivalence) {
    for (int n = 2; n <= 10; ++n) {
        const QuantumCircuit c = qft_circuit(n);
        const Eigen::MatrixXcd f = oracles::dft_matrix(n);
        const std::uint64_t dim = std::uint64_t(1) << n;
        double worst = 0.0;
        for (std::uint64_t col = 0; col < dim; ++col) {
            const Statevector out = execute(c, Statevector(n, col));
            for (std::uint64_t row = 0; row < dim; ++row)
                worst = std::max(worst, std::abs(out[row] - f(row, col)));
        }
        EXPECT_LT(worst, 1e-10) << "n=" << n;
    }
}

TEST(Qft, RangeValidation) {
    EXPECT_THROW(qft_circuit(0), validation_error);
    EXPECT_THROW(qft_circuit(26), validation_error);
}

TEST(Qpe, ZeroPhaseReadsZero) {
    QuantumCircuit u(1);
    u.rz(0, 0.0);
    const ShotHistogram hist = phase_estimation(u, 3, Statevector(1, 0), 2048, 5);
    EXPECT_EQ(hist.frequency(0), 1.0);
}

TEST(Qpe, ExactTwoBitPhase) {
    // U = phase(2 pi * 0.25) on eigenstate |1>: clock must read 01 = 0.25
    QuantumCircuit u(1);
    u.phase(0, 2.0 * std::numbers::pi * 0.25);
    const ShotHistogram hist = phase_estimation(u, 2, Statevector(1, 1), 2048, 5);
    EXPECT_EQ(hist.frequency(1), 1.0);
}

TEST(Qpe, InexactPhaseConcentratesOnNeighbors) {
    // eigenphase 0.3 with l=3: the two neighboring grid values 0.25 and
    // 0.375 must carry > 0.8 probability combined; cross-checked against the
    // closed-form QPE distribution
    const double phi = 0.3;
    const int l = 3;
    QuantumCircuit u(1);
    u.phase(0, 2.0 * std::numbers::pi * phi);
    const std::uint64_t shots = 200000;
    const ShotHistogram hist = phase_estimation(u, l, Statevector(1, 1), shots, 11);

    const std::vector<double> exact = oracles::qpe_distribution(phi, l);
    const double measured = hist.frequency(2) + hist.frequency(3);
    EXPECT_GT(measured, 0.8);
    EXPECT_NEAR(measured, exact[2] + exact[3], 0.01);
    // the full histogram tracks the closed form
    for (std::uint64_t k = 0; k < 8; ++k)
        EXPECT_NEAR(hist.frequency(k), exact[k], 0.01) << "k=" << k;
}

TEST(Qpe, RejectsBadArguments) {
    QuantumCircuit u(1);
    u.z(0);
    EXPECT_THROW(phase_estimation(u, 0, Statevector(1, 0)), validation_error);
    EXPECT_THROW(phase_estimation(u, 2, Statevector(2, 0)), validation_error);
}
