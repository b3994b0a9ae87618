#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qcfd/evolution.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/hhl.hpp"

using namespace qcfd;

TEST(Evolution, ZeroTimeIsIdentity) {
    Eigen::MatrixXcd h(2, 2);
    h << 1.0, cplx(0.0, -0.5), cplx(0.0, 0.5), -2.0;
    const GateMatrix u = hamiltonian_evolution(h, 0.0);
    EXPECT_LT(std::abs(u(0, 0) - 1.0), 1e-12);
    EXPECT_LT(std::abs(u(1, 1) - 1.0), 1e-12);
    EXPECT_LT(std::abs(u(0, 1)), 1e-12);
}

TEST(Evolution, PauliZHalfPi) {
    // H = Z, t = pi/2: by hand, exp(-iZt) = diag(e^{-i pi/2}, e^{+i pi/2})
    Eigen::MatrixXcd z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    const GateMatrix u = hamiltonian_evolution(z, std::numbers::pi / 2.0);
    EXPECT_LT(std::abs(u(0, 0) - std::polar(1.0, -std::numbers::pi / 2.0)), 1e-12);
    EXPECT_LT(std::abs(u(1, 1) - std::polar(1.0, std::numbers::pi / 2.0)), 1e-12);
}

TEST(Evolution, UnitaryForRandomHermitian) {
    std::mt19937 eng(3);
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd a(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) a(r, c) = cplx(dist(eng), dist(eng));
    const Eigen::MatrixXcd h = a + a.adjoint();
    const GateMatrix u = hamiltonian_evolution(h, 0.77);
    EXPECT_LT(u.unitarity_defect(), 1e-10);

    Statevector psi = oracles::random_state(3, 8);
    std::array<int, 3> targets{0, 1, 2};
    psi.apply_controlled_pattern(u, {}, ~std::uint64_t(0), targets);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
}

TEST(Evolution, RejectsNonHermitian) {
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(hamiltonian_evolution(bad, 1.0), validation_error);
}

TEST(Hhl, IdentityMatrix) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd b(4);
    b << 0.5, -0.5, 0.5, 0.5;
    const HhlResult res = hhl_solve(id, b, HhlConfig{});
    // solution = b (up to sign convention), success within [C^2, 1]
    double overlap = 0.0;
    for (int i = 0; i < 4; ++i) overlap += (res.solution[i] * b(i)).real();
    EXPECT_GT(std::abs(overlap), 1.0 - 1e-9);
    EXPECT_GE(res.success_probability,
              res.rotation_constant * res.rotation_constant - 1e-12);
    EXPECT_LE(res.success_probability, 1.0 + 1e-12);
}

TEST(Hhl, DiagonalTwoByTwo) {
    // M = diag(1, 2), b = (1,1)/sqrt(2): solution ~ (0.894, 0.447)
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.0, 0.0, 2.0;
    Eigen::VectorXd b(2);
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const HhlResult res = hhl_solve(m, b, HhlConfig{});
    EXPECT_NEAR(std::abs(res.solution[0]), 2.0 / std::sqrt(5.0), 2e-2);
    EXPECT_NEAR(std::abs(res.solution[1]), 1.0 / std::sqrt(5.0), 2e-2);
    // same sign: direction matches (1, 0.5) normalized
    EXPECT_GT((res.solution[0] * res.solution[1]).real(), 0.0);
}

TEST(Hhl, RandomSpdFidelity) {
    // spot-check here; the acceptance suite runs the full 20-instance sweep
    for (unsigned seed = 0; seed < 3; ++seed) {
        for (int n : {4, 8}) {
            const Eigen::MatrixXd m = oracles::random_spd(n, 8.0, 100 + seed);
            Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
            std::mt19937 eng(seed * 7 + 1);
            std::normal_distribution<double> dist;
            for (int i = 0; i < n; ++i) b(i) = dist(eng);

            const HhlResult res = hhl_solve(m, b, HhlConfig{});
            Eigen::VectorXd exact = m.partialPivLu().solve(b);
            exact.normalize();
            cplx overlap = 0.0;
            for (int i = 0; i < n; ++i) overlap += exact(i) * res.solution[i];
            EXPECT_GT(std::abs(overlap), 0.99) << "seed " << seed << " n " << n;
        }
    }
}

TEST(Hhl, NonHermitianGoesThroughDilation) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.3, -0.2, 1.5;  // not symmetric
    Eigen::VectorXd b(2);
    b << 1.0, -0.5;
    const HhlResult res = hhl_solve(m, b, HhlConfig{});
    EXPECT_TRUE(res.dilated);
    EXPECT_TRUE(res.signed_spectrum);

    Eigen::VectorXd exact = m.partialPivLu().solve(b);
    exact.normalize();
    cplx overlap = 0.0;
    for (int i = 0; i < 2; ++i) overlap += exact(i) * res.solution[i];
    EXPECT_GT(std::abs(overlap), 0.99);
}

TEST(Hhl, ImplicitStepMatrixSolve) {
    // the Fig.-7-style implicit operator: dense-solve oracle fidelity
    FlowProblem problem;
    const StepOperator op = discretize(problem, Scheme::Implicit);
    const Eigen::VectorXd u0 = initial_field(problem);

    HhlConfig cfg;
    const HhlResult res = hhl_solve(op.matrix, u0, cfg);
    Eigen::VectorXd exact = op.matrix.partialPivLu().solve(u0);
    exact.normalize();
    cplx overlap = 0.0;
    for (int i = 0; i < op.n; ++i) overlap += exact(i) * res.solution[i];
    EXPECT_GT(std::abs(overlap), 0.99);
}

TEST(Hhl, SingularMatrixRejected) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 1.0;
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    EXPECT_THROW(hhl_solve(m, b, HhlConfig{}), numerical_error);
}

TEST(Hhl, NarrowClockRaisesWarningWithFidelity) {
    // two decades of spread on a 2-bit clock cannot resolve the spectrum
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.0, 0.0, 100.0;
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    HhlConfig cfg;
    cfg.clock_qubits = 2;
    const HhlResult res = hhl_solve(m, b, cfg);
    ASSERT_TRUE(res.warning.has_value());
    EXPECT_GT(res.warning->fidelity_vs_dense, 0.0);
    EXPECT_LE(res.warning->fidelity_vs_dense, 1.0 + 1e-12);
}

TEST(Hhl, ShotsEstimateSuccessProbability) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    HhlConfig cfg;
    cfg.shots = 20000;
    cfg.seed = 9;
    const HhlResult with_shots = hhl_solve(id, b, cfg);
    const HhlResult exact = hhl_solve(id, b, HhlConfig{});
    EXPECT_NEAR(with_shots.success_probability, exact.success_probability,
                4.0 / std::sqrt(20000.0));
}

TEST(Hhl, ValidatesInputs) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);  // not a power of two
    Eigen::VectorXd b3(3);
    b3 << 1, 1, 1;
    EXPECT_THROW(hhl_solve(id, b3, HhlConfig{}), validation_error);

    const Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    EXPECT_THROW(hhl_solve(ok, zero, HhlConfig{}), validation_error);

    Eigen::VectorXd b2(2);
    b2 << 1, 0;
    HhlConfig bad;
    bad.clock_qubits = 0;
    EXPECT_THROW(hhl_solve(ok, b2, bad), validation_error);
}
