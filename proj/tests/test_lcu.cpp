#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/lcu.hpp"

using namespace qcfd;

namespace {

QuantumCircuit identity_circuit(int n) { return QuantumCircuit(n); }

QuantumCircuit z_circuit(int n, int q) {
    QuantumCircuit c(n);
    c.z(q);
    return c;
}

}  // namespace

TEST(Lcu, TwoIdentityTermsActAsIdentity) {
    LcuDecomposition d;
    d.terms.push_back({0.5, identity_circuit(1)});
    d.terms.push_back({0.5, identity_circuit(1)});
    const Statevector psi = oracles::random_state(1, 2);
    const LcuResult res = lcu_apply(d, psi);
    EXPECT_GT(fidelity(res.state, psi), 1.0 - 1e-12);
    EXPECT_NEAR(res.success_probability, 1.0, 1e-12);
}

TEST(Lcu, ProjectorOntoZero) {
    // (I + Z)/2 projects onto |0>: success 1 on |0>, 0 on |1>
    LcuDecomposition d;
    d.terms.push_back({0.5, identity_circuit(1)});
    d.terms.push_back({0.5, z_circuit(1, 0)});

    const LcuResult on_zero = lcu_apply(d, Statevector(1, 0));
    EXPECT_NEAR(on_zero.success_probability, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(on_zero.state[0]), 1.0, 1e-12);

    EXPECT_THROW(lcu_apply(d, Statevector(1, 1)), numerical_error);  // success 0
}

TEST(Lcu, ValidatesCoefficientsAndSizes) {
    LcuDecomposition d;
    d.terms.push_back({-0.5, identity_circuit(1)});
    EXPECT_THROW(lcu_apply(d, Statevector(1, 0)), validation_error);

    LcuDecomposition empty;
    EXPECT_THROW(lcu_apply(empty, Statevector(1, 0)), validation_error);
}

TEST(Lcu, StepOperatorMatchesDenseMatVec) {
    // post-selected LCU of the explicit step operator == dense matrix-vector
    // product, renormalized
    FlowProblem problem;
    const StepOperator op = discretize(problem, Scheme::Explicit);
    const LcuDecomposition d = lcu_decomposition(op);

    std::mt19937 eng(31);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> field(op.n);
        for (double& v : field) v = dist(eng);
        const Statevector psi = encode_state(field);
        const LcuResult res = lcu_apply(d, psi);

        Eigen::VectorXd want(op.n);
        for (int i = 0; i < op.n; ++i) want(i) = psi[i].real();
        want = op.matrix * want;
        const double lambda = d.lambda();
        EXPECT_NEAR(res.success_probability, want.squaredNorm() / (lambda * lambda), 1e-10);
        want.normalize();
        for (int i = 0; i < op.n; ++i) {
            EXPECT_NEAR(res.state[i].real(), want(i), 1e-10) << "trial " << trial;
            EXPECT_NEAR(res.state[i].imag(), 0.0, 1e-10);
        }
    }
}

TEST(Lcu, ImplicitDecompositionCarriesSigns) {
    // the implicit matrix has negative off-diagonal coefficients; the
    // gphase-folded terms must still reproduce M exactly
    FlowProblem problem;
    const StepOperator op = discretize(problem, Scheme::Implicit);
    const LcuDecomposition d = lcu_decomposition(op);
    for (const LcuTerm& t : d.terms) EXPECT_GT(t.alpha, 0.0);

    const Statevector psi = oracles::random_state(4, 44);
    const LcuResult res = lcu_apply(d, psi);
    Eigen::VectorXcd in(op.n);
    for (int i = 0; i < op.n; ++i) in(i) = psi[i];
    Eigen::VectorXcd want = op.matrix * in;
    want.normalize();
    // compare up to global phase
    cplx overlap = 0.0;
    for (int i = 0; i < op.n; ++i) overlap += std::conj(want(i)) * res.state[i];
    EXPECT_GT(std::abs(overlap), 1.0 - 1e-10);
}

// property: success probabilities stay in [0,1] and match ||M psi||^2/lambda^2
// for random few-term decompositions
TEST(Lcu, SuccessProbabilityFormula) {
    std::mt19937 eng(8);
    std::uniform_real_distribution<double> coeff(0.1, 1.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2;
        const int m = 1 + static_cast<int>(eng() % 8);
        LcuDecomposition d;
        Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(4, 4);
        for (int i = 0; i < m; ++i) {
            QuantumCircuit u(n);
            u.ry(0, angle(eng)).cx(0, 1).rz(1, angle(eng));
            const double a = coeff(eng);
            dense += a * oracles::dense_circuit_unitary(u);
            d.terms.push_back({a, std::move(u)});
        }
        const Statevector psi = oracles::random_state(n, 200 + trial);
        Eigen::VectorXcd in = oracles::to_eigen(psi);
        const double lambda = d.lambda();
        const double want_p = (dense * in).squaredNorm() / (lambda * lambda);
        if (want_p < 1e-8) continue;

        const LcuResult res = lcu_apply(d, psi);
        EXPECT_GE(res.success_probability, -1e-12);
        EXPECT_LE(res.success_probability, 1.0 + 1e-12);
        EXPECT_NEAR(res.success_probability, want_p, 1e-10) << "trial " << trial;

        Eigen::VectorXcd want = dense * in;
        want.normalize();
        cplx overlap = 0.0;
        for (int i = 0; i < 4; ++i) overlap += std::conj(want(i)) * res.state[i];
        EXPECT_GT(std::abs(overlap), 1.0 - 1e-10);
    }
}
