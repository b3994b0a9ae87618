// Bell state, cyclic streaming shift, swap/Hadamard overlap tests.

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qcfd/bell.hpp"
#include "qcfd/overlap.hpp"
#include "qcfd/sampling.hpp"
#include "qcfd/shift.hpp"

using namespace qcfd;

TEST(Bell, AmplitudesAndHistogram) {
    const Statevector s = execute(bell_circuit());
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(s[0].real(), r, 1e-12);
    EXPECT_NEAR(s[3].real(), r, 1e-12);

    const ShotHistogram hist = sample_shots(s, 10000, 7);
    EXPECT_NEAR(hist.frequency(0), 0.5, 0.015);
    EXPECT_NEAR(hist.frequency(3), 0.5, 0.015);
    EXPECT_EQ(hist.frequency(1) + hist.frequency(2), 0.0);
}

TEST(Bell, SchmidtRankTwo) {
    // entangled: the 2x2 amplitude matrix has two nonzero singular values
    const Statevector s = execute(bell_circuit());
    Eigen::Matrix2cd m;
    m << s[0], s[2], s[1], s[3];
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
    EXPECT_GT(svd.singularValues()(0), 0.1);
    EXPECT_GT(svd.singularValues()(1), 0.1);
}

TEST(CyclicShift, IncrementAndWraparound) {
    const QuantumCircuit up = cyclic_shift_circuit(3, +1);
    Statevector s = execute(up, Statevector(3, 3));
    EXPECT_NEAR(std::abs(s[4]), 1.0, 1e-12);  // |011> -> |100>

    s = execute(up, Statevector(3, 7));
    EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-12);  // |111> -> |000>
}

TEST(CyclicShift, ShiftThenUnshiftIsIdentity) {
    const Statevector psi = oracles::random_state(4, 51);
    const Statevector round =
        execute(cyclic_shift_circuit(4, -1), execute(cyclic_shift_circuit(4, +1), psi));
    EXPECT_GT(fidelity(round, psi), 1.0 - 1e-12);
}

// property: the shift is exactly the cyclic permutation matrix
TEST(CyclicShift, PermutationOracle) {
    for (int n = 1; n <= 4; ++n) {
        const QuantumCircuit up = cyclic_shift_circuit(n, +1);
        const std::uint64_t dim = std::uint64_t(1) << n;
        for (std::uint64_t i = 0; i < dim; ++i) {
            const Statevector out = execute(up, Statevector(n, i));
            EXPECT_NEAR(std::abs(out[(i + 1) % dim]), 1.0, 1e-12) << "n=" << n << " i=" << i;
        }
    }
}

TEST(CyclicShift, FullCycleIsIdentity) {
    const int n = 3;
    Statevector s = oracles::random_state(n, 99);
    const Statevector start = s;
    const QuantumCircuit up = cyclic_shift_circuit(n, +1);
    for (int i = 0; i < (1 << n); ++i) s = execute(up, std::move(s));
    EXPECT_GT(fidelity(s, start), 1.0 - 1e-12);
}

TEST(SwapTest, EqualOrthogonalAndHalf) {
    const std::uint64_t shots = 40000;
    const Statevector psi = oracles::random_state(2, 5);
    EXPECT_NEAR(swap_test(psi, psi, shots, 3), 1.0, 3.0 / std::sqrt(double(shots)));

    const Statevector zero(1, 0), one(1, 1);
    EXPECT_NEAR(swap_test(zero, one, shots, 4), 0.0, 3.0 / std::sqrt(double(shots)));

    Statevector plus(1);
    plus.apply_1q(gate::h(), 0);
    EXPECT_NEAR(swap_test(zero, plus, shots, 5), 0.5, 3.0 / std::sqrt(double(shots)));
}

TEST(SwapTest, Validation) {
    EXPECT_THROW(swap_test(Statevector(1), Statevector(2), 100, 0), validation_error);
    EXPECT_THROW(swap_test(Statevector(1), Statevector(1), 0, 0), validation_error);
}

TEST(HadamardTest, IdentityAndZOnPlus) {
    const std::uint64_t shots = 40000;
    const double bound = 3.0 / std::sqrt(double(shots));

    QuantumCircuit id(1);
    Statevector plus(1);
    plus.apply_1q(gate::h(), 0);
    EXPECT_NEAR(hadamard_test(id, plus, OverlapPart::Real, shots, 7), 1.0, bound);

    QuantumCircuit z(1);
    z.z(0);
    EXPECT_NEAR(hadamard_test(z, plus, OverlapPart::Real, shots, 8), 0.0, bound);
}

TEST(HadamardTest, RotationExpectation) {
    // Re<+|Rz(pi/2)|+> = cos(pi/4)
    const std::uint64_t shots = 40000;
    QuantumCircuit rz(1);
    rz.rz(0, std::numbers::pi / 2.0);
    Statevector plus(1);
    plus.apply_1q(gate::h(), 0);
    EXPECT_NEAR(hadamard_test(rz, plus, OverlapPart::Real, shots, 9),
                std::cos(std::numbers::pi / 4.0), 3.0 / std::sqrt(double(shots)));
}

TEST(HadamardTest, ImaginaryPart) {
    // Im<+|Rz(theta)|+> = -sin(theta/2)
    const std::uint64_t shots = 60000;
    const double theta = 0.9;
    QuantumCircuit rz(1);
    rz.rz(0, theta);
    Statevector plus(1);
    plus.apply_1q(gate::h(), 0);
    EXPECT_NEAR(hadamard_test(rz, plus, OverlapPart::Imaginary, shots, 10),
                -std::sin(theta / 2.0), 3.0 / std::sqrt(double(shots)));
}

// property: Hadamard-test estimates agree with exact inner products on
// random circuits
TEST(HadamardTest, AgreesWithExactOverlap) {
    const std::uint64_t shots = 60000;
    for (unsigned trial = 0; trial < 3; ++trial) {
        QuantumCircuit u(2);
        u.ry(0, 0.3 + trial).cx(0, 1).rz(1, -0.7 * (trial + 1));
        const Statevector psi = oracles::random_state(2, 60 + trial);
        const cplx exact = inner_product(psi, execute(u, psi));
        EXPECT_NEAR(hadamard_test(u, psi, OverlapPart::Real, shots, 20 + trial), exact.real(),
                    4.0 / std::sqrt(double(shots)));
        EXPECT_NEAR(hadamard_test(u, psi, OverlapPart::Imaginary, shots, 30 + trial),
                    exact.imag(), 4.0 / std::sqrt(double(shots)));
    }
}
