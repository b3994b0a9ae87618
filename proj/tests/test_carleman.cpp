#include <gtest/gtest.h>

#include <algorithm>

#include "qcfd/carleman.hpp"

using namespace qcfd;

TEST(CarlemanBuild, OrderOneIsZeroGenerator) {
    const CarlemanSystem sys = carleman_build(1, 0.3);
    ASSERT_EQ(sys.generator.rows(), 1);
    EXPECT_EQ(sys.generator(0, 0), 0.0);
}

TEST(CarlemanBuild, SuperdiagonalCountsUp) {
    const CarlemanSystem sys = carleman_build(4, 0.5);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(sys.generator(i, i + 1), i + 1);
    EXPECT_EQ(sys.generator.diagonal().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(sys.generator(3, 2), 0.0);
}

TEST(CarlemanBuild, NilpotencyAtOrderK) {
    const CarlemanSystem sys = carleman_build(5, 0.5);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(5, 5);
    for (int i = 0; i < 5; ++i) p = p * sys.generator;
    EXPECT_EQ(p.cwiseAbs().maxCoeff(), 0.0);
}

TEST(CarlemanBuild, GeneralizedLinearQuadratic) {
    // dx/dt = a x + b x^2: diagonal a*i, superdiagonal b*i
    const CarlemanSystem sys = carleman_build_general(3, 0.1, -2.0, 0.5);
    EXPECT_DOUBLE_EQ(sys.generator(0, 0), -2.0);
    EXPECT_DOUBLE_EQ(sys.generator(1, 1), -4.0);
    EXPECT_DOUBLE_EQ(sys.generator(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(sys.generator(1, 2), 1.0);
    EXPECT_THROW(carleman_build(0), validation_error);
}

TEST(CarlemanExact, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(carleman_exact(0.0, 5.0), 0.0);
    EXPECT_DOUBLE_EQ(carleman_exact(0.5, 1.0), 1.0);
    EXPECT_THROW(carleman_exact(1.0, 1.0), numerical_error);
}

TEST(CarlemanMarch, OrderOneStaysConstant) {
    const CarlemanTrajectory traj = carleman_march(carleman_build(1, 0.7), 1.0);
    for (double v : traj.values) EXPECT_DOUBLE_EQ(v, 0.7);
}

TEST(CarlemanMarch, MatchesExactAtHalfPoint) {
    // x0 = 0.5: exact x(1) = 1; high truncation order tracks it closely
    const CarlemanTrajectory traj = carleman_march(carleman_build(24, 0.5), 1.0);
    EXPECT_NEAR(traj.values.back(), 1.0, 2e-4);
}

TEST(CarlemanMarch, TruncationImprovesWithOrder) {
    // L-inf error on t in [0, 0.5] at x0=0.8: order 6 at least 10x below order 2
    auto linf_error = [](int order) {
        const CarlemanTrajectory traj = carleman_march(carleman_build(order, 0.8), 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            worst = std::max(worst, std::abs(traj.values[i] - carleman_exact(0.8, traj.times[i])));
        return worst;
    };
    const double e2 = linf_error(2);
    const double e6 = linf_error(6);
    EXPECT_GT(e2, 10.0 * e6);
}

TEST(CarlemanMarch, IntegratorSitsFarBelowTruncationError) {
    // RK4-vs-exact-truncated gap must be >= 100x smaller than the truncation
    // error so order sweeps reflect truncation only
    const CarlemanSystem sys = carleman_build(4, 0.8);
    const CarlemanTrajectory traj = carleman_march(sys, 0.5);
    double integrator_err = 0.0, truncation_err = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double poly = carleman_truncated_exact(sys, traj.times[i])(0);
        integrator_err = std::max(integrator_err, std::abs(traj.values[i] - poly));
        truncation_err =
            std::max(truncation_err, std::abs(poly - carleman_exact(0.8, traj.times[i])));
    }
    EXPECT_GT(truncation_err, 100.0 * integrator_err);
}

TEST(CarlemanMarch, Validation) {
    EXPECT_THROW(carleman_march(carleman_build(3, 0.5), 1.0, 0.0), validation_error);
    EXPECT_THROW(carleman_march(carleman_build(3, 0.5), -1.0), validation_error);
}

// property: the truncated solution is the K-term geometric series of the
// closed form, so agreement holds to 1e-3 until the stated departure window
TEST(CarlemanMarch, AccuracyWindowGrowsWithOrder) {
    const double x0 = 0.8;
    auto departure_time = [&](int order) {
        const CarlemanTrajectory traj = carleman_march(carleman_build(order, x0), 0.6);
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            if (std::abs(traj.values[i] - carleman_exact(x0, traj.times[i])) > 1e-3)
                return traj.times[i];
        return traj.times.back();
    };
    double previous = 0.0;
    for (int order = 2; order <= 6; ++order) {
        const double t = departure_time(order);
        EXPECT_GE(t, previous) << "order " << order;
        previous = t;
    }
    // the tail is x0 (x0 t)^K / (1 - x0 t), so the 1e-3 window reaches
    // t = 0.3/x0 from K = 6 on
    EXPECT_GE(departure_time(6), 0.3 / x0);
}
