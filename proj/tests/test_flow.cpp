#include <gtest/gtest.h>

#include <numbers>

#include "qcfd/flow.hpp"

using namespace qcfd;

TEST(Discretize, NoDynamicsGivesIdentity) {
    FlowProblem problem;
    problem.advection_velocity = 0.0;
    problem.diffusion = 0.0;
    const StepOperator op = discretize(problem, Scheme::Explicit);
    EXPECT_LT((op.matrix - Eigen::MatrixXd::Identity(op.n, op.n)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Discretize, ReferenceParameters) {
    // N=16, L=1, dt=1e-4, U=10, D=1: diffusion number 0.0256, Courant 0.016
    FlowProblem problem;
    const StepOperator op = discretize(problem, Scheme::Explicit);
    EXPECT_NEAR(op.diffusion_number, 0.0256, 1e-15);
    EXPECT_NEAR(op.courant_number, 0.016, 1e-15);

    // stencil coefficients from the difference equations
    EXPECT_NEAR(op.matrix(0, 0), 1.0 - 2.0 * 0.0256, 1e-14);
    EXPECT_NEAR(op.matrix(0, 1), 0.0256 - 0.008, 1e-14);
    EXPECT_NEAR(op.matrix(0, 15), 0.0256 + 0.008, 1e-14);  // periodic wrap

    const StepOperator imp = discretize(problem, Scheme::Implicit);
    EXPECT_NEAR(imp.matrix(0, 0), 1.0 + 2.0 * 0.0256, 1e-14);
    EXPECT_NEAR(imp.matrix(0, 1), 0.008 - 0.0256, 1e-14);
    EXPECT_NEAR(imp.matrix(0, 15), -0.008 - 0.0256, 1e-14);
}

// property: explicit row sums telescope to exactly 1 for any (U, D)
TEST(Discretize, ExplicitRowSumsAreOne) {
    for (double u : {0.0, 3.7, -12.0}) {
        for (double d : {0.0, 0.4, 2.5}) {
            FlowProblem problem;
            problem.advection_velocity = u;
            problem.diffusion = d;
            const StepOperator op = discretize(problem, Scheme::Explicit);
            const Eigen::VectorXd sums = op.matrix.rowwise().sum();
            for (int i = 0; i < op.n; ++i) EXPECT_NEAR(sums(i), 1.0, 1e-14);
        }
    }
}

TEST(Discretize, Validation) {
    FlowProblem problem;
    problem.n_points = 2;
    EXPECT_THROW(discretize(problem, Scheme::Explicit), validation_error);
    problem.n_points = 12;  // not a power of two
    EXPECT_THROW(discretize(problem, Scheme::Explicit), validation_error);
}

TEST(Analytic, InitialConditionAtTimeZero) {
    FlowProblem problem;
    for (int i = 0; i < problem.n_points; ++i) {
        const double x = problem.dx() * i;
        EXPECT_NEAR(analytic_solution(problem, x, 0.0),
                    std::sin(2.0 * std::numbers::pi * x), 1e-12);
    }
}

TEST(Analytic, DiffusionEFoldingTime) {
    // U=0: after t = L^2/(4 pi^2 k^2 D) the amplitude is 1/e of the start
    FlowProblem problem;
    problem.advection_velocity = 0.0;
    const double k = problem.ic.mode;
    const double t = problem.length * problem.length /
                     (4.0 * std::numbers::pi * std::numbers::pi * k * k * problem.diffusion);
    const double x = 0.125;
    EXPECT_NEAR(analytic_solution(problem, x, t),
                std::exp(-1.0) * std::sin(2.0 * std::numbers::pi * x), 1e-12);
}

TEST(Analytic, PureAdvectionTranslates) {
    FlowProblem problem;
    problem.diffusion = 0.0;
    const double t = 0.013;
    const double shift = problem.advection_velocity * t;
    for (double x : {0.0, 0.3, 0.71}) {
        EXPECT_NEAR(analytic_solution(problem, x, t),
                    analytic_solution(problem, x - shift, 0.0), 1e-12);
    }
}

TEST(Analytic, GaussianSeriesIsPeriodicAndDecays) {
    FlowProblem problem;
    problem.ic.kind = InitialCondition::Kind::Gaussian;
    problem.ic.center = 0.25;
    problem.ic.width = 0.05;
    EXPECT_NEAR(analytic_solution(problem, 0.1, 0.0),
                analytic_solution(problem, 1.1, 0.0), 1e-9);
    // peak height decays with time
    EXPECT_LT(analytic_solution(problem, 0.25 + problem.advection_velocity * 0.001, 0.001),
              analytic_solution(problem, 0.25, 0.0));
}

TEST(ClassicalMarch, ZeroStepsReturnsInput) {
    FlowProblem problem;
    const StepOperator op = discretize(problem, Scheme::Explicit);
    const Eigen::VectorXd u0 = initial_field(problem);
    const auto traj = classical_march(op, u0, 0);
    ASSERT_EQ(traj.size(), 1u);
    EXPECT_LT((traj[0] - u0).norm(), 1e-15);
}

TEST(ClassicalMarch, ReferenceRunWithinTwoPercentOfAnalytic) {
    FlowProblem problem;
    for (Scheme scheme : {Scheme::Explicit, Scheme::Implicit}) {
        const StepOperator op = discretize(problem, scheme);
        const auto traj = classical_march(op, initial_field(problem), 100);
        const Eigen::VectorXd exact = analytic_field(problem, 100 * problem.dt);
        const double rel = (traj.back() - exact).norm() / exact.norm();
        EXPECT_LE(rel, 0.02) << (scheme == Scheme::Explicit ? "explicit" : "implicit");
    }
}

TEST(ClassicalMarch, ExplicitAndImplicitConvergeTogether) {
    // halving dt roughly halves the explicit/implicit gap (first-order time)
    const double t_final = 0.004;
    auto gap = [&](double dt) {
        FlowProblem problem;
        problem.dt = dt;
        const int steps = static_cast<int>(std::round(t_final / dt));
        const auto exp_traj =
            classical_march(discretize(problem, Scheme::Explicit), initial_field(problem), steps);
        const auto imp_traj =
            classical_march(discretize(problem, Scheme::Implicit), initial_field(problem), steps);
        return (exp_traj.back() - imp_traj.back()).norm() / imp_traj.back().norm();
    };
    const double g1 = gap(1e-4), g2 = gap(5e-5);
    EXPECT_GT(g1 / g2, 1.6);
    EXPECT_LT(g1 / g2, 2.6);
}

// property: periodic explicit stepping conserves the grid mean
TEST(ClassicalMarch, DiscreteMeanConservation) {
    FlowProblem problem;
    problem.ic.kind = InitialCondition::Kind::Gaussian;
    problem.ic.center = 0.25;
    problem.ic.width = 0.05;
    const StepOperator op = discretize(problem, Scheme::Explicit);
    const Eigen::VectorXd u0 = initial_field(problem);
    const double mean0 = u0.mean();
    const auto traj = classical_march(op, u0, 1000);
    EXPECT_NEAR(traj.back().mean(), mean0, 1e-12);
}

// property: halving dx cuts the spatial error about 4x (second-order stencil)
TEST(ClassicalMarch, SecondOrderSpatialConvergence) {
    auto error_at = [&](int n) {
        FlowProblem problem;
        problem.n_points = n;
        problem.dt = 1e-6;  // time error negligible
        const int steps = 400;
        const StepOperator op = discretize(problem, Scheme::Implicit);
        const auto traj = classical_march(op, initial_field(problem), steps);
        const Eigen::VectorXd exact = analytic_field(problem, steps * problem.dt);
        return (traj.back() - exact).norm() / exact.norm();
    };
    const double ratio = error_at(16) / error_at(32);
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
}
