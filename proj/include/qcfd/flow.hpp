#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "qcfd/error.hpp"

namespace qcfd {

// Named initial profiles on the periodic domain [0, L).
struct InitialCondition {
    enum class Kind { SineMode, Gaussian };
    Kind kind = Kind::SineMode;
    int mode = 1;           // sine: u0(x) = sin(2 pi mode x / L)
    double center = 0.25;   // gaussian center, meters
    double width = 0.05;    // gaussian standard deviation, meters
    int fourier_modes = 32; // truncation of the gaussian reference series
};

// 1D advection-diffusion problem on a periodic grid.
//   du/dt + U du/dx = D d2u/dx2
struct FlowProblem {
    int n_points = 16;          // grid points, power of two
    double length = 1.0;        // domain size L, m
    double dt = 1e-4;           // time step, s
    double advection_velocity = 10.0;  // U, m/s
    double diffusion = 1.0;            // D, m^2/s
    InitialCondition ic;

    double dx() const { return length / n_points; }

    void validate() const {
        if (n_points < 4) throw validation_error("grid needs at least 4 points");
        if ((n_points & (n_points - 1)) != 0)
            throw validation_error("grid size must be a power of two");
        if (!(dt > 0.0)) throw validation_error("time step must be positive");
        if (diffusion < 0.0) throw validation_error("diffusion constant must be nonnegative");
        if (!(length > 0.0)) throw validation_error("domain length must be positive");
    }
};

enum class Scheme { Explicit, Implicit };

// One time-step matrix of the central-difference discretization with
// periodic wrap. Explicit: u^{j+1} = matrix * u^j. Implicit: solve
// matrix * u^{j+1} = u^j.
struct StepOperator {
    Scheme scheme = Scheme::Explicit;
    Eigen::MatrixXd matrix;
    int n = 0;
    double dx = 0.0;
    double dt = 0.0;
    double diffusion_number = 0.0;  // D dt / dx^2
    double courant_number = 0.0;    // U dt / dx
};

inline StepOperator discretize(const FlowProblem& problem, Scheme scheme) {
    problem.validate();
    const int n = problem.n_points;
    const double dx = problem.dx();
    const double r = problem.diffusion * problem.dt / (dx * dx);
    const double c = problem.advection_velocity * problem.dt / dx;

    StepOperator op;
    op.scheme = scheme;
    op.n = n;
    op.dx = dx;
    op.dt = problem.dt;
    op.diffusion_number = r;
    op.courant_number = c;
    op.matrix = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int up = (i + 1) % n, down = (i + n - 1) % n;
        if (scheme == Scheme::Explicit) {
            op.matrix(i, i) = 1.0 - 2.0 * r;
            op.matrix(i, up) = r - c / 2.0;
            op.matrix(i, down) = r + c / 2.0;
        } else {
            op.matrix(i, i) = 1.0 + 2.0 * r;
            op.matrix(i, up) = c / 2.0 - r;
            op.matrix(i, down) = -c / 2.0 - r;
        }
    }
    return op;
}

// Closed-form periodic solution. Sine mode k: the mode decays at rate
// D (2 pi k / L)^2 while advecting with speed U. Gaussian: truncated
// Fourier series of the periodized profile, each mode decayed/advected
// likewise; the t = 0 field *is* that truncated series.
inline double analytic_solution(const FlowProblem& problem, double x, double t) {
    const double L = problem.length;
    const double U = problem.advection_velocity;
    const double D = problem.diffusion;
    using std::numbers::pi;
    if (problem.ic.kind == InitialCondition::Kind::SineMode) {
        const double k = problem.ic.mode;
        const double decay = std::exp(-D * (2.0 * pi * k / L) * (2.0 * pi * k / L) * t);
        return decay * std::sin(2.0 * pi * k * (x - U * t) / L);
    }
    const double w = problem.ic.width, c0 = problem.ic.center;
    double value = 0.0;
    for (int k = -problem.ic.fourier_modes; k <= problem.ic.fourier_modes; ++k) {
        const double wave = 2.0 * pi * k / L;
        // Fourier coefficient of the periodized gaussian
        const double coeff = (w * std::sqrt(2.0 * pi) / L) * std::exp(-wave * wave * w * w / 2.0);
        value += coeff * std::exp(-D * wave * wave * t) * std::cos(wave * (x - U * t - c0));
    }
    return value;
}

inline Eigen::VectorXd initial_field(const FlowProblem& problem) {
    Eigen::VectorXd u(problem.n_points);
    for (int i = 0; i < problem.n_points; ++i)
        u(i) = analytic_solution(problem, problem.dx() * i, 0.0);
    return u;
}

inline Eigen::VectorXd analytic_field(const FlowProblem& problem, double t) {
    Eigen::VectorXd u(problem.n_points);
    for (int i = 0; i < problem.n_points; ++i)
        u(i) = analytic_solution(problem, problem.dx() * i, t);
    return u;
}

// March `steps` steps, returning every intermediate field (steps+1 entries).
// Implicit steps reuse one LU factorization.
inline std::vector<Eigen::VectorXd> classical_march(const StepOperator& op,
                                                    const Eigen::VectorXd& u0, int steps) {
    if (u0.size() != op.n) throw validation_error("field size does not match the operator");
    if (!(u0.norm() > 0.0)) throw validation_error("initial field must be nonzero");
    if (steps < 0) throw validation_error("step count must be nonnegative");

    std::vector<Eigen::VectorXd> trajectory;
    trajectory.reserve(steps + 1);
    trajectory.push_back(u0);
    if (steps == 0) return trajectory;

    if (op.scheme == Scheme::Explicit) {
        for (int s = 0; s < steps; ++s) trajectory.push_back(op.matrix * trajectory.back());
    } else {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(op.matrix);
        if (std::abs(lu.determinant()) < 1e-300)
            throw numerical_error("implicit step matrix is singular");
        for (int s = 0; s < steps; ++s) trajectory.push_back(lu.solve(trajectory.back()));
    }
    return trajectory;
}

}  // namespace qcfd
