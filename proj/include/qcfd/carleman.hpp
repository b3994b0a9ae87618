#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qcfd/error.hpp"

namespace qcfd {

// Carleman embedding of dx/dt = a x + b x^2 truncated at order K: the
// monomials y_i = x^i obey dy_i/dt = a i y_i + b i y_{i+1}, so the truncated
// generator has diagonal a*i and superdiagonal b*i. The pure quadratic case
// (a = 0, b = 1) gives the strictly upper-triangular, nilpotent matrix with
// superdiagonal 1, 2, 3, ...
struct CarlemanSystem {
    int order = 0;
    Eigen::MatrixXd generator;
    double x0 = 0.0;

    Eigen::VectorXd initial_monomials() const {
        Eigen::VectorXd y(order);
        double p = 1.0;
        for (int i = 0; i < order; ++i) {
            p *= x0;
            y(i) = p;
        }
        return y;
    }
};

inline CarlemanSystem carleman_build_general(int order, double x0, double linear,
                                             double quadratic) {
    if (order < 1) throw validation_error("truncation order must be at least 1");
    CarlemanSystem sys;
    sys.order = order;
    sys.x0 = x0;
    sys.generator = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i <= order; ++i) {
        if (linear != 0.0) sys.generator(i - 1, i - 1) = linear * i;
        if (i < order) sys.generator(i - 1, i) = quadratic * i;
    }
    return sys;
}

// dx/dt = x^2
inline CarlemanSystem carleman_build(int order, double x0 = 0.0) {
    return carleman_build_general(order, x0, 0.0, 1.0);
}

// x(t) = x0 / (1 - x0 t), singular at x0 t = 1 (finite-time blow-up).
inline double carleman_exact(double x0, double t) {
    const double denom = 1.0 - x0 * t;
    if (std::abs(denom) < 1e-12)
        throw numerical_error("finite-time blow-up: x0*t = 1 is the solution pole");
    return x0 / denom;
}

// Exact solution of the *truncated* linear system via the matrix exponential.
// For the nilpotent pure-quadratic generator the series terminates at
// degree K-1, so this is exact and serves as the integrator cross-check.
inline Eigen::VectorXd carleman_truncated_exact(const CarlemanSystem& sys, double t) {
    if (sys.generator.diagonal().cwiseAbs().maxCoeff() != 0.0)
        throw validation_error("terminating exponential needs the nilpotent generator");
    Eigen::MatrixXd expm = Eigen::MatrixXd::Identity(sys.order, sys.order);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(sys.order, sys.order);
    for (int p = 1; p < sys.order; ++p) {
        term = term * (sys.generator * (t / p));
        expm += term;
        if (term.cwiseAbs().maxCoeff() == 0.0) break;
    }
    return expm * sys.initial_monomials();
}

struct CarlemanTrajectory {
    std::vector<double> times;
    std::vector<double> values;  // y_1(t), the truncated approximation of x(t)
};

// Integrate dy/dt = M y with classic RK4 and return y_1 samples at every
// step. The integrator step must keep its error far below truncation error;
// dt = 1e-3 does (verified against carleman_truncated_exact in the tests).
inline CarlemanTrajectory carleman_march(const CarlemanSystem& sys, double t_max,
                                         double dt = 1e-3) {
    if (!(dt > 0.0)) throw validation_error("integrator step must be positive");
    if (!(t_max >= 0.0)) throw validation_error("t_max must be nonnegative");

    Eigen::VectorXd y = sys.initial_monomials();
    const Eigen::MatrixXd& m = sys.generator;
    CarlemanTrajectory out;
    const int steps = static_cast<int>(std::ceil(t_max / dt - 1e-12));
    out.times.reserve(steps + 1);
    out.values.reserve(steps + 1);
    out.times.push_back(0.0);
    out.values.push_back(sys.order >= 1 ? y(0) : 0.0);
    double t = 0.0;
    for (int s = 0; s < steps; ++s) {
        const double h = std::min(dt, t_max - t);
        const Eigen::VectorXd k1 = m * y;
        const Eigen::VectorXd k2 = m * (y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = m * (y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = m * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        out.times.push_back(t);
        out.values.push_back(y(0));
    }
    return out;
}

}  // namespace qcfd
