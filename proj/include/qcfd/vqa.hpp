#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/encoding.hpp"
#include "qcfd/flow.hpp"
#include "qcfd/lcu.hpp"
#include "qcfd/overlap.hpp"
#include "qcfd/rng.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

// Hardware-aware ansatz: a column of per-qubit Ry rotations, then `layers`
// repetitions of [linear-chain CNOTs + Ry column]. Parameters are ordered
// layer-major, qubit-minor: params[layer * n_qubits + qubit].
struct Ansatz {
    int n_qubits = 0;
    int layers = 0;

    int parameter_count() const { return n_qubits * (layers + 1); }
};

inline Ansatz build_ansatz(int n_qubits, int layers) {
    if (n_qubits < 1) throw validation_error("ansatz needs at least one qubit");
    if (layers < 0) throw validation_error("layer count must be nonnegative");
    return Ansatz{n_qubits, layers};
}

inline QuantumCircuit ansatz_circuit(const Ansatz& ansatz, std::span<const double> params) {
    if (static_cast<int>(params.size()) != ansatz.parameter_count())
        throw validation_error("expected " + std::to_string(ansatz.parameter_count()) +
                               " ansatz parameters, got " + std::to_string(params.size()));
    QuantumCircuit c(ansatz.n_qubits);
    int p = 0;
    for (int q = 0; q < ansatz.n_qubits; ++q) c.ry(q, params[p++]);
    for (int layer = 0; layer < ansatz.layers; ++layer) {
        for (int q = 0; q + 1 < ansatz.n_qubits; ++q) c.cx(q, q + 1);
        for (int q = 0; q < ansatz.n_qubits; ++q) c.ry(q, params[p++]);
    }
    return c;
}

// |psi(theta)> = ansatz circuit applied to |0...0>; Ry/CNOT only, so the
// amplitudes are real.
inline Statevector ansatz_state(const Ansatz& ansatz, std::span<const double> params) {
    return execute(ansatz_circuit(ansatz, params));
}

// --- cost -------------------------------------------------------------------

struct CostMode {
    enum class Kind { Exact, Shots };
    Kind kind = Kind::Exact;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 0;

    static CostMode exact() { return {}; }
    static CostMode with_shots(std::uint64_t shots, std::uint64_t seed) {
        return {Kind::Shots, shots, seed};
    }
};

namespace detail {

// Re<0| A† U E |0> via a Hadamard test on the composed circuit.
inline double overlap_term(const QuantumCircuit& a_dag, const QuantumCircuit& u,
                           const QuantumCircuit& e, std::uint64_t shots, std::uint64_t seed) {
    QuantumCircuit w = compose(a_dag, compose(u, e));
    const Statevector zero(w.n_qubits());
    return hadamard_test(w, zero, OverlapPart::Real, shots, seed);
}

}  // namespace detail

// Residual cost of one candidate time step. The parameter vector carries one
// extra trailing entry: the classical field-norm scale g, since the ansatz
// itself emits unit states.
//   explicit:  || g psi(theta) - M~ u_prev ||^2
//   implicit:  || M (g psi(theta)) - u_prev ||^2   (same minimizer as the
//              M^{-1} form, evaluable without inversion)
// Exact mode works on statevectors; shots mode estimates every inner product
// with Hadamard tests over the step operator's LCU terms, `shots` shots each.
inline double evaluate_cost(const Ansatz& ansatz, std::span<const double> params_with_scale,
                            const StepOperator& op, const Statevector& u_prev,
                            const CostMode& mode = CostMode::exact()) {
    if (static_cast<int>(params_with_scale.size()) != ansatz.parameter_count() + 1)
        throw validation_error("parameter vector must append the norm scale");
    if ((1 << ansatz.n_qubits) != op.n)
        throw validation_error("ansatz register does not cover the grid");
    if (u_prev.n_qubits() != ansatz.n_qubits)
        throw validation_error("previous field register size mismatch");
    const double scale = params_with_scale.back();
    const std::span<const double> params = params_with_scale.first(ansatz.parameter_count());
    const double prev_norm = u_prev.classical_norm();

    if (mode.kind == CostMode::Kind::Exact) {
        const Statevector psi = ansatz_state(ansatz, params);
        Eigen::VectorXd candidate(op.n), prev(op.n);
        for (int i = 0; i < op.n; ++i) {
            candidate(i) = scale * psi[i].real();
            prev(i) = prev_norm * u_prev[i].real();
        }
        const Eigen::VectorXd residual = op.scheme == Scheme::Explicit
                                             ? candidate - op.matrix * prev
                                             : (op.matrix * candidate - prev).eval();
        return residual.squaredNorm();
    }

    // shots mode: expand the quadratic form over the LCU terms of the matrix
    const LcuDecomposition decomp = lcu_decomposition(op);
    const std::size_t m = decomp.terms.size();
    const QuantumCircuit a = ansatz_circuit(ansatz, params);
    const QuantumCircuit a_dag = adjoint(a);
    std::vector<double> prev_data(op.n);
    for (int i = 0; i < op.n; ++i) prev_data[i] = u_prev[i].real();
    const QuantumCircuit e = amplitude_encode(prev_data).circuit;
    const QuantumCircuit e_dag = adjoint(e);

    std::uint64_t stream = 0;
    auto next_seed = [&]() { return derive_seed(mode.seed, stream++); };

    if (op.scheme == Scheme::Explicit) {
        // ||g psi||^2 + ||M u||^2 - 2 g <psi| M u>
        double cross = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            cross += decomp.terms[i].alpha *
                     detail::overlap_term(a_dag, decomp.terms[i].unitary, e, mode.shots,
                                          next_seed());
        double target_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                const QuantumCircuit uij =
                    compose(adjoint(decomp.terms[i].unitary), decomp.terms[j].unitary);
                const double re =
                    detail::overlap_term(e_dag, uij, e, mode.shots, next_seed());
                const double w = decomp.terms[i].alpha * decomp.terms[j].alpha * (i == j ? 1.0 : 2.0);
                target_sq += w * re;
            }
        }
        return scale * scale + prev_norm * prev_norm * target_sq -
               2.0 * scale * prev_norm * cross;
    }

    // implicit: ||M g psi||^2 - 2 g <u_prev| M |psi> + ||u_prev||^2
    double candidate_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const QuantumCircuit uij =
                compose(adjoint(decomp.terms[i].unitary), decomp.terms[j].unitary);
            const double re = detail::overlap_term(a_dag, uij, a, mode.shots, next_seed());
            const double w = decomp.terms[i].alpha * decomp.terms[j].alpha * (i == j ? 1.0 : 2.0);
            candidate_sq += w * re;
        }
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        cross += decomp.terms[i].alpha *
                 detail::overlap_term(e_dag, decomp.terms[i].unitary, a, mode.shots, next_seed());
    return scale * scale * candidate_sq - 2.0 * scale * prev_norm * cross +
           prev_norm * prev_norm;
}

// --- classical optimizers -----------------------------------------------------

struct OptimizerConfig {
    enum class Method { NelderMead, FiniteDifferenceGradient };
    Method method = Method::NelderMead;
    int max_iters = 2000;
    double cost_tolerance = 1e-10;      // absolute target; reaching it means converged
    double parameter_tolerance = 1e-10; // simplex spread / step-size floor
    double fd_step = 1e-4;              // radians, central-difference half-width
    std::uint64_t seed = 0;

    void validate() const {
        if (!(cost_tolerance > 0.0) || !(parameter_tolerance > 0.0) || !(fd_step > 0.0))
            throw validation_error("optimizer tolerances must be positive");
        if (max_iters < 0) throw validation_error("max_iters must be nonnegative");
    }
};

struct OptimizationTrace {
    std::vector<double> costs;  // best value after each iteration, verbatim
    std::vector<double> final_params;
    bool converged = false;
    int iterations = 0;
    std::string stop_reason;
};

using CostFunction = std::function<double(std::span<const double>)>;

namespace detail {

inline OptimizationTrace nelder_mead(const CostFunction& cost, std::span<const double> init,
                                     const OptimizerConfig& cfg) {
    const int d = static_cast<int>(init.size());
    // adaptive coefficients (better behaved in higher dimension)
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / d;
    const double gamma = 0.75 - 1.0 / (2.0 * d);
    const double delta = 1.0 - 1.0 / d;

    std::vector<std::vector<double>> xs(d + 1, std::vector<double>(init.begin(), init.end()));
    for (int i = 0; i < d; ++i)
        xs[i + 1][i] += std::abs(xs[i + 1][i]) > 1e-8 ? 0.05 * xs[i + 1][i] : 0.25;
    std::vector<double> fs(d + 1);
    for (int i = 0; i <= d; ++i) fs[i] = cost(xs[i]);

    OptimizationTrace trace;
    std::vector<int> order(d + 1);
    auto sort_simplex = [&]() {
        for (int i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    };
    sort_simplex();

    if (fs[order[0]] <= cfg.cost_tolerance) {
        trace.converged = true;
        trace.stop_reason = "cost tolerance met at the initial point";
        trace.final_params.assign(xs[order[0]].begin(), xs[order[0]].end());
        return trace;
    }

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        sort_simplex();
        const int best = order[0], worst = order[d], second = order[d - 1];

        // centroid of all but the worst vertex
        std::vector<double> centroid(d, 0.0);
        for (int i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (int j = 0; j < d; ++j) centroid[j] += xs[i][j];
        }
        for (double& v : centroid) v /= d;

        auto blend = [&](double coeff) {
            std::vector<double> x(d);
            for (int j = 0; j < d; ++j)
                x[j] = centroid[j] + coeff * (centroid[j] - xs[worst][j]);
            return x;
        };

        std::vector<double> reflected = blend(alpha);
        const double f_r = cost(reflected);
        if (f_r < fs[best]) {
            std::vector<double> expanded = blend(alpha * beta);
            const double f_e = cost(expanded);
            if (f_e < f_r) {
                xs[worst] = std::move(expanded);
                fs[worst] = f_e;
            } else {
                xs[worst] = std::move(reflected);
                fs[worst] = f_r;
            }
        } else if (f_r < fs[second]) {
            xs[worst] = std::move(reflected);
            fs[worst] = f_r;
        } else {
            const bool outside = f_r < fs[worst];
            std::vector<double> contracted = blend(outside ? alpha * gamma : -gamma);
            const double f_c = cost(contracted);
            if (f_c < std::min(f_r, fs[worst])) {
                xs[worst] = std::move(contracted);
                fs[worst] = f_c;
            } else {  // shrink toward the best vertex
                for (int i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (int j = 0; j < d; ++j)
                        xs[i][j] = xs[best][j] + delta * (xs[i][j] - xs[best][j]);
                    fs[i] = cost(xs[i]);
                }
            }
        }

        sort_simplex();
        trace.costs.push_back(fs[order[0]]);
        trace.iterations = iter + 1;

        if (fs[order[0]] <= cfg.cost_tolerance) {
            trace.converged = true;
            trace.stop_reason = "cost tolerance met";
            break;
        }
        double spread = 0.0;
        for (int i = 1; i <= d; ++i)
            for (int j = 0; j < d; ++j)
                spread = std::max(spread, std::abs(xs[order[i]][j] - xs[order[0]][j]));
        if (spread <= cfg.parameter_tolerance) {
            trace.stop_reason = "simplex collapsed below parameter tolerance";
            break;
        }
    }
    sort_simplex();
    trace.final_params.assign(xs[order[0]].begin(), xs[order[0]].end());
    if (trace.stop_reason.empty()) trace.stop_reason = "iteration budget exhausted";
    return trace;
}

inline OptimizationTrace fd_gradient_descent(const CostFunction& cost,
                                             std::span<const double> init,
                                             const OptimizerConfig& cfg) {
    const int d = static_cast<int>(init.size());
    std::vector<double> x(init.begin(), init.end());
    double f = cost(x);

    OptimizationTrace trace;
    if (f <= cfg.cost_tolerance) {
        trace.converged = true;
        trace.stop_reason = "cost tolerance met at the initial point";
        trace.final_params = std::move(x);
        return trace;
    }

    double step = 1.0;
    std::vector<double> grad(d), probe(d);
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        double gnorm2 = 0.0;
        for (int j = 0; j < d; ++j) {
            probe = x;
            probe[j] = x[j] + cfg.fd_step;
            const double fp = cost(probe);
            probe[j] = x[j] - cfg.fd_step;
            const double fm = cost(probe);
            grad[j] = (fp - fm) / (2.0 * cfg.fd_step);
            gnorm2 += grad[j] * grad[j];
        }
        // backtracking line search (Armijo)
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (int j = 0; j < d; ++j) probe[j] = x[j] - step * grad[j];
            const double f_new = cost(probe);
            if (f_new <= f - 1e-4 * step * gnorm2) {
                x = probe;
                f = f_new;
                moved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        trace.costs.push_back(f);
        trace.iterations = iter + 1;
        if (!std::isfinite(f)) {
            trace.final_params = std::move(x);
            trace.stop_reason = "non-finite cost encountered";
            throw numerical_error("optimizer hit a non-finite cost after " +
                                  std::to_string(trace.iterations) + " iterations");
        }
        if (f <= cfg.cost_tolerance) {
            trace.converged = true;
            trace.stop_reason = "cost tolerance met";
            break;
        }
        if (!moved || step * std::sqrt(gnorm2) <= cfg.parameter_tolerance) {
            trace.stop_reason = "step size below parameter tolerance";
            break;
        }
    }
    trace.final_params = std::move(x);
    if (trace.stop_reason.empty()) trace.stop_reason = "iteration budget exhausted";
    return trace;
}

}  // namespace detail

inline OptimizationTrace optimize(const CostFunction& cost, std::span<const double> init,
                                  const OptimizerConfig& config) {
    config.validate();
    if (init.empty()) throw validation_error("optimizer needs at least one parameter");
    {
        const double f0 = cost(init);
        if (!std::isfinite(f0)) throw numerical_error("initial cost is not finite");
    }
    return config.method == OptimizerConfig::Method::NelderMead
               ? detail::nelder_mead(cost, init, config)
               : detail::fd_gradient_descent(cost, init, config);
}

// --- time marching ------------------------------------------------------------

struct VqaMarchConfig {
    OptimizerConfig optimizer{OptimizerConfig::Method::NelderMead, 1500, 1e-12, 1e-12, 1e-4, 0};
    int cold_start_restarts = 5;  // random initializations for the first step
    int polish_rounds = 6;        // fresh-simplex reruns within one optimization
    bool warm_start = true;       // reuse the previous step's parameters
    std::uint64_t seed = 0;
};

struct VqaMarchResult {
    std::vector<Eigen::VectorXd> trajectory;
    std::vector<OptimizationTrace> traces;   // one per step (merged polish rounds)
    std::vector<double> fidelities;          // vs classical march
    int total_iterations = 0;
};

namespace detail {

// run NM rounds, restarting the simplex from the incumbent until the target
// is met; merges the per-round traces
inline OptimizationTrace polished_optimize(const CostFunction& cost, std::vector<double> start,
                                           const OptimizerConfig& cfg, int rounds) {
    OptimizationTrace merged;
    for (int round = 0; round < std::max(1, rounds); ++round) {
        OptimizationTrace t = optimize(cost, start, cfg);
        merged.costs.insert(merged.costs.end(), t.costs.begin(), t.costs.end());
        merged.iterations += t.iterations;
        merged.converged = t.converged;
        merged.stop_reason = t.stop_reason;
        merged.final_params = t.final_params;
        start = merged.final_params;
        if (t.converged) break;
    }
    return merged;
}

}  // namespace detail

// Variational time marching: one optimization per step, warm-started from
// the previous parameters. A step that misses the tolerance is recorded as
// non-converged but does not abort the march.
inline VqaMarchResult vqa_march(const FlowProblem& problem, Scheme scheme, const Ansatz& ansatz,
                                const VqaMarchConfig& config, int steps) {
    const StepOperator op = discretize(problem, scheme);
    if ((1 << ansatz.n_qubits) != op.n)
        throw validation_error("ansatz register does not cover the grid");

    const Eigen::VectorXd u0 = initial_field(problem);
    const std::vector<Eigen::VectorXd> reference = classical_march(op, u0, steps);

    VqaMarchResult result;
    result.trajectory.push_back(u0);

    const int p_count = ansatz.parameter_count();
    std::vector<double> params(p_count + 1, 0.0);
    Eigen::VectorXd u = u0;
    bool have_params = false;

    for (int step = 0; step < steps; ++step) {
        std::vector<double> prev_data(u.data(), u.data() + op.n);
        const Statevector prev_state = encode_state(prev_data);
        CostFunction cost = [&](std::span<const double> p) {
            return evaluate_cost(ansatz, p, op, prev_state);
        };

        OptimizationTrace best;
        if (have_params && config.warm_start) {
            best = detail::polished_optimize(cost, params, config.optimizer,
                                             config.polish_rounds);
        } else {
            // seeded random restarts; keep the best outcome
            auto final_cost = [&](const OptimizationTrace& t) {
                return t.costs.empty() ? cost(t.final_params) : t.costs.back();
            };
            bool first = true;
            for (int restart = 0; restart < std::max(1, config.cold_start_restarts); ++restart) {
                Rng rng(derive_seed(config.seed, 1000 * step + restart));
                std::vector<double> init(p_count + 1);
                for (int i = 0; i < p_count; ++i)
                    init[i] = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
                init[p_count] = u.norm();
                OptimizationTrace t =
                    detail::polished_optimize(cost, std::move(init), config.optimizer,
                                              config.polish_rounds);
                if (first || final_cost(t) < final_cost(best)) best = std::move(t);
                first = false;
                if (best.converged) break;
            }
        }

        params = best.final_params;
        have_params = true;
        result.total_iterations += best.iterations;

        const Statevector psi = ansatz_state(ansatz, std::span(params).first(p_count));
        Eigen::VectorXd next(op.n);
        for (int i = 0; i < op.n; ++i) next(i) = params[p_count] * psi[i].real();

        const Eigen::VectorXd& ref = reference[step + 1];
        result.fidelities.push_back(std::abs(next.dot(ref)) / (next.norm() * ref.norm()));
        result.traces.push_back(std::move(best));
        result.trajectory.push_back(next);
        u = next;
    }
    return result;
}

// Sample variance of dC/d(theta_0) for the benchmark cost C(theta) =
// <Z on qubit 0>, over uniformly random parameter draws. Shrinking variance
// with qubit count is the barren-plateau signature.
inline double gradient_variance(const Ansatz& ansatz, int samples, std::uint64_t seed) {
    if (samples < 2) throw validation_error("variance needs at least two samples");
    Rng rng(seed);
    const int p_count = ansatz.parameter_count();
    const double h = 1e-3;

    auto z0_expectation = [&](std::span<const double> params) {
        const Statevector psi = ansatz_state(ansatz, params);
        double z = 0.0;
        for (std::uint64_t i = 0; i < psi.dim(); ++i)
            z += psi.probability(i) * ((i & 1) ? -1.0 : 1.0);
        return z;
    };

    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> params(p_count);
    for (int s = 0; s < samples; ++s) {
        for (double& p : params) p = rng.uniform() * 2.0 * std::numbers::pi;
        const double saved = params[0];
        params[0] = saved + h;
        const double fp = z0_expectation(params);
        params[0] = saved - h;
        const double fm = z0_expectation(params);
        params[0] = saved;
        const double g = (fp - fm) / (2.0 * h);
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / samples;
    return std::max(0.0, sum_sq / samples - mean * mean);
}

}  // namespace qcfd
