// qcfd experiment runner: reproducible quantum-CFD experiments emitting CSV
// and JSON artifacts plus a rerunnable manifest. See docs/FORMATS.md for the
// file formats and README.md for usage.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcfd/qcfd.hpp"
#include "sha256.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCapacity = 4;

// ---------------------------------------------------------------------------
// run context: resolved configuration, output collection, manifest
// ---------------------------------------------------------------------------

struct RunContext {
    std::string experiment;
    fs::path out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    json config;  // fully resolved parameter set, echoed into the manifest
    std::vector<std::pair<std::string, std::string>> outputs;  // name -> sha256

    // atomic write: temp file in the target directory, then rename
    void write_file(const std::string& name, const std::string& content) {
        fs::create_directories(out_dir);
        const fs::path final_path = out_dir / name;
        const fs::path tmp_path = out_dir / (name + ".tmp");
        {
            std::ofstream f(tmp_path, std::ios::binary | std::ios::trunc);
            if (!f) throw qcfd::validation_error("cannot write " + tmp_path.string());
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
        }
        fs::rename(tmp_path, final_path);
        outputs.emplace_back(name, qcfd_cli::sha256_hex(content));
    }

    void finish() {
        json manifest;
        manifest["experiment"] = experiment;
        manifest["version"] = QCFD_VERSION;
        const auto now = std::chrono::system_clock::now();
        manifest["created_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
        manifest["master_seed"] = seed;
        manifest["resolved_config"] = config;
        json files = json::array();
        for (const auto& [name, digest] : outputs)
            files.push_back({{"path", name}, {"sha256", digest}});
        manifest["outputs"] = files;

        fs::create_directories(out_dir);
        const fs::path tmp_path = out_dir / "manifest.json.tmp";
        std::ofstream f(tmp_path, std::ios::binary | std::ios::trunc);
        f << manifest.dump(2) << "\n";
        f.close();
        fs::rename(tmp_path, out_dir / "manifest.json");
        std::cout << "wrote " << (out_dir / "manifest.json").string() << "\n";
    }
};

// parameters resolved from (defaults < config file < command-line flags)
class ParamSet {
public:
    ParamSet(const json& file_config, const std::set<std::string>& allowed,
             const std::string& experiment) {
        static const std::set<std::string> common = {"experiment", "seed", "output_dir"};
        for (const auto& [key, value] : file_config.items()) {
            if (!common.count(key) && !allowed.count(key))
                throw qcfd::validation_error("unknown config key '" + key + "' for experiment '" +
                                             experiment + "'");
        }
        config_ = file_config;
    }

    template <typename T>
    T get(const std::string& key, const CLI::Option* flag, const T& flag_value,
          const T& fallback) {
        T value = fallback;
        if (config_.contains(key)) value = config_.at(key).get<T>();
        if (flag && flag->count() > 0) value = flag_value;
        resolved_[key] = value;
        return value;
    }

    json resolved() const { return resolved_; }

private:
    json config_;
    json resolved_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw qcfd::validation_error("cannot read config file '" + path + "'");
    json j;
    f >> j;
    if (!j.is_object()) throw qcfd::validation_error("config root must be a JSON object");
    return j;
}

std::string format_sig(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// experiments
// ---------------------------------------------------------------------------

void run_bell(RunContext& ctx, std::uint64_t shots) {
    qcfd::Statevector state = qcfd::execute(qcfd::bell_circuit());
    qcfd::ShotHistogram hist = qcfd::sample_shots(state, shots, ctx.seed);
    ctx.write_file("bell_histogram.json", qcfd::histogram_to_json(hist).dump(2) + "\n");
    std::cout << "P(00)=" << hist.frequency(0) << " P(11)=" << hist.frequency(3) << "\n";
}

void run_qft(RunContext& ctx, int n, std::uint64_t input) {
    const qcfd::QuantumCircuit circuit = qcfd::qft_circuit(n);
    const qcfd::CircuitMetrics m = qcfd::metrics(circuit);

    json report;
    report["n"] = n;
    report["depth"] = m.depth;
    report["one_q_gates"] = m.one_q_gates;
    report["two_q_gates"] = m.two_q_gates;
    report["gate_count_formula"] = n * (n + 1) / 2 + n / 2;

    if (n <= 10) {
        // dense DFT oracle over every basis state
        double worst = 0.0;
        const std::uint64_t dim = std::uint64_t(1) << n;
        for (std::uint64_t j = 0; j < dim; ++j) {
            qcfd::Statevector out = qcfd::execute(circuit, qcfd::Statevector(n, j));
            for (std::uint64_t k = 0; k < dim; ++k) {
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(j * k % dim) /
                                     static_cast<double>(dim);
                const qcfd::cplx expect = std::polar(1.0 / std::sqrt(double(dim)), angle);
                worst = std::max(worst, std::abs(out[k] - expect));
            }
        }
        report["max_error_vs_dft"] = worst;
    }
    if (input >> n) throw qcfd::validation_error("input basis index needs more than n qubits");
    qcfd::Statevector out = qcfd::execute(circuit, qcfd::Statevector(n, input));
    json amps = json::array();
    for (std::uint64_t i = 0; i < out.dim(); ++i)
        amps.push_back({out[i].real(), out[i].imag()});
    report["input"] = input;
    report["output_amplitudes"] = amps;
    ctx.write_file("qft_report.json", report.dump(2) + "\n");
}

void run_carleman(RunContext& ctx, const std::vector<int>& orders, double x0, double tmax,
                  double dt) {
    if (orders.empty()) throw qcfd::validation_error("need at least one truncation order");
    if (x0 * tmax >= 1.0)
        throw qcfd::numerical_error("requested window reaches the solution pole x0*t = 1");

    std::vector<qcfd::CarlemanTrajectory> runs;
    for (int k : orders) runs.push_back(qcfd::carleman_march(qcfd::carleman_build(k, x0), tmax, dt));

    std::vector<std::string> header = {"t", "exact"};
    for (int k : orders) header.push_back("x_K" + std::to_string(k));
    for (int k : orders) header.push_back("err_K" + std::to_string(k));
    qcfd::CsvWriter csv(header);
    for (std::size_t i = 0; i < runs.front().times.size(); ++i) {
        const double t = runs.front().times[i];
        const double exact = qcfd::carleman_exact(x0, t);
        csv.cell(t).cell(exact);
        for (const auto& run : runs) csv.cell(run.values[i]);
        for (const auto& run : runs) csv.cell(std::abs(run.values[i] - exact));
        csv.end_row();
    }
    ctx.write_file("carleman.csv", csv.str());
}

void run_advect(RunContext& ctx, const std::string& method, const qcfd::FlowProblem& problem,
                const std::string& scheme_name, int steps, int clock_qubits, int layers,
                bool align) {
    const qcfd::Scheme scheme =
        scheme_name == "implicit" ? qcfd::Scheme::Implicit : qcfd::Scheme::Explicit;
    if (scheme_name != "implicit" && scheme_name != "explicit")
        throw qcfd::validation_error("scheme must be 'explicit' or 'implicit'");
    const qcfd::StepOperator op = qcfd::discretize(problem, scheme);
    const Eigen::VectorXd u0 = qcfd::initial_field(problem);

    std::vector<Eigen::VectorXd> trajectory;
    json extras;
    std::string fidelity_csv;

    if (method == "classical") {
        trajectory = qcfd::classical_march(op, u0, steps);
    } else if (method == "hhl" || method == "lcu") {
        qcfd::QuantumMarchConfig cfg;
        cfg.method = method == "hhl" ? qcfd::MarchMethod::Hhl : qcfd::MarchMethod::Lcu;
        cfg.hhl.clock_qubits = clock_qubits;
        cfg.auto_align = align;
        qcfd::QuantumMarchResult res = qcfd::quantum_march(op, u0, steps, cfg);
        trajectory = std::move(res.trajectory);
        qcfd::CsvWriter fid({"step", "fidelity", "success_probability"});
        for (std::size_t i = 0; i < res.fidelities.size(); ++i) {
            fid.cell(static_cast<int>(i + 1))
                .cell(res.fidelities[i])
                .cell(res.success_probabilities[i]);
            fid.end_row();
        }
        fidelity_csv = fid.str();
    } else if (method == "vqa") {
        qcfd::VqaMarchConfig cfg;
        cfg.seed = ctx.seed;
        const qcfd::Ansatz ansatz =
            qcfd::build_ansatz(static_cast<int>(std::log2(problem.n_points)), layers);
        qcfd::VqaMarchResult res = qcfd::vqa_march(problem, scheme, ansatz, cfg, steps);
        trajectory = std::move(res.trajectory);
        qcfd::CsvWriter fid({"step", "fidelity", "final_cost", "iterations", "converged"});
        for (std::size_t i = 0; i < res.fidelities.size(); ++i) {
            const auto& tr = res.traces[i];
            fid.cell(static_cast<int>(i + 1))
                .cell(res.fidelities[i])
                .cell(tr.costs.empty() ? 0.0 : tr.costs.back())
                .cell(tr.iterations)
                .cell(std::string(tr.converged ? "true" : "false"));
            fid.end_row();
        }
        fidelity_csv = fid.str();
        extras["total_iterations"] = res.total_iterations;
    } else {
        throw qcfd::validation_error("method must be one of classical|hhl|lcu|vqa");
    }

    std::vector<std::string> header = {"t"};
    for (int i = 0; i < problem.n_points; ++i) header.push_back("x_" + std::to_string(i));
    qcfd::CsvWriter csv(header);
    for (std::size_t s = 0; s < trajectory.size(); ++s) {
        csv.cell(static_cast<double>(s) * problem.dt);
        for (int i = 0; i < problem.n_points; ++i) csv.cell(trajectory[s](i));
        csv.end_row();
    }
    ctx.write_file("trajectory.csv", csv.str());
    if (!fidelity_csv.empty()) ctx.write_file("fidelity.csv", fidelity_csv);

    // closing diagnostics vs references
    const Eigen::VectorXd analytic = qcfd::analytic_field(problem, steps * problem.dt);
    const std::vector<Eigen::VectorXd> classical = qcfd::classical_march(op, u0, steps);
    json summary = extras;
    summary["rel_l2_vs_analytic"] =
        (trajectory.back() - analytic).norm() / analytic.norm();
    summary["rel_l2_vs_classical"] =
        (trajectory.back() - classical.back()).norm() / classical.back().norm();
    summary["diffusion_number"] = op.diffusion_number;
    summary["courant_number"] = op.courant_number;
    ctx.write_file("advect_summary.json", summary.dump(2) + "\n");
    std::cout << "rel L2 vs classical: " << summary["rel_l2_vs_classical"] << "\n";
}

void run_noise_sweep(RunContext& ctx, double t1, double t2, std::uint64_t trajectories,
                     const std::vector<double>& time_multiples) {
    qcfd::NoiseModel noise;
    noise.t1 = t1;
    noise.t2 = t2 > 0.0 ? t2 : 2.0 * t1;  // pure relaxation when unset
    noise.validate();

    qcfd::CsvWriter csv({"time_seconds", "excited_population", "predicted", "stderr"});
    for (double mult : time_multiples) {
        const double t = mult * t1;
        // prepare |1> with a zero-duration (noiseless) X, then idle in slices
        // so each trajectory draws several jump decisions
        qcfd::QuantumCircuit circuit(1);
        circuit.append({qcfd::OpKind::X, {0}, {}, ~std::uint64_t(0), {}, 0.0, nullptr});
        const int slices = 16;
        for (int i = 0; i < slices; ++i) circuit.idle(0, t / slices);

        std::uint64_t excited = 0;
        for (std::uint64_t s = 0; s < trajectories; ++s) {
            qcfd::Statevector out =
                qcfd::noisy_execute(circuit, noise, qcfd::derive_seed(ctx.seed, s));
            if (out.excited_population(0) > 0.5) ++excited;
        }
        const double p = static_cast<double>(excited) / static_cast<double>(trajectories);
        const double predicted = std::exp(-t / t1);
        const double se = std::sqrt(predicted * (1.0 - predicted) /
                                    static_cast<double>(trajectories));
        csv.cell(t).cell(p).cell(predicted).cell(se);
        csv.end_row();
        std::cout << "t=" << format_sig(t) << "s measured=" << p << " predicted=" << predicted
                  << "\n";
    }
    ctx.write_file("decay.csv", csv.str());
}

void run_mitigate(RunContext& ctx, std::uint64_t shots, int trials,
                  const std::vector<int>& scales) {
    const qcfd::NoiseModel noise = qcfd::NoiseModel::sherbrooke_2024();
    qcfd::QuantumCircuit bench(1);
    bench.rx(0, std::numbers::pi);
    const double ideal = 1.0;  // P(1) after a perfect pi rotation

    int wins = 0;
    qcfd::CsvWriter csv({"trial", "raw_scale1", "extrapolated", "abs_err_raw", "abs_err_mitigated",
                         "mitigated_closer"});
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<std::pair<double, double>> points;
        double raw = 0.0;
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const qcfd::QuantumCircuit folded = qcfd::noise_scaled_circuit(bench, scales[i]);
            const qcfd::ShotHistogram hist = qcfd::noisy_histogram(
                folded, noise, shots, qcfd::derive_seed(ctx.seed, 1000 * trial + i));
            const double p1 = hist.frequency(1);
            points.emplace_back(static_cast<double>(scales[i]), p1);
            if (scales[i] == 1) raw = p1;
        }
        const double mitigated = qcfd::richardson_extrapolate(points);
        const bool closer = std::abs(mitigated - ideal) < std::abs(raw - ideal);
        wins += closer ? 1 : 0;
        csv.cell(trial).cell(raw).cell(mitigated).cell(std::abs(raw - ideal))
            .cell(std::abs(mitigated - ideal)).cell(std::string(closer ? "true" : "false"));
        csv.end_row();
    }
    ctx.write_file("mitigation.csv", csv.str());
    json summary;
    summary["trials"] = trials;
    summary["wins"] = wins;
    summary["win_fraction"] = static_cast<double>(wins) / trials;
    ctx.write_file("mitigation_summary.json", summary.dump(2) + "\n");
    std::cout << "mitigated estimate closer to ideal in " << wins << "/" << trials << " trials\n";
}

void run_shots_scaling(RunContext& ctx, int n_qubits, const std::vector<std::uint64_t>& shot_counts,
                       int repeats) {
    // uniform superposition via Hadamards
    qcfd::QuantumCircuit circuit(n_qubits);
    for (int q = 0; q < n_qubits; ++q) circuit.h(q);
    const qcfd::Statevector state = qcfd::execute(circuit);
    const double ideal = 1.0 / static_cast<double>(state.dim());

    qcfd::CsvWriter csv({"shots", "mean_abs_error"});
    std::vector<double> log_n, log_e;
    for (std::size_t i = 0; i < shot_counts.size(); ++i) {
        double err_acc = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
            const qcfd::ShotHistogram hist = qcfd::sample_shots(
                state, shot_counts[i], qcfd::derive_seed(ctx.seed, 100 * i + rep));
            const qcfd::ProbabilityEstimate est = qcfd::estimate_probabilities(hist);
            double err = 0.0;
            for (double p : est.p) err += std::abs(p - ideal);
            err_acc += err / static_cast<double>(state.dim());
        }
        const double mean_err = err_acc / repeats;
        csv.cell(shot_counts[i]).cell(mean_err);
        csv.end_row();
        log_n.push_back(std::log10(static_cast<double>(shot_counts[i])));
        log_e.push_back(std::log10(mean_err));
    }
    ctx.write_file("shots_scaling.csv", csv.str());

    // least-squares slope in log-log space
    const double n = static_cast<double>(log_n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sx += log_n[i];
        sy += log_e[i];
        sxx += log_n[i] * log_n[i];
        sxy += log_n[i] * log_e[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    json summary;
    summary["fitted_slope"] = slope;
    summary["expected_slope"] = -0.5;
    ctx.write_file("shots_scaling_summary.json", summary.dump(2) + "\n");
    std::cout << "fitted log-log slope: " << slope << "\n";
}

// dispatch an experiment from a resolved-config JSON (used by `rerun`)
int dispatch_from_config(RunContext& ctx);

int run_rerun(const std::string& manifest_path, bool verify) {
    std::ifstream f(manifest_path);
    if (!f) throw qcfd::validation_error("cannot read manifest '" + manifest_path + "'");
    json manifest;
    f >> manifest;

    RunContext ctx;
    ctx.experiment = manifest.at("experiment").get<std::string>();
    ctx.seed = manifest.at("master_seed").get<std::uint64_t>();
    ctx.seed_set = true;
    ctx.config = manifest.at("resolved_config");
    ctx.out_dir = fs::path(manifest_path).parent_path() / "rerun";
    if (const char* env = std::getenv("QCFD_OUT_DIR")) ctx.out_dir = fs::path(env) / "rerun";

    const int rc = dispatch_from_config(ctx);
    if (rc != 0) return rc;

    if (verify) {
        bool all_match = true;
        for (const auto& rec : manifest.at("outputs")) {
            const std::string name = rec.at("path").get<std::string>();
            const std::string want = rec.at("sha256").get<std::string>();
            std::ifstream in(ctx.out_dir / name, std::ios::binary);
            std::string content((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
            const std::string got = qcfd_cli::sha256_hex(content);
            const bool match = got == want;
            all_match = all_match && match;
            std::cout << name << ": " << (match ? "match" : "MISMATCH") << "\n";
        }
        if (!all_match) return kExitNumerical;
        std::cout << "all outputs byte-identical\n";
    }
    return 0;
}

int dispatch_from_config(RunContext& ctx) {
    const json& c = ctx.config;
    if (ctx.experiment == "bell") {
        run_bell(ctx, c.at("shots").get<std::uint64_t>());
    } else if (ctx.experiment == "qft") {
        run_qft(ctx, c.at("n").get<int>(), c.at("input").get<std::uint64_t>());
    } else if (ctx.experiment == "carleman") {
        run_carleman(ctx, c.at("orders").get<std::vector<int>>(), c.at("x0").get<double>(),
                     c.at("tmax").get<double>(), c.at("dt").get<double>());
    } else if (ctx.experiment == "advect") {
        qcfd::FlowProblem problem;
        problem.n_points = c.at("n").get<int>();
        problem.length = c.at("L").get<double>();
        problem.dt = c.at("dt").get<double>();
        problem.advection_velocity = c.at("U").get<double>();
        problem.diffusion = c.at("D").get<double>();
        const std::string ic = c.at("ic").get<std::string>();
        if (ic == "gaussian") {
            problem.ic.kind = qcfd::InitialCondition::Kind::Gaussian;
            problem.ic.center = problem.length / 4.0;
            problem.ic.width = 0.05 * problem.length;
        } else {
            problem.ic.kind = qcfd::InitialCondition::Kind::SineMode;
            problem.ic.mode = c.at("mode").get<int>();
        }
        run_advect(ctx, c.at("method").get<std::string>(), problem,
                   c.at("scheme").get<std::string>(), c.at("steps").get<int>(),
                   c.at("clock_qubits").get<int>(), c.at("layers").get<int>(),
                   c.at("align").get<bool>());
    } else if (ctx.experiment == "noise-sweep") {
        run_noise_sweep(ctx, c.at("t1").get<double>(), c.at("t2").get<double>(),
                        c.at("trajectories").get<std::uint64_t>(),
                        c.at("times").get<std::vector<double>>());
    } else if (ctx.experiment == "mitigate") {
        run_mitigate(ctx, c.at("shots").get<std::uint64_t>(), c.at("trials").get<int>(),
                     c.at("scales").get<std::vector<int>>());
    } else if (ctx.experiment == "shots-scaling") {
        run_shots_scaling(ctx, c.at("n").get<int>(),
                          c.at("shots_list").get<std::vector<std::uint64_t>>(),
                          c.at("repeats").get<int>());
    } else {
        throw qcfd::validation_error("unknown experiment '" + ctx.experiment + "'");
    }
    ctx.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcfd: quantum-CFD experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = std::getenv("QCFD_OUT_DIR") ? std::getenv("QCFD_OUT_DIR") : ".";
    std::uint64_t seed = 0;
    bool entropy = false;
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    auto* out_opt = app.add_option("--out-dir", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "master seed for stochastic runs");
    app.add_flag("--entropy", entropy, "draw the master seed from the OS entropy source");

    // --- subcommand declarations -------------------------------------------
    auto* bell = app.add_subcommand("bell", "Bell-state preparation and measurement histogram");
    std::uint64_t bell_shots = 10000;
    auto* bell_shots_opt = bell->add_option("--shots", bell_shots, "measurement shots");

    auto* qft = app.add_subcommand("qft", "QFT circuit metrics and DFT-oracle check");
    int qft_n = 5;
    std::uint64_t qft_input = 0;
    auto* qft_n_opt = qft->add_option("--n", qft_n, "register width");
    auto* qft_input_opt = qft->add_option("--input", qft_input, "basis-state input index");

    auto* carleman = app.add_subcommand("carleman", "Carleman truncation error study");
    std::vector<int> orders = {2, 3, 4, 5, 6};
    double x0 = 0.8, tmax = 1.0, carleman_dt = 1e-3;
    auto* orders_opt = carleman->add_option("--orders", orders, "truncation orders")
                           ->delimiter(',');
    auto* x0_opt = carleman->add_option("--x0", x0, "initial value");
    auto* tmax_opt = carleman->add_option("--tmax", tmax, "time window");
    auto* cdt_opt = carleman->add_option("--dt", carleman_dt, "integrator step");

    auto* advect = app.add_subcommand("advect", "advection-diffusion marching");
    std::string method = "classical", scheme = "implicit", ic = "sine";
    int adv_n = 16, steps = 100, clock_qubits = 8, layers = 4, mode = 1;
    double adv_L = 1.0, adv_dt = 1e-4, adv_U = 10.0, adv_D = 1.0;
    bool align = true;
    auto* method_opt =
        advect->add_option("--method", method, "classical|hhl|lcu|vqa");
    auto* n_opt = advect->add_option("--n", adv_n, "grid points (power of two)");
    auto* L_opt = advect->add_option("--L", adv_L, "domain length, m");
    auto* dt_opt = advect->add_option("--dt", adv_dt, "time step, s");
    auto* U_opt = advect->add_option("--U", adv_U, "advection velocity, m/s");
    auto* D_opt = advect->add_option("--D", adv_D, "diffusion constant, m^2/s");
    auto* steps_opt = advect->add_option("--steps", steps, "number of time steps");
    auto* scheme_opt = advect->add_option("--scheme", scheme, "explicit|implicit");
    auto* clock_opt =
        advect->add_option("--clock-qubits", clock_qubits, "HHL eigenvalue register width");
    auto* layers_opt = advect->add_option("--layers", layers, "VQA ansatz layers");
    auto* ic_opt = advect->add_option("--ic", ic, "initial condition: sine|gaussian");
    auto* mode_opt = advect->add_option("--mode", mode, "sine mode number");
    auto* align_opt = advect->add_flag("--align,!--no-align", align,
                                       "align the dominant eigenvalue on the clock grid");

    auto* sweep = app.add_subcommand("noise-sweep", "idle-qubit relaxation vs the T1 law");
    double t1 = 275.72e-6, t2 = 0.0;
    std::uint64_t trajectories = 10000;
    std::vector<double> times = {0.5, 1.0, 2.0};
    auto* t1_opt = sweep->add_option("--t1", t1, "relaxation time, s");
    auto* t2_opt = sweep->add_option("--t2", t2, "dephasing time, s (default 2*T1)");
    auto* traj_opt = sweep->add_option("--trajectories", trajectories, "trajectories per point");
    auto* times_opt =
        sweep->add_option("--times", times, "idle durations in units of T1")->delimiter(',');

    auto* mitigate = app.add_subcommand("mitigate", "Richardson zero-noise extrapolation study");
    std::uint64_t mit_shots = 20000;
    int trials = 100;
    std::vector<int> scales = {1, 3};
    auto* mshots_opt = mitigate->add_option("--shots", mit_shots, "shots per noise scale");
    auto* trials_opt = mitigate->add_option("--trials", trials, "independent trials");
    auto* scales_opt =
        mitigate->add_option("--scales", scales, "odd noise scales")->delimiter(',');

    auto* scaling = app.add_subcommand("shots-scaling", "statistical error vs shot count");
    int scaling_n = 3, repeats = 5;
    std::vector<std::uint64_t> shots_list = {100, 1000, 10000, 100000, 1000000};
    auto* sn_opt = scaling->add_option("--n", scaling_n, "register width");
    auto* slist_opt =
        scaling->add_option("--shots-list", shots_list, "shot counts")->delimiter(',');
    auto* repeats_opt = scaling->add_option("--repeats", repeats, "repeats per count");

    auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
    std::string manifest_path;
    bool verify = true;
    rerun->add_option("manifest", manifest_path, "path to manifest.json")->required();
    rerun->add_flag("--verify,!--no-verify", verify, "compare output hashes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (rerun->parsed()) return run_rerun(manifest_path, verify);

        const json file_config = load_config(config_path);

        RunContext ctx;
        ctx.out_dir = out_dir;
        if (out_opt->count() == 0 && file_config.contains("output_dir"))
            ctx.out_dir = file_config.at("output_dir").get<std::string>();

        ctx.seed_set = seed_opt->count() > 0 || file_config.contains("seed");
        ctx.seed = seed;
        if (seed_opt->count() == 0 && file_config.contains("seed"))
            ctx.seed = file_config.at("seed").get<std::uint64_t>();
        if (entropy && !ctx.seed_set) {
            std::random_device rd;
            ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
            ctx.seed_set = true;
        }

        auto require_seed = [&]() {
            if (!ctx.seed_set)
                throw qcfd::validation_error(
                    "this experiment is stochastic: pass --seed <n> or --entropy");
        };

        if (bell->parsed()) {
            ctx.experiment = "bell";
            require_seed();
            ParamSet params(file_config, {"shots"}, ctx.experiment);
            const auto shots = params.get<std::uint64_t>("shots", bell_shots_opt, bell_shots,
                                                         10000);
            ctx.config = params.resolved();
            run_bell(ctx, shots);
        } else if (qft->parsed()) {
            ctx.experiment = "qft";
            ParamSet params(file_config, {"n", "input"}, ctx.experiment);
            const int n = params.get<int>("n", qft_n_opt, qft_n, 5);
            const auto input = params.get<std::uint64_t>("input", qft_input_opt, qft_input, 0);
            ctx.config = params.resolved();
            run_qft(ctx, n, input);
        } else if (carleman->parsed()) {
            ctx.experiment = "carleman";
            ParamSet params(file_config, {"orders", "x0", "tmax", "dt"}, ctx.experiment);
            const auto ords = params.get<std::vector<int>>("orders", orders_opt, orders,
                                                           {2, 3, 4, 5, 6});
            const double x = params.get<double>("x0", x0_opt, x0, 0.8);
            const double tm = params.get<double>("tmax", tmax_opt, tmax, 1.0);
            const double cdt = params.get<double>("dt", cdt_opt, carleman_dt, 1e-3);
            ctx.config = params.resolved();
            run_carleman(ctx, ords, x, tm, cdt);
        } else if (advect->parsed()) {
            ctx.experiment = "advect";
            ParamSet params(file_config,
                            {"method", "n", "L", "dt", "U", "D", "steps", "scheme",
                             "clock_qubits", "layers", "ic", "mode", "align"},
                            ctx.experiment);
            const std::string meth = params.get<std::string>("method", method_opt, method,
                                                             "classical");
            qcfd::FlowProblem problem;
            problem.n_points = params.get<int>("n", n_opt, adv_n, 16);
            problem.length = params.get<double>("L", L_opt, adv_L, 1.0);
            problem.dt = params.get<double>("dt", dt_opt, adv_dt, 1e-4);
            problem.advection_velocity = params.get<double>("U", U_opt, adv_U, 10.0);
            problem.diffusion = params.get<double>("D", D_opt, adv_D, 1.0);
            const std::string icname = params.get<std::string>("ic", ic_opt, ic, "sine");
            const int sine_mode = params.get<int>("mode", mode_opt, mode, 1);
            if (icname == "gaussian") {
                problem.ic.kind = qcfd::InitialCondition::Kind::Gaussian;
                problem.ic.center = problem.length / 4.0;
                problem.ic.width = 0.05 * problem.length;
            } else if (icname == "sine") {
                problem.ic.mode = sine_mode;
            } else {
                throw qcfd::validation_error("ic must be 'sine' or 'gaussian'");
            }
            const std::string sch = params.get<std::string>("scheme", scheme_opt, scheme,
                                                            "implicit");
            const int nsteps = params.get<int>("steps", steps_opt, steps, 100);
            const int clk = params.get<int>("clock_qubits", clock_opt, clock_qubits, 8);
            const int lay = params.get<int>("layers", layers_opt, layers, 4);
            const bool al = params.get<bool>("align", align_opt, align, true);
            if (meth == "vqa") require_seed();
            ctx.config = params.resolved();
            run_advect(ctx, meth, problem, sch, nsteps, clk, lay, al);
        } else if (sweep->parsed()) {
            ctx.experiment = "noise-sweep";
            require_seed();
            ParamSet params(file_config, {"t1", "t2", "trajectories", "times"}, ctx.experiment);
            const double pt1 = params.get<double>("t1", t1_opt, t1, 275.72e-6);
            const double pt2 = params.get<double>("t2", t2_opt, t2, 0.0);
            const auto traj =
                params.get<std::uint64_t>("trajectories", traj_opt, trajectories, 10000);
            const auto tms = params.get<std::vector<double>>("times", times_opt, times,
                                                             {0.5, 1.0, 2.0});
            ctx.config = params.resolved();
            run_noise_sweep(ctx, pt1, pt2, traj, tms);
        } else if (mitigate->parsed()) {
            ctx.experiment = "mitigate";
            require_seed();
            ParamSet params(file_config, {"shots", "trials", "scales"}, ctx.experiment);
            const auto sh = params.get<std::uint64_t>("shots", mshots_opt, mit_shots, 20000);
            const int tr = params.get<int>("trials", trials_opt, trials, 100);
            const auto sc = params.get<std::vector<int>>("scales", scales_opt, scales, {1, 3});
            ctx.config = params.resolved();
            run_mitigate(ctx, sh, tr, sc);
        } else if (scaling->parsed()) {
            ctx.experiment = "shots-scaling";
            require_seed();
            ParamSet params(file_config, {"n", "shots_list", "repeats"}, ctx.experiment);
            const int n = params.get<int>("n", sn_opt, scaling_n, 3);
            const auto list = params.get<std::vector<std::uint64_t>>(
                "shots_list", slist_opt, shots_list, {100, 1000, 10000, 100000, 1000000});
            const int rep = params.get<int>("repeats", repeats_opt, repeats, 5);
            ctx.config = params.resolved();
            run_shots_scaling(ctx, n, list, rep);
        }
        ctx.finish();
        std::cout << "resolved config: " << ctx.config.dump() << "\n";
        return 0;
    } catch (const qcfd::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const qcfd::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const qcfd::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
