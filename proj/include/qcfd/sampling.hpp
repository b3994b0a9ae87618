#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "qcfd/error.hpp"
#include "qcfd/rng.hpp"
#include "qcfd/statevector.hpp"

namespace qcfd {

// Counts over measured basis states. Bitstring rendering elsewhere uses the
// register convention: leftmost character is the highest qubit, qubit 0 is
// the rightmost (least significant) bit.
struct ShotHistogram {
    int n_qubits = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total_shots = 0;

    void add(std::uint64_t basis_index, std::uint64_t n = 1) {
        counts[basis_index] += n;
        total_shots += n;
    }

    double frequency(std::uint64_t basis_index) const {
        const auto it = counts.find(basis_index);
        return it == counts.end() || total_shots == 0
                   ? 0.0
                   : static_cast<double>(it->second) / static_cast<double>(total_shots);
    }
};

// i.i.d. draws from |amplitude|^2, deterministic for a given seed. An
// optional readout error flips each measured bit independently.
inline ShotHistogram sample_shots(const Statevector& state, std::uint64_t shots,
                                  std::uint64_t seed, double readout_error = 0.0) {
    if (shots < 1) throw validation_error("sampling requires at least one shot");
    if (readout_error < 0.0 || readout_error > 1.0)
        throw validation_error("readout error must be a probability");

    // cumulative distribution, then binary search per draw
    std::vector<double> cdf(state.dim());
    double acc = 0.0;
    for (std::uint64_t i = 0; i < state.dim(); ++i) {
        acc += state.probability(i);
        cdf[i] = acc;
    }
    const double total = acc;

    Rng rng(seed);
    ShotHistogram hist;
    hist.n_qubits = state.n_qubits();
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * total;
        std::uint64_t lo = 0, hi = state.dim() - 1;
        while (lo < hi) {
            const std::uint64_t mid = (lo + hi) / 2;
            if (cdf[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        std::uint64_t outcome = lo;
        if (readout_error > 0.0)
            for (int q = 0; q < state.n_qubits(); ++q)
                if (rng.bernoulli(readout_error)) outcome ^= std::uint64_t(1) << q;
        hist.add(outcome);
    }
    return hist;
}

struct ProbabilityEstimate {
    std::vector<double> p;
    std::vector<double> se;  // binomial standard error per entry
};

inline ProbabilityEstimate estimate_probabilities(const ShotHistogram& hist) {
    if (hist.total_shots < 1) throw validation_error("histogram is empty");
    const std::uint64_t dim = std::uint64_t(1) << hist.n_qubits;
    ProbabilityEstimate est;
    est.p.assign(dim, 0.0);
    est.se.assign(dim, 0.0);
    const double n = static_cast<double>(hist.total_shots);
    for (const auto& [idx, count] : hist.counts) est.p[idx] = static_cast<double>(count) / n;
    for (std::uint64_t i = 0; i < dim; ++i)
        est.se[i] = std::sqrt(est.p[i] * (1.0 - est.p[i]) / n);
    return est;
}

struct ExpectationEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Sample mean of a diagonal observable (one real value per basis state),
// with the multinomial standard error of the mean.
inline ExpectationEstimate expectation_diagonal(const ShotHistogram& hist,
                                                std::span<const double> values) {
    if (values.size() != (std::uint64_t(1) << hist.n_qubits))
        throw validation_error("observable length must be 2^n_qubits");
    if (hist.total_shots < 1) throw validation_error("histogram is empty");
    const double n = static_cast<double>(hist.total_shots);
    double mean = 0.0, second = 0.0;
    for (const auto& [idx, count] : hist.counts) {
        const double w = static_cast<double>(count) / n;
        mean += w * values[idx];
        second += w * values[idx] * values[idx];
    }
    const double var = std::max(0.0, second - mean * mean);
    return {mean, std::sqrt(var / n)};
}

}  // namespace qcfd
