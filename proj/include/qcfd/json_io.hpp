#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "qcfd/error.hpp"
#include "qcfd/sampling.hpp"

namespace qcfd {

// JSON wire formats (see docs/FORMATS.md):
//   matrix: {"rows": R, "cols": C, "data": [[re, im], ...]} row-major
//   vector: {"data": [x0, x1, ...]} or {"data": [[re, im], ...]}
//   histogram: {"n_qubits": n, "total_shots": N, "counts": {"bits": count}}
// Histogram keys are bitstrings with qubit 0 rightmost.

inline std::string bitstring(std::uint64_t index, int n_qubits) {
    std::string s(n_qubits, '0');
    for (int q = 0; q < n_qubits; ++q)
        if (index & (std::uint64_t(1) << q)) s[n_qubits - 1 - q] = '1';
    return s;
}

inline std::uint64_t parse_bitstring(const std::string& bits) {
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw validation_error("bad bitstring '" + bits + "'");
        index = (index << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return index;
}

inline nlohmann::json histogram_to_json(const ShotHistogram& hist) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [idx, count] : hist.counts) counts[bitstring(idx, hist.n_qubits)] = count;
    return {{"n_qubits", hist.n_qubits},
            {"total_shots", hist.total_shots},
            {"counts", std::move(counts)}};
}

inline ShotHistogram histogram_from_json(const nlohmann::json& j) {
    ShotHistogram hist;
    hist.n_qubits = j.at("n_qubits").get<int>();
    for (const auto& [bits, count] : j.at("counts").items())
        hist.counts[parse_bitstring(bits)] = count.get<std::uint64_t>();
    std::uint64_t total = 0;
    for (const auto& [idx, count] : hist.counts) total += count;
    hist.total_shots = total;
    const std::uint64_t declared = j.at("total_shots").get<std::uint64_t>();
    if (declared != total)
        throw validation_error("histogram total_shots does not match the counts");
    return hist;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 1 || cols < 1 || data.size() != static_cast<std::size_t>(rows * cols))
        throw validation_error("matrix JSON: data length does not match rows*cols");
    Eigen::MatrixXcd m(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++i) {
            const auto& e = data[i];
            if (e.is_number())
                m(r, c) = cplx(e.get<double>(), 0.0);
            else
                m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    return m;
}

inline Eigen::VectorXd real_vector_from_json(const nlohmann::json& j) {
    const auto& data = j.at("data");
    Eigen::VectorXd v(static_cast<Eigen::Index>(data.size()));
    Eigen::Index i = 0;
    for (const auto& e : data) {
        if (e.is_number()) {
            v(i++) = e.get<double>();
        } else {
            if (e.at(1).get<double>() != 0.0)
                throw validation_error("expected a real vector");
            v(i++) = e.at(0).get<double>();
        }
    }
    return v;
}

inline nlohmann::json real_vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
    return {{"data", std::move(data)}};
}

}  // namespace qcfd
