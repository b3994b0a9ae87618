#pragma once

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcfd/circuit.hpp"
#include "qcfd/error.hpp"

namespace qcfd {

// Line-oriented circuit format (see docs/FORMATS.md):
//
//   qcfd-circuit 1
//   qubits <n>
//   <GATE> <targets> <controls> <params> <duration>
//
// targets: comma-separated qubit indices. controls: comma-separated indices,
// each optionally prefixed with '!' for a control on |0>, or '-' when there
// are none. params: comma-separated doubles or '-'. Doubles are printed in
// shortest round-trip form, so write/parse is bit-exact.

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw validation_error("circuit text: bad number '" + std::string(tok) + "'");
    return v;
}

inline long parse_int(std::string_view tok) {
    long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw validation_error("circuit text: bad integer '" + std::string(tok) + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

inline std::string to_text(const QuantumCircuit& circuit) {
    std::string out = "qcfd-circuit 1\nqubits " + std::to_string(circuit.n_qubits()) + "\n";
    for (const CircuitOp& op : circuit.ops()) {
        out += op_kind_name(op.kind);
        out += ' ';
        for (std::size_t i = 0; i < op.targets.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(op.targets[i]);
        }
        out += ' ';
        if (op.controls.empty()) {
            out += '-';
        } else {
            for (std::size_t i = 0; i < op.controls.size(); ++i) {
                if (i) out += ',';
                if (!(op.control_pattern & (std::uint64_t(1) << i))) out += '!';
                out += std::to_string(op.controls[i]);
            }
        }
        out += ' ';
        std::vector<double> params = op.params;
        if (op.kind == OpKind::Unitary) {
            params.clear();
            params.push_back(static_cast<double>(op.matrix->dim));
            for (const cplx& e : op.matrix->m) {
                params.push_back(e.real());
                params.push_back(e.imag());
            }
        }
        if (params.empty()) {
            out += '-';
        } else {
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (i) out += ',';
                out += detail::format_double(params[i]);
            }
        }
        out += ' ';
        out += detail::format_double(op.duration);
        out += '\n';
    }
    return out;
}

inline QuantumCircuit from_text(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::string_view rest = text; !rest.empty();) {
        const std::size_t pos = rest.find('\n');
        std::string_view line = pos == std::string_view::npos ? rest : rest.substr(0, pos);
        rest = pos == std::string_view::npos ? std::string_view{} : rest.substr(pos + 1);
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    if (lines.size() < 2 || lines[0] != "qcfd-circuit 1")
        throw validation_error("circuit text: missing 'qcfd-circuit 1' header");
    auto header = detail::split(lines[1], ' ');
    if (header.size() != 2 || header[0] != "qubits")
        throw validation_error("circuit text: missing 'qubits <n>' line");
    QuantumCircuit circuit(static_cast<int>(detail::parse_int(header[1])));

    for (std::size_t li = 2; li < lines.size(); ++li) {
        auto fields = detail::split(lines[li], ' ');
        if (fields.size() != 5)
            throw validation_error("circuit text: expected 5 fields per op line");
        CircuitOp op;
        const std::string_view name = fields[0];
        bool known = false;
        for (OpKind k : {OpKind::H, OpKind::X, OpKind::Y, OpKind::Z, OpKind::RX, OpKind::RY,
                         OpKind::RZ, OpKind::Phase, OpKind::GPhase, OpKind::Swap, OpKind::Idle,
                         OpKind::Unitary, OpKind::Measure}) {
            if (name == op_kind_name(k)) {
                op.kind = k;
                known = true;
                break;
            }
        }
        if (!known) throw validation_error("circuit text: unknown gate '" + std::string(name) + "'");

        for (auto tok : detail::split(fields[1], ','))
            op.targets.push_back(static_cast<int>(detail::parse_int(tok)));
        if (fields[2] != "-") {
            op.control_pattern = 0;
            for (auto tok : detail::split(fields[2], ',')) {
                bool negated = !tok.empty() && tok[0] == '!';
                if (negated) tok.remove_prefix(1);
                if (!negated) op.control_pattern |= std::uint64_t(1) << op.controls.size();
                op.controls.push_back(static_cast<int>(detail::parse_int(tok)));
            }
        }
        std::vector<double> params;
        if (fields[3] != "-")
            for (auto tok : detail::split(fields[3], ','))
                params.push_back(detail::parse_double(tok));
        op.duration = detail::parse_double(fields[4]);

        if (op.kind == OpKind::Unitary) {
            if (params.empty()) throw validation_error("circuit text: unitary op lacks entries");
            const int dim = static_cast<int>(params[0]);
            if (params.size() != 1 + 2 * static_cast<std::size_t>(dim) * dim)
                throw validation_error("circuit text: unitary entry count mismatch");
            std::vector<cplx> entries(static_cast<std::size_t>(dim) * dim);
            for (std::size_t i = 0; i < entries.size(); ++i)
                entries[i] = cplx(params[1 + 2 * i], params[2 + 2 * i]);
            op.matrix = std::make_shared<const GateMatrix>(dim, std::move(entries));
        } else {
            op.params = std::move(params);
        }
        circuit.append(std::move(op));
    }
    return circuit;
}

}  // namespace qcfd
