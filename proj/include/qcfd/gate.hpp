#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qcfd/error.hpp"

namespace qcfd {

using cplx = std::complex<double>;

// Dense unitary acting on log2(dim) qubits, row-major. Small gates are 2x2
// or 4x4; Hamiltonian evolution operators can be 2^k x 2^k.
struct GateMatrix {
    int dim = 0;
    std::vector<cplx> m;  // dim*dim entries, row-major

    GateMatrix() = default;
    GateMatrix(int d, std::vector<cplx> entries) : dim(d), m(std::move(entries)) {
        if (dim < 1 || (dim & (dim - 1)) != 0)
            throw validation_error("GateMatrix dimension must be a power of two");
        if (m.size() != static_cast<std::size_t>(dim) * dim)
            throw validation_error("GateMatrix entry count does not match dimension");
    }

    cplx operator()(int r, int c) const { return m[static_cast<std::size_t>(r) * dim + c]; }
    cplx& operator()(int r, int c) { return m[static_cast<std::size_t>(r) * dim + c]; }

    int qubits() const {
        int n = 0;
        for (int d = dim; d > 1; d >>= 1) ++n;
        return n;
    }

    GateMatrix adjoint() const {
        GateMatrix a;
        a.dim = dim;
        a.m.resize(m.size());
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) a(r, c) = std::conj((*this)(c, r));
        return a;
    }

    // max entrywise |U†U - I|
    double unitarity_defect() const {
        double worst = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                cplx acc = 0.0;
                for (int k = 0; k < dim; ++k) acc += std::conj((*this)(k, r)) * (*this)(k, c);
                if (r == c) acc -= 1.0;
                worst = std::max(worst, std::abs(acc));
            }
        }
        return worst;
    }

    bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }
};

inline GateMatrix matmul(const GateMatrix& a, const GateMatrix& b) {
    if (a.dim != b.dim) throw validation_error("gate matrix product: dimension mismatch");
    GateMatrix out;
    out.dim = a.dim;
    out.m.assign(a.m.size(), cplx(0.0, 0.0));
    for (int r = 0; r < a.dim; ++r)
        for (int k = 0; k < a.dim; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx(0.0, 0.0)) continue;
            for (int c = 0; c < a.dim; ++c) out(r, c) += ark * b(k, c);
        }
    return out;
}

namespace gate {

inline GateMatrix identity(int dim = 2) {
    GateMatrix g;
    g.dim = dim;
    g.m.assign(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0));
    for (int i = 0; i < dim; ++i) g(i, i) = 1.0;
    return g;
}

inline GateMatrix h() {
    const double s = 1.0 / std::sqrt(2.0);
    return GateMatrix(2, {s, s, s, -s});
}

inline GateMatrix x() { return GateMatrix(2, {0.0, 1.0, 1.0, 0.0}); }

inline GateMatrix y() {
    return GateMatrix(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
}

inline GateMatrix z() { return GateMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

inline GateMatrix rx(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return GateMatrix(2, {c, cplx(0.0, -s), cplx(0.0, -s), c});
}

inline GateMatrix ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return GateMatrix(2, {c, -s, s, c});
}

inline GateMatrix rz(double theta) {
    return GateMatrix(2, {std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2)});
}

inline GateMatrix phase(double theta) {
    return GateMatrix(2, {1.0, 0.0, 0.0, std::polar(1.0, theta)});
}

// e^{i theta} * I: a global phase when uncontrolled, a relative phase on the
// control subspace when controlled.
inline GateMatrix gphase(double theta) {
    const cplx p = std::polar(1.0, theta);
    return GateMatrix(2, {p, 0.0, 0.0, p});
}

inline GateMatrix swap() {
    GateMatrix g = identity(4);
    g(1, 1) = g(2, 2) = 0.0;
    g(1, 2) = g(2, 1) = 1.0;
    return g;
}

}  // namespace gate
}  // namespace qcfd
