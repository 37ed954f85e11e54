#pragma once

// Independent brute-force reference: operators on the full 2^n Fock space, built straight from the
// occupation-string rules with an explicit loop for the sign, then projected onto one electron number.

#include <complex>
#include <vector>

#include "fermitrot/matrix.hpp"

namespace oracle {

using fermitrot::ComplexMatrix;
using fermitrot::cplx;

inline int occupied_before(unsigned long long c, int j) {
    int count = 0;
    for (int i = 0; i < j; ++i) count += static_cast<int>((c >> i) & 1ULL);
    return count;
}

inline ComplexMatrix creation(int n, int j) {
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix m(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        if ((c >> j) & 1U) continue;
        m(c | (std::size_t{1} << j), c) = (occupied_before(c, j) % 2) ? -1.0 : 1.0;
    }
    return m;
}

inline ComplexMatrix annihilation(int n, int j) { return creation(n, j).adjoint(); }

inline ComplexMatrix number(int n, int j) { return creation(n, j) * annihilation(n, j); }

inline ComplexMatrix hamiltonian(int n, const ComplexMatrix& tau, const std::vector<double>& nu, ComplexMatrix* t_out = nullptr,
                                 ComplexMatrix* v_out = nullptr) {
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix t(dim, dim), v(dim, dim);
    std::vector<ComplexMatrix> cr, an, nm;
    for (int j = 0; j < n; ++j) {
        cr.push_back(creation(n, j));
        an.push_back(annihilation(n, j));
        nm.push_back(number(n, j));
    }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const cplx tjk = tau(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
            if (tjk != cplx{}) t += (cr[j] * an[k]) * tjk;
            const double vjk = nu[static_cast<std::size_t>(j * n + k)];
            if (vjk != 0.0) v += (nm[j] * nm[k]) * vjk;
        }
    if (t_out) *t_out = t;
    if (v_out) *v_out = v;
    return t + v;
}

// Rows and columns of the given electron numbers, in increasing integer order.
inline ComplexMatrix project(const ComplexMatrix& full, int n, int eta_out, int eta_in) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
        int w = 0;
        for (int i = 0; i < n; ++i) w += static_cast<int>((c >> i) & 1U);
        if (w == eta_out) rows.push_back(c);
        if (w == eta_in) cols.push_back(c);
    }
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = full(rows[r], cols[c]);
    return out;
}

inline ComplexMatrix project(const ComplexMatrix& full, int n, int eta) { return project(full, n, eta, eta); }

} // namespace oracle
