#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "config.hpp"
#include "matrix.hpp"

namespace fermitrot {

struct HermitianEig {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // columns
};

inline bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    const double scale = std::max(1.0, a.max_abs());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = r; c < a.cols(); ++c)
            if (std::abs(a(r, c) - std::conj(a(c, r))) > tol * scale) return false;
    return true;
}

namespace detail {

inline double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// Cyclic complex Jacobi. Each rotation is a phase fix diag(1, e^{-i phi}) followed by a real
// Givens rotation chosen as in the classical symmetric method.
inline HermitianEig jacobi(ComplexMatrix a, bool want_vectors, const Tolerances& tol) {
    const std::size_t n = a.rows();
    HermitianEig out;
    ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};

    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    const double target = tol.jacobi_offdiag * a.frobenius();

    int sweep = 0;
    while (offdiag_frobenius(a) > target) {
        if (++sweep > tol.jacobi_max_sweeps) throw numerical_failure("Jacobi eigensolver did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const cplx ph = apq / mag; // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
                const cplx gqp = -s * std::conj(ph);
                const cplx gqq = c * std::conj(ph);

                for (std::size_t k = 0; k < n; ++k) { // A <- A G
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * gqp;
                    a(k, q) = akp * s + akq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) { // A <- G^dagger A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(gqp) * aqk;
                    a(q, k) = s * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = vkp * c + vkq * gqp;
                        v(k, q) = vkp * s + vkq * gqq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(order[i], order[i]).real();
    if (want_vectors) {
        out.eigenvectors = ComplexMatrix(n, n);
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, col) = v(k, order[col]);
    }
    return out;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix h = a + a.adjoint();
    h *= 0.5;
    return h;
}

} // namespace detail

inline HermitianEig hermitian_eig(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
    require(a.square(), "hermitian_eig needs a square matrix");
    require(a.all_finite(), "hermitian_eig input has non-finite entries");
    require(is_hermitian(a, tol.hermitian_check), "hermitian_eig input is not Hermitian");
    return detail::jacobi(a, true, tol);
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
    require(a.square(), "hermitian_eigenvalues needs a square matrix");
    return detail::jacobi(detail::hermitian_part(a), false, tol).eigenvalues;
}

inline double spectral_norm(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
    if (a.empty()) return 0.0;
    if (is_hermitian(a, 1e-14)) {
        const auto ev = hermitian_eigenvalues(a, tol);
        return std::max(std::abs(ev.front()), std::abs(ev.back()));
    }
    const ComplexMatrix g = a.rows() >= a.cols() ? a.adjoint() * a : a * a.adjoint();
    const auto ev = hermitian_eigenvalues(g, tol);
    return std::sqrt(std::max(0.0, ev.back()));
}

// max over theta of the spectral radius of the Hermitian part of e^{i theta} A.
inline double numerical_radius(const ComplexMatrix& a, const Tolerances& tol = default_tolerances()) {
    require(a.square(), "numerical_radius needs a square matrix");
    if (a.empty() || a.max_abs() == 0.0) return 0.0;
    if (is_hermitian(a, 1e-14)) return spectral_norm(a, tol);

    const ComplexMatrix ad = a.adjoint();
    auto f = [&](double theta) {
        const cplx ph = std::polar(1.0, theta);
        ComplexMatrix h = a * ph + ad * std::conj(ph);
        h *= 0.5;
        const auto ev = detail::jacobi(std::move(h), false, tol).eigenvalues;
        return std::max(std::abs(ev.front()), std::abs(ev.back()));
    };

    const int m = tol.radius_grid;
    const double step = std::numbers::pi / m;
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < m; ++i) {
        const double val = f(i * step);
        if (val > best) {
            best = val;
            best_i = i;
        }
    }

    // f has period pi, so the bracket may wrap around 0.
    double lo = (best_i - 1) * step, hi = (best_i + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < tol.radius_golden_steps; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max({best, f1, f2});
}

inline ComplexMatrix unitary_from_eig(const HermitianEig& e, double t) {
    const std::size_t n = e.eigenvalues.size();
    ComplexMatrix scaled = e.eigenvectors;
    for (std::size_t c = 0; c < n; ++c) {
        const cplx ph = std::polar(1.0, -t * e.eigenvalues[c]);
        for (std::size_t r = 0; r < n; ++r) scaled(r, c) *= ph;
    }
    return scaled * e.eigenvectors.adjoint();
}

// e^{-i t H}
inline ComplexMatrix unitary_from_hermitian(const ComplexMatrix& h, double t,
                                            const Tolerances& tol = default_tolerances()) {
    if (h.empty()) return h;
    return unitary_from_eig(hermitian_eig(h, tol), t);
}

// A <= B in the PSD order.
inline bool psd_order_holds(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.empty() && b.empty()) return true;
    const auto ev = hermitian_eigenvalues(b - a);
    return ev.front() >= -tol;
}

} // namespace fermitrot
