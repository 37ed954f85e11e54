#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "config.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace fermitrot {

// Coefficient data has no bit-word limit; sectors still need n <= max_modes.
inline constexpr int max_coefficient_modes = 64;

// H = sum tau_jk A_j^dagger A_k + sum nu_lm N_l N_m
class CoefficientPair {
  public:
    CoefficientPair() = default;
    CoefficientPair(ComplexMatrix tau, std::vector<double> nu) : n_(static_cast<int>(tau.rows())), tau_(std::move(tau)) {
        require(tau_.square(), "tau must be square");
        require(n_ <= max_coefficient_modes, "too many modes");
        require(nu.size() == tau_.rows() * tau_.rows(), "nu must be n x n");
        require(tau_.all_finite(), "tau has non-finite entries");
        require(is_hermitian(tau_, default_tolerances().hermitian_check), "tau must be Hermitian");
        nu_.assign(nu.size(), 0.0);
        const auto un = static_cast<std::size_t>(n_);
        for (std::size_t l = 0; l < un; ++l)
            for (std::size_t m = 0; m < un; ++m) {
                require(std::isfinite(nu[l * un + m]), "nu has non-finite entries");
                nu_[l * un + m] = l == m ? nu[l * un + m] : 0.5 * (nu[l * un + m] + nu[m * un + l]);
            }
        tau_norm_ = spectral_norm(tau_);
        tau_max_ = tau_.max_abs();
        for (double x : nu_) nu_max_ = std::max(nu_max_, std::abs(x));
    }

    static CoefficientPair zero(int n) {
        return {ComplexMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n)),
                std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
    }

    int n() const { return n_; }
    const ComplexMatrix& tau() const { return tau_; }
    const std::vector<double>& nu() const { return nu_; }
    cplx tau(int j, int k) const { return tau_(static_cast<std::size_t>(j), static_cast<std::size_t>(k)); }
    double nu(int l, int m) const { return nu_[static_cast<std::size_t>(l * n_ + m)]; }

    double tau_spectral() const { return tau_norm_; }
    double tau_max() const { return tau_max_; }
    double nu_max() const { return nu_max_; }

  private:
    int n_ = 0;
    ComplexMatrix tau_;
    std::vector<double> nu_;
    double tau_norm_ = 0.0;
    double tau_max_ = 0.0;
    double nu_max_ = 0.0;
};

struct AssembledHamiltonian {
    SectorOperator T;
    SectorOperator V;
    SectorOperator H;
};

inline SectorOperator assemble_hopping(const ComplexMatrix& tau, const SectorPtr& s) {
    const int n = s->n();
    require(static_cast<int>(tau.rows()) == n, "coefficient size does not match the sector");
    SectorOperator out = SectorOperator::zero(s);
    for (std::size_t col = 0; col < s->dim(); ++col) {
        const FermionConfig c = s->config(col);
        for (int k = 0; k < n; ++k) {
            auto a = apply_annihilation(k, c);
            if (!a) continue;
            for (int j = 0; j < n; ++j) {
                const cplx t = tau(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
                if (t == cplx{}) continue;
                auto b = apply_creation(j, a->config);
                if (!b) continue;
                out.matrix(s->index(b->config), col) += t * static_cast<double>(a->sign * b->sign);
            }
        }
    }
    return out;
}

inline std::vector<double> interaction_diagonal(const CoefficientPair& coeff, const SectorPtr& s) {
    const int n = s->n();
    std::vector<double> diag(s->dim(), 0.0);
    for (std::size_t i = 0; i < s->dim(); ++i) {
        const bitword c = s->configs()[i];
        double acc = 0.0;
        for (int l = 0; l < n; ++l) {
            if (!((c >> l) & 1U)) continue;
            for (int m = 0; m < n; ++m)
                if ((c >> m) & 1U) acc += coeff.nu(l, m);
        }
        diag[i] = acc;
    }
    return diag;
}

inline AssembledHamiltonian assemble(const CoefficientPair& coeff, const SectorPtr& s) {
    require(coeff.n() == s->n(), "coefficient size does not match the sector");
    SectorOperator T = assemble_hopping(coeff.tau(), s);
    SectorOperator V{s, s, ComplexMatrix::diagonal(interaction_diagonal(coeff, s))};
    SectorOperator H = T + V;
    return {std::move(T), std::move(V), std::move(H)};
}

// nonzero count per row and column of tau and nu, maximized
inline int interaction_sparsity(const CoefficientPair& coeff, double threshold = default_tolerances().support_threshold) {
    const int n = coeff.n();
    int d = 0;
    for (int a = 0; a < n; ++a) {
        int tr = 0, tc = 0, nr = 0, nc = 0;
        for (int b = 0; b < n; ++b) {
            tr += std::abs(coeff.tau(a, b)) > threshold;
            tc += std::abs(coeff.tau(b, a)) > threshold;
            nr += std::abs(coeff.nu(a, b)) > threshold;
            nc += std::abs(coeff.nu(b, a)) > threshold;
        }
        d = std::max({d, tr, tc, nr, nc});
    }
    return d;
}

struct NucleusSpec {
    double charge = 1.0;
    std::array<double, 3> position{}; // fractional coordinates of the cell
};

inline int cube_side(int n) {
    const int side = static_cast<int>(std::lround(std::cbrt(static_cast<double>(n))));
    require(side > 0 && side * side * side == n, "plane-wave mode count must be a perfect cube");
    return side;
}

// Dual-basis plane-wave Hamiltonian. The nuclear term is folded into nu by dividing by eta.
inline CoefficientPair plane_wave(int n, double omega, int eta, const std::vector<NucleusSpec>& nuclei = {}) {
    const int side = cube_side(n);
    require(omega > 0.0, "cell volume must be positive");
    require(eta >= 1 && eta <= n, "electron count out of range");
    for (const auto& nuc : nuclei) {
        require(nuc.charge > 0.0, "nuclear charge must be positive");
        for (double x : nuc.position) require(x >= 0.0 && x < 1.0, "nucleus outside the cell");
    }
    const double pi = std::numbers::pi;
    const double cell = std::cbrt(omega);
    const double spacing = cell / side;
    const int lo = -(side / 2);

    auto coord = [&](int j) {
        return std::array<int, 3>{j % side, (j / side) % side, j / (side * side)};
    };
    std::vector<std::array<double, 3>> kvecs; // nonzero frequencies
    std::vector<double> k2;
    double k2_zero = 0.0;
    for (int a = lo; a < lo + side; ++a)
        for (int b = lo; b < lo + side; ++b)
            for (int c = lo; c < lo + side; ++c) {
                const std::array<double, 3> k{2 * pi * a / cell, 2 * pi * b / cell, 2 * pi * c / cell};
                const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (a == 0 && b == 0 && c == 0) {
                    k2_zero = kk;
                    continue;
                }
                kvecs.push_back(k);
                k2.push_back(kk);
            }

    auto dot = [](const std::array<double, 3>& k, const std::array<double, 3>& r) {
        return k[0] * r[0] + k[1] * r[1] + k[2] * r[2];
    };
    auto displacement = [&](int from, int to) {
        const auto a = coord(from), b = coord(to);
        return std::array<double, 3>{(b[0] - a[0]) * spacing, (b[1] - a[1]) * spacing, (b[2] - a[2]) * spacing};
    };

    const auto un = static_cast<std::size_t>(n);
    ComplexMatrix tau(un, un);
    std::vector<double> nu(un * un, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const auto r = displacement(j, k);
            double t = k2_zero;
            for (std::size_t q = 0; q < kvecs.size(); ++q) t += k2[q] * std::cos(dot(kvecs[q], r));
            tau(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = t / (2.0 * n);
            if (j != k) {
                double v = 0.0;
                for (std::size_t q = 0; q < kvecs.size(); ++q) v += std::cos(dot(kvecs[q], r)) / k2[q];
                nu[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(k)] = 2.0 * pi / omega * v;
            }
        }

    if (!nuclei.empty()) {
        for (int l = 0; l < n; ++l) {
            const auto p = coord(l);
            const std::array<double, 3> rl{p[0] * spacing, p[1] * spacing, p[2] * spacing};
            double ext = 0.0;
            for (const auto& nuc : nuclei) {
                const std::array<double, 3> d{nuc.position[0] * cell - rl[0], nuc.position[1] * cell - rl[1],
                                              nuc.position[2] * cell - rl[2]};
                for (std::size_t q = 0; q < kvecs.size(); ++q) ext += nuc.charge * std::cos(dot(kvecs[q], d)) / k2[q];
            }
            ext *= -4.0 * pi / (omega * eta);
            for (std::size_t m = 0; m < un; ++m) nu[static_cast<std::size_t>(l) * un + m] += ext;
        }
    }
    return {std::move(tau), std::move(nu)}; // the constructor symmetrizes nu
}

// Mode index 2*site + spin, sites in row-major order with the first extent fastest.
inline CoefficientPair fermi_hubbard(const std::vector<int>& extents, double s, double v, bool periodic = false) {
    require(!extents.empty(), "lattice needs at least one dimension");
    int sites = 1;
    for (int L : extents) {
        require(L >= 1, "lattice extents must be positive");
        sites *= L;
        require(2 * sites <= max_coefficient_modes, "lattice too large");
    }
    const int n = 2 * sites;
    const auto un = static_cast<std::size_t>(n);
    ComplexMatrix tau(un, un);
    std::vector<double> nu(un * un, 0.0);

    auto link = [&](int a, int b) {
        for (int sigma = 0; sigma < 2; ++sigma) {
            const auto ja = static_cast<std::size_t>(2 * a + sigma), jb = static_cast<std::size_t>(2 * b + sigma);
            tau(ja, jb) = -s;
            tau(jb, ja) = -s;
        }
    };
    for (int site = 0; site < sites; ++site) {
        int stride = 1;
        for (int L : extents) {
            const int x = (site / stride) % L;
            if (x + 1 < L) link(site, site + stride);
            else if (periodic && L > 2) link(site, site - x * stride);
            stride *= L;
        }
        const auto up = static_cast<std::size_t>(2 * site), down = up + 1;
        nu[up * un + down] = v / 2;
        nu[down * un + up] = v / 2;
    }
    return {std::move(tau), std::move(nu)};
}

struct DenseInstance {
    double s = 1.0;
    double w = 1.0;
};
struct SparseInstance {
    double u = 1.0;
    double w = 1.0;
    int d = 2;
};

// tau = (s/n) * all-ones, nu = w on the top-left (n/2) x (n/2) block
inline CoefficientPair tightness_instance(const DenseInstance& k, int n) {
    require(n >= 2 && n % 2 == 0, "tightness instances need an even mode count");
    const auto un = static_cast<std::size_t>(n);
    ComplexMatrix tau(un, un);
    for (auto& x : tau.data()) x = k.s / n;
    std::vector<double> nu(un * un, 0.0);
    for (std::size_t l = 0; l < un / 2; ++l)
        for (std::size_t m = 0; m < un / 2; ++m) nu[l * un + m] = k.w;
    return {std::move(tau), std::move(nu)};
}

inline CoefficientPair tightness_instance(const SparseInstance& k, int n) {
    require(n >= 2 && n % 2 == 0, "tightness instances need an even mode count");
    require(k.d >= 2 && k.d % 2 == 0 && k.d <= n / 2, "sparse instance needs even d with 2 <= d <= n/2");
    const auto un = static_cast<std::size_t>(n), ud = static_cast<std::size_t>(k.d);
    ComplexMatrix tau(un, un);
    for (std::size_t j = 0; j < ud; ++j)
        for (std::size_t q = 0; q < ud; ++q) tau(j, q) = k.u;
    std::vector<double> nu(un * un, 0.0);
    for (std::size_t l = 0; l < ud / 2; ++l)
        for (std::size_t m = 0; m < ud / 2; ++m) nu[l * un + m] = k.w;
    return {std::move(tau), std::move(nu)};
}

// M_{lj} = e^{-2 pi i jl/w}/sqrt(w) on the first w modes, identity on the rest.
// The many-body operator W with W A_j^dagger W^dagger = sum_l M_lj A_l^dagger conjugates by the FFFT.
inline ComplexMatrix fourier_modes(int n, int width) {
    require(width >= 1 && width <= n, "FFFT width out of range");
    ComplexMatrix m = ComplexMatrix::identity(static_cast<std::size_t>(n));
    const double norm = 1.0 / std::sqrt(static_cast<double>(width));
    for (int l = 0; l < width; ++l)
        for (int j = 0; j < width; ++j)
            m(static_cast<std::size_t>(l), static_cast<std::size_t>(j)) =
                std::polar(norm, -2.0 * std::numbers::pi * ((static_cast<long>(j) * l) % width) / width);
    return m;
}

inline cplx determinant(ComplexMatrix a) {
    const std::size_t n = a.rows();
    cplx det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (a(piv, c) == cplx{}) return 0.0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(c, k));
            det = -det;
        }
        det *= a(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const cplx f = a(r, c) / a(c, c);
            for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
        }
    }
    return det;
}

inline std::vector<int> occupied_modes(bitword c) {
    std::vector<int> out;
    while (c) {
        out.push_back(std::countr_zero(c));
        c &= c - 1;
    }
    return out;
}

// <c'|W|c> = det M[occ(c'), occ(c)]
inline cplx transform_amplitude(const ComplexMatrix& modes, bitword to, bitword from) {
    const auto rows = occupied_modes(to), cols = occupied_modes(from);
    ComplexMatrix sub(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b)
            sub(a, b) = modes(static_cast<std::size_t>(rows[a]), static_cast<std::size_t>(cols[b]));
    return determinant(std::move(sub));
}

inline SectorOperator mode_transform(const ComplexMatrix& modes, const SectorPtr& s) {
    SectorOperator out = SectorOperator::zero(s);
    for (std::size_t r = 0; r < s->dim(); ++r)
        for (std::size_t c = 0; c < s->dim(); ++c)
            out.matrix(r, c) = transform_amplitude(modes, s->configs()[r], s->configs()[c]);
    return out;
}

inline SectorOperator ffft_sector(const SectorPtr& s, int width) {
    const SectorOperator w = mode_transform(fourier_modes(s->n(), width), s);
    const double defect = max_abs_diff(w.matrix * w.matrix.adjoint(), ComplexMatrix::identity(s->dim()));
    if (defect > default_tolerances().unitarity_check) throw numerical_failure("FFFT sector matrix is not unitary");
    return w;
}

// FFFT^dagger X FFFT
inline SectorOperator ffft_conjugate(const SectorOperator& x, int width) {
    require(x.number_preserving(), "FFFT conjugation needs a number-preserving operator");
    const SectorOperator w = ffft_sector(x.domain, width);
    return w * x * w.adjoint();
}

// Same transform on the hopping coefficients: tau -> M tau M^dagger.
inline ComplexMatrix ffft_conjugate(const ComplexMatrix& tau, int width) {
    const ComplexMatrix m = fourier_modes(static_cast<int>(tau.rows()), width);
    return m * tau * m.adjoint();
}

} // namespace fermitrot
