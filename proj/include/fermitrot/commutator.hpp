#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "config.hpp"
#include "fock.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"
#include "seminorm.hpp"

namespace fermitrot {

// Binary word for [H_{g_{p+1}}, ... [H_{g_2}, H_{g_1}]], stored outermost first.
// A bit of 1 selects T, 0 selects V.
class GammaWord {
  public:
    explicit GammaWord(std::vector<int> bits) : bits_(std::move(bits)) {
        require(bits_.size() >= 2, "gamma word needs at least two letters");
        for (int b : bits_) require(b == 0 || b == 1, "gamma letters are 0 or 1");
        require(bits_[bits_.size() - 1] != bits_[bits_.size() - 2],
                "innermost pair of a gamma word must differ, [T,T] = [V,V] = 0");
    }

    int order() const { return static_cast<int>(bits_.size()) - 1; }
    int weight() const {
        int w = 0;
        for (int b : bits_) w += b;
        return w;
    }
    const std::vector<int>& bits() const { return bits_; }
    // gamma_q with q = 1 innermost
    int at(int q) const { return bits_[bits_.size() - static_cast<std::size_t>(q)]; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < bits_.size(); ++i) s += (i ? "," : "") + std::to_string(bits_[i]);
        return s + ")";
    }

    friend bool operator==(const GammaWord&, const GammaWord&) = default;

  private:
    std::vector<int> bits_;
};

inline SectorOperator nested_commutator(const GammaWord& g, const SectorOperator& T, const SectorOperator& V) {
    const auto pick = [&](int b) -> const SectorOperator& { return b ? T : V; };
    SectorOperator x = pick(g.at(1));
    for (int q = 2; q <= g.order() + 1; ++q) x = commutator(pick(g.at(q)), x);
    return x;
}

inline std::vector<GammaWord> gamma_enumeration(int p) {
    require(p >= 1 && p <= 20, "commutator order out of range");
    std::vector<GammaWord> out;
    const unsigned total = 1U << (p + 1);
    for (unsigned m = 0; m < total; ++m) {
        std::vector<int> bits(static_cast<std::size_t>(p + 1));
        for (int i = 0; i <= p; ++i) bits[static_cast<std::size_t>(i)] = (m >> (p - i)) & 1U;
        if (bits[static_cast<std::size_t>(p)] == bits[static_cast<std::size_t>(p - 1)]) continue;
        out.emplace_back(std::move(bits));
    }
    return out;
}

namespace detail {

// sum_{jk} tau_jk A_j^dagger f(j, k, A_k c) A_k
inline SectorOperator sandwiched_hopping(const CoefficientPair& coeff, const SectorPtr& s,
                                         const std::function<double(int, int, const FermionConfig&)>& f) {
    const int n = s->n();
    SectorOperator out = SectorOperator::zero(s);
    for (std::size_t col = 0; col < s->dim(); ++col) {
        const FermionConfig c = s->config(col);
        for (int k = 0; k < n; ++k) {
            auto a = apply_annihilation(k, c);
            if (!a) continue;
            for (int j = 0; j < n; ++j) {
                const cplx t = coeff.tau(j, k);
                if (t == cplx{}) continue;
                auto b = apply_creation(j, a->config);
                if (!b) continue;
                const double mid = f(j, k, a->config);
                if (mid == 0.0) continue;
                out.matrix(s->index(b->config), col) += t * mid * static_cast<double>(a->sign * b->sign);
            }
        }
    }
    return out;
}

inline double weighted_occupation_row(const CoefficientPair& coeff, int row, const FermionConfig& c) {
    double acc = 0.0;
    for (int m = 0; m < c.n; ++m)
        if (c.occupied(m)) acc += coeff.nu(row, m);
    return acc;
}

inline double weighted_occupation_col(const CoefficientPair& coeff, int col, const FermionConfig& c) {
    double acc = 0.0;
    for (int l = 0; l < c.n; ++l)
        if (c.occupied(l)) acc += coeff.nu(l, col);
    return acc;
}

} // namespace detail

// The six terms of [T, V] in order:
//   +tau_jk nu_km A_j^+ N_m A_k, +tau_jk nu_kk A_j^+ A_k, +tau_jk nu_lk A_j^+ N_l A_k,
//   -tau_jk nu_jm A_j^+ N_m A_k, -tau_jk nu_jj A_j^+ A_k, -tau_jk nu_lj A_j^+ N_l A_k
inline std::array<SectorOperator, 6> single_layer_terms(const CoefficientPair& coeff, const SectorPtr& s) {
    require(coeff.n() == s->n(), "coefficient size does not match the sector");
    using detail::sandwiched_hopping;
    using detail::weighted_occupation_col;
    using detail::weighted_occupation_row;
    return {
        sandwiched_hopping(coeff, s, [&](int, int k, const FermionConfig& a) { return weighted_occupation_row(coeff, k, a); }),
        sandwiched_hopping(coeff, s, [&](int, int k, const FermionConfig&) { return coeff.nu(k, k); }),
        sandwiched_hopping(coeff, s, [&](int, int k, const FermionConfig& a) { return weighted_occupation_col(coeff, k, a); }),
        sandwiched_hopping(coeff, s, [&](int j, int, const FermionConfig& a) { return -weighted_occupation_row(coeff, j, a); }),
        sandwiched_hopping(coeff, s, [&](int j, int, const FermionConfig&) { return -coeff.nu(j, j); }),
        sandwiched_hopping(coeff, s, [&](int j, int, const FermionConfig& a) { return -weighted_occupation_col(coeff, j, a); }),
    };
}

// Seminorm bounds for the six terms above.
inline std::array<double, 6> single_layer_bounds(const CoefficientPair& coeff, int eta) {
    const double base = coeff.tau_spectral() * coeff.nu_max();
    const double e = eta, e2 = e * e;
    return {base * e2, base * e, base * e2, base * e2, base * e, base * e2};
}

// 6^p p! ||tau||^{|g|} (eta ||nu||_max)^{p+1-|g|} eta
inline double chain_seminorm_bound(const GammaWord& g, const CoefficientPair& coeff, int eta) {
    const int p = g.order();
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    return std::pow(6.0, p) * fact * std::pow(coeff.tau_spectral(), g.weight()) *
           std::pow(eta * coeff.nu_max(), p + 1 - g.weight()) * eta;
}

namespace detail {

inline void require_nonempty_lists(const std::vector<SectorOperator>& a, const std::vector<SectorOperator>& b) {
    require(!a.empty() && a.size() == b.size(), "operator lists must be non-empty and of equal length");
}

inline double psd_tol(const ComplexMatrix& scale_of, double tol) { return tol * std::max(1.0, scale_of.max_abs()); }

} // namespace detail

// -sum B_j^+ C_k^+ C_k B_j <= sum B_j^+ C_k^+ C_j B_k <= sum B_j^+ C_k^+ C_k B_j
inline bool lemma_cauchy_check(const std::vector<SectorOperator>& bs, const std::vector<SectorOperator>& cs,
                               double tol = 1e-9) {
    detail::require_nonempty_lists(bs, cs);
    const std::size_t m = bs.size();
    std::vector<std::vector<SectorOperator>> cb(m); // cb[k][j] = C_k B_j
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) cb[k].push_back(cs[k] * bs[j]);
    SectorOperator middle = SectorOperator::zero(bs[0].domain);
    SectorOperator outer = SectorOperator::zero(bs[0].domain);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            middle += cb[k][j].adjoint() * cb[j][k];
            outer += cb[k][j].adjoint() * cb[k][j];
        }
    const double t = detail::psd_tol(outer.matrix, tol);
    return psd_order_holds(-outer.matrix, middle.matrix, t) && psd_order_holds(middle.matrix, outer.matrix, t);
}

// -||mu|| sum B_j^+ B_j <= sum mu_jk B_j^+ B_k <= ||mu|| sum B_j^+ B_j
inline bool lemma_diagonalization_check(const ComplexMatrix& mu, const std::vector<SectorOperator>& bs,
                                        double tol = 1e-9) {
    require(!bs.empty() && mu.rows() == bs.size() && mu.square(), "mu must be |Bs| x |Bs|");
    require(is_hermitian(mu, default_tolerances().hermitian_check), "mu must be Hermitian");
    const double mnorm = spectral_norm(mu);
    SectorOperator mixed = SectorOperator::zero(bs[0].domain);
    SectorOperator diag = SectorOperator::zero(bs[0].domain);
    for (std::size_t j = 0; j < bs.size(); ++j) {
        const SectorOperator bj = bs[j].adjoint();
        diag += bj * bs[j];
        for (std::size_t k = 0; k < bs.size(); ++k)
            if (mu(j, k) != cplx{}) mixed += (bj * bs[k]) * mu(j, k);
    }
    const ComplexMatrix bound = diag.matrix * mnorm;
    const double t = detail::psd_tol(bound, tol);
    return psd_order_holds(-bound, mixed.matrix, t) && psd_order_holds(mixed.matrix, bound, t);
}

// ||sum B_j^+ C_j^+ C_j B_j||_eta <= ||sum B_j^+ B_j||_eta max_k ||C_k^+ C_k||_xi
inline bool lemma_holder_check(const std::vector<SectorOperator>& bs, const std::vector<SectorOperator>& cs,
                               double tol = 1e-9) {
    detail::require_nonempty_lists(bs, cs);
    SectorOperator lhs = SectorOperator::zero(bs[0].domain);
    SectorOperator bb = SectorOperator::zero(bs[0].domain);
    double cmax = 0.0;
    for (std::size_t j = 0; j < bs.size(); ++j) {
        require(cs[j].number_preserving(), "Hoelder check needs number-preserving C operators");
        const SectorOperator cbj = cs[j] * bs[j];
        lhs += cbj.adjoint() * cbj;
        bb += bs[j].adjoint() * bs[j];
        cmax = std::max(cmax, fermionic_seminorm(cs[j].adjoint() * cs[j]));
    }
    const double l = fermionic_seminorm(lhs), r = fermionic_seminorm(bb) * cmax;
    return l <= r + tol * std::max(1.0, r);
}

} // namespace fermitrot
