#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "commutator.hpp"
#include "config.hpp"
#include "fock.hpp"
#include "hamiltonian.hpp"
#include "pathcount.hpp"

namespace fermitrot {

enum class StateVariant { psi_tilde, phi_tilde, psi, phi, psi_tilde_d, phi_tilde_d, psi_d, phi_d };

inline StateVariant parse_state_variant(const std::string& s) {
    if (s == "psi_tilde") return StateVariant::psi_tilde;
    if (s == "phi_tilde") return StateVariant::phi_tilde;
    if (s == "psi") return StateVariant::psi;
    if (s == "phi") return StateVariant::phi;
    if (s == "psi_tilde_d") return StateVariant::psi_tilde_d;
    if (s == "phi_tilde_d") return StateVariant::phi_tilde_d;
    if (s == "psi_d") return StateVariant::psi_d;
    if (s == "phi_d") return StateVariant::phi_d;
    throw invalid_input("unknown state variant '" + s + "'");
}

// (|first> + phase |second>) / sqrt(2)
struct TightnessState {
    SectorPtr sector;
    StateVariant variant;
    bitword first = 0;
    bitword second = 0;
    cplx phase = 1.0;

    cvec amplitudes() const {
        cvec v(sector->dim());
        v[sector->index(first)] = 1.0 / std::sqrt(2.0);
        v[sector->index(second)] = phase / std::sqrt(2.0);
        return v;
    }
};

namespace detail {

inline bitword mode_range(int lo, int hi) { // modes lo..hi-1
    bitword w = 0;
    for (int m = lo; m < hi; ++m) w |= bitword{1} << m;
    return w;
}

} // namespace detail

inline TightnessState build_states(StateVariant v, int n, int eta, std::optional<int> d = std::nullopt) {
    require(n >= 2 && n % 2 == 0, "tightness states need an even mode count");
    require(eta >= 1 && eta <= n / 2, "tightness states need 1 <= eta <= n/2");
    using detail::mode_range;
    const cplx i{0.0, 1.0};
    TightnessState st{enumerate_sector(n, eta), v};
    switch (v) {
    case StateVariant::psi_tilde:
    case StateVariant::phi_tilde: {
        const bitword tail = mode_range(n - eta + 1, n);
        st.first = (bitword{1} << 1) | tail;
        st.second = bitword{1} | tail;
        st.phase = v == StateVariant::psi_tilde ? cplx{1.0} : i;
        break;
    }
    case StateVariant::psi:
    case StateVariant::phi:
        st.first = mode_range(1, eta) | (bitword{1} << (n / 2));
        st.second = mode_range(0, eta);
        st.phase = v == StateVariant::psi ? i : cplx{1.0};
        break;
    case StateVariant::psi_tilde_d:
    case StateVariant::phi_tilde_d:
    case StateVariant::psi_d:
    case StateVariant::phi_d: {
        require(d.has_value(), "sparse state variants need d");
        const int dd = *d;
        require(dd >= 2 && dd % 2 == 0 && dd <= eta, "sparse states need even d with 2 <= d <= eta");
        if (v == StateVariant::psi_tilde_d || v == StateVariant::phi_tilde_d) {
            const bitword tail = mode_range(n - (eta - dd + 1), n);
            st.first = mode_range(1, dd) | tail;
            st.second = 1 | mode_range(2, dd) | tail;
            st.phase = v == StateVariant::psi_tilde_d ? cplx{1.0} : i;
        } else {
            const bitword tail = mode_range(n - (eta - dd / 2), n);
            st.first = mode_range(1, dd / 2) | (bitword{1} << (dd / 2)) | tail;
            st.second = mode_range(0, dd / 2) | tail;
            st.phase = v == StateVariant::psi_d ? i : cplx{1.0};
        }
        break;
    }
    }
    return st;
}

// [A, [A, ... [A, B]]] v with p copies of A, using only matrix-vector products.
inline cvec apply_nested(const ComplexMatrix& a, const ComplexMatrix& b, int p, const cvec& v) {
    if (p == 0) return b.apply(v);
    const cvec x = a.apply(apply_nested(a, b, p - 1, v));
    const cvec y = apply_nested(a, b, p - 1, a.apply(v));
    cvec out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] - y[k];
    return out;
}

// W^dagger |state> for the FFFT on the first `width` modes, where FFFT^dagger X FFFT = W X W^dagger.
inline cvec untransformed_state(const TightnessState& st, int width) {
    const auto& s = *st.sector;
    const ComplexMatrix m = fourier_modes(s.n(), width);
    const double h = 1.0 / std::sqrt(2.0);
    cvec out(s.dim());
    for (std::size_t c = 0; c < s.dim(); ++c) {
        const bitword cfg = s.configs()[c];
        out[c] = h * std::conj(transform_amplitude(m, st.first, cfg)) +
                 h * st.phase * std::conj(transform_amplitude(m, st.second, cfg));
    }
    return out;
}

// <state| [T~, ... [T~, V~]] |state> with the transform undone on the state side.
inline cplx fourier_frame_expectation(const CoefficientPair& coeff, const TightnessState& st, int width, int p) {
    const auto h = assemble(coeff, st.sector);
    const cvec chi = untransformed_state(st, width);
    return inner(chi, apply_nested(h.T.matrix, h.V.matrix, p, chi));
}

inline cplx expectation_nested_T_first(int n, int eta, int p, double s, double w) {
    require(p >= 1, "order must be positive");
    const auto st = build_states(p % 2 ? StateVariant::psi_tilde : StateVariant::phi_tilde, n, eta);
    return fourier_frame_expectation(tightness_instance(DenseInstance{s, w}, n), st, n, p);
}

inline cplx expectation_nested_V_first(int n, int eta, int p, double s, double w) {
    require(p >= 1, "order must be positive");
    const auto st = build_states(p % 2 ? StateVariant::psi : StateVariant::phi, n, eta);
    const auto h = assemble(tightness_instance(DenseInstance{s, w}, n), st.sector);
    const cvec v = st.amplitudes();
    return inner(v, apply_nested(h.V.matrix, h.T.matrix, p, v));
}

inline cplx expectation_nested_V_first(int n, int eta, int p) { return expectation_nested_V_first(n, eta, p, n, 1.0); }

inline cplx expectation_sparse_T_first(int n, int eta, int d, int p, double u, double w) {
    require(p >= 1, "order must be positive");
    const auto st = build_states(p % 2 ? StateVariant::psi_tilde_d : StateVariant::phi_tilde_d, n, eta, d);
    return fourier_frame_expectation(tightness_instance(SparseInstance{u, w, d}, n), st, d, p);
}

inline cplx expectation_sparse_V_first(int n, int eta, int d, int p, double u, double w) {
    require(p >= 1, "order must be positive");
    const auto st = build_states(p % 2 ? StateVariant::psi_d : StateVariant::phi_d, n, eta, d);
    const auto h = assemble(tightness_instance(SparseInstance{u, w, d}, n), st.sector);
    const cvec v = st.amplitudes();
    return inner(v, apply_nested(h.V.matrix, h.T.matrix, p, v));
}

// 2x2 block of Pi [T~, V~] Pi on the psi_tilde pair, for the unscaled dense instance.
inline ComplexMatrix projected_commutator_block(int n, int eta) {
    const auto st = build_states(StateVariant::psi_tilde, n, eta);
    const auto h = assemble(tightness_instance(DenseInstance{static_cast<double>(n), 1.0}, n), st.sector);
    const ComplexMatrix c = commutator(h.T.matrix, h.V.matrix);
    const ComplexMatrix m = fourier_modes(n, n);
    const auto& s = *st.sector;
    const bitword basis[2] = {st.first, st.second};
    std::vector<cvec> chi(2, cvec(s.dim()));
    for (int a = 0; a < 2; ++a)
        for (std::size_t k = 0; k < s.dim(); ++k)
            chi[static_cast<std::size_t>(a)][k] = std::conj(transform_amplitude(m, basis[a], s.configs()[k]));
    ComplexMatrix out(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) out(a, b) = inner(chi[a], c.apply(chi[b]));
    return out;
}

namespace detail {

inline cplx half_fourier_sum(int n, int diff) {
    cplx acc{};
    for (int x = 0; x < n / 2; ++x) acc += std::polar(1.0, 2.0 * std::numbers::pi * x * diff / n);
    return acc;
}

// <a| tau_jklm A_j^+ A_k A_l^+ A_m |b>
inline cplx quartic_element(int n, bitword a, bitword b, int j, int k, int l, int m) {
    const FermionicPath path{1, {{OpKind::creation, j}, {OpKind::annihilation, k}, {OpKind::creation, l},
                                  {OpKind::annihilation, m}}};
    const auto r = apply_path(path, {b, n});
    if (!r || r->config.bits != a) return 0.0;
    return static_cast<double>(r->sign) * half_fourier_sum(n, k - j) * half_fourier_sum(n, m - l);
}

} // namespace detail

// The same block from the surviving terms of the Appendix-C cancellation, each a multiple of 1/n.
inline ComplexMatrix effective_commutator_block(int n, int eta) {
    const auto st = build_states(StateVariant::psi_tilde, n, eta);
    const bitword basis[2] = {st.first, st.second};
    ComplexMatrix out(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            auto H = [&](int j, int k, int l, int m) { return detail::quartic_element(n, basis[a], basis[b], j, k, l, m); };
            cplx acc{};
            for (int x = 0; x < n; ++x) {
                acc += H(0, 1, x, x) + H(0, x, x, 1) - H(1, 0, x, x) - H(x, 0, 1, x);
                acc += H(x, x, 0, 1) + H(x, 1, 0, x) - H(x, x, 1, 0) - H(1, x, x, 0);
            }
            acc += -H(0, 1, 1, 1) - H(0, 0, 0, 1) + H(1, 0, 1, 1) + H(1, 0, 0, 0) - H(1, 1, 0, 1) + H(1, 1, 1, 0);
            out(a, b) = acc / static_cast<double>(n);
        }
    return out;
}

// Exact form (1/n) sum (d_0j - d_0k + d_0l - d_0m) H_jklm, restricted to the block.
inline ComplexMatrix four_sum_commutator_block(int n, int eta) {
    const auto st = build_states(StateVariant::psi_tilde, n, eta);
    const bitword basis[2] = {st.first, st.second};
    ComplexMatrix out(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            cplx acc{};
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int m = 0; m < n; ++m) {
                            const int w = (j == 0) - (k == 0) + (l == 0) - (m == 0);
                            if (w) acc += static_cast<double>(w) * detail::quartic_element(n, basis[a], basis[b], j, k, l, m);
                        }
            out(a, b) = acc / static_cast<double>(n);
        }
    return out;
}

enum class TightnessFamily { T_first, V_first, sparse_T, sparse_V };

inline TightnessFamily parse_tightness_family(const std::string& s) {
    if (s == "T_first") return TightnessFamily::T_first;
    if (s == "V_first") return TightnessFamily::V_first;
    if (s == "sparse_T") return TightnessFamily::sparse_T;
    if (s == "sparse_V") return TightnessFamily::sparse_V;
    throw invalid_input("unknown tightness family '" + s + "'");
}

inline std::string to_string(TightnessFamily f) {
    switch (f) {
    case TightnessFamily::T_first: return "T_first";
    case TightnessFamily::V_first: return "V_first";
    case TightnessFamily::sparse_T: return "sparse_T";
    case TightnessFamily::sparse_V: return "sparse_V";
    }
    return "";
}

struct TightnessPoint {
    int n;
    int eta;
    int d = 0;
    int p = 1;
};

// s defaults to n (the unscaled instance); u only enters the sparse families.
struct TightnessScale {
    std::optional<double> s;
    double w = 1.0;
    double u = 1.0;
};

struct TightnessRow {
    TightnessFamily family;
    TightnessPoint point;
    cplx value;
    double leading;
    std::optional<double> ratio;
};

// Leading magnitudes, constants included:
//   T_first s^p w eta / pi, V_first 2^p (w eta)^p s / n, sparse_T (u d)^p w d / pi, sparse_V (w d)^p u
inline double tightness_leading(TightnessFamily f, const TightnessPoint& pt, const TightnessScale& sc) {
    const double s = sc.s.value_or(pt.n), w = sc.w, u = sc.u, e = pt.eta, d = pt.d, p = pt.p;
    switch (f) {
    case TightnessFamily::T_first: return std::pow(s, p) * w * e / std::numbers::pi;
    case TightnessFamily::V_first: return std::pow(2.0 * w * e, p) * s / pt.n;
    case TightnessFamily::sparse_T: return std::pow(u * d, p) * w * d / std::numbers::pi;
    case TightnessFamily::sparse_V: return std::pow(w * d, p) * u;
    }
    return 0.0;
}

inline cplx tightness_value(TightnessFamily f, const TightnessPoint& pt, const TightnessScale& sc) {
    const double s = sc.s.value_or(pt.n);
    switch (f) {
    case TightnessFamily::T_first: return expectation_nested_T_first(pt.n, pt.eta, pt.p, s, sc.w);
    case TightnessFamily::V_first: return expectation_nested_V_first(pt.n, pt.eta, pt.p, s, sc.w);
    case TightnessFamily::sparse_T: return expectation_sparse_T_first(pt.n, pt.eta, pt.d, pt.p, sc.u, sc.w);
    case TightnessFamily::sparse_V: return expectation_sparse_V_first(pt.n, pt.eta, pt.d, pt.p, sc.u, sc.w);
    }
    return 0.0;
}

inline TightnessRow tightness_row(TightnessFamily f, const TightnessPoint& pt, const TightnessScale& sc = {}) {
    TightnessRow row{f, pt, tightness_value(f, pt, sc), tightness_leading(f, pt, sc), std::nullopt};
    if (row.leading > 0.0) row.ratio = std::abs(row.value) / row.leading;
    return row;
}

inline std::vector<TightnessRow> tightness_ratio_report(TightnessFamily f, const std::vector<TightnessPoint>& grid,
                                                        const TightnessScale& sc = {}) {
    std::vector<TightnessRow> rows;
    for (const auto& pt : grid) rows.push_back(tightness_row(f, pt, sc));
    return rows;
}

} // namespace fermitrot
