#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "matrix.hpp"

namespace fermitrot {

using bitword = std::uint64_t;

inline constexpr int max_modes = 63;

// Occupation string |c_0 ... c_{n-1}>, bit j of the word is c_j.
struct FermionConfig {
    bitword bits = 0;
    int n = 0;

    int weight() const { return std::popcount(bits); }
    bool occupied(int j) const { return (bits >> j) & 1U; }

    static FermionConfig from_modes(int n, std::initializer_list<int> modes) {
        return from_modes(n, std::vector<int>(modes));
    }
    static FermionConfig from_modes(int n, const std::vector<int>& modes) {
        FermionConfig c{0, n};
        for (int m : modes) {
            require(m >= 0 && m < n, "mode index out of range");
            c.bits |= bitword{1} << m;
        }
        return c;
    }
    // Ket text, mode 0 leftmost.
    std::string ket() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int j = 0; j < n; ++j)
            if (occupied(j)) s[static_cast<std::size_t>(j)] = '1';
        return s;
    }

    friend bool operator==(const FermionConfig&, const FermionConfig&) = default;
};

struct SignedConfig {
    FermionConfig config;
    int sign = 1;
};

// (-1)^{c_0 + ... + c_{j-1}}
inline int parity_sign(bitword bits, int j) {
    const bitword below = j == 0 ? 0 : bits & ((bitword{1} << j) - 1);
    return (std::popcount(below) & 1) ? -1 : 1;
}

inline std::optional<SignedConfig> apply_creation(int j, const FermionConfig& c) {
    require(j >= 0 && j < c.n, "mode index out of range");
    if (c.occupied(j)) return std::nullopt;
    return SignedConfig{{c.bits | (bitword{1} << j), c.n}, parity_sign(c.bits, j)};
}

inline std::optional<SignedConfig> apply_annihilation(int j, const FermionConfig& c) {
    require(j >= 0 && j < c.n, "mode index out of range");
    if (!c.occupied(j)) return std::nullopt;
    return SignedConfig{{c.bits & ~(bitword{1} << j), c.n}, parity_sign(c.bits, j)};
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

class SectorBasis {
  public:
    SectorBasis(int n, int eta, std::size_t dim_cap = default_tolerances().sector_dim_cap) : n_(n), eta_(eta) {
        require(n >= 0 && n <= max_modes, "mode count out of range");
        require(eta >= 0 && eta <= n, "electron count out of range");
        const double dim = binomial(n, eta);
        if (dim > static_cast<double>(dim_cap))
            throw budget_exceeded("sector (" + std::to_string(n) + ", " + std::to_string(eta) + ") has dimension " +
                                  std::to_string(static_cast<long long>(dim)) + " above the cap " +
                                  std::to_string(dim_cap));

        for (int i = 0; i <= n; ++i) {
            choose_.emplace_back(static_cast<std::size_t>(eta + 1), 0);
            for (int k = 0; k <= eta; ++k) choose_.back()[static_cast<std::size_t>(k)] =
                static_cast<std::size_t>(binomial(i, k));
        }

        configs_.reserve(static_cast<std::size_t>(dim));
        if (eta == 0) {
            configs_.push_back(0);
            return;
        }
        // Gosper's hack walks same-weight words in increasing order.
        bitword w = (bitword{1} << eta) - 1;
        const bitword limit = bitword{1} << n;
        while (w < limit) {
            configs_.push_back(w);
            const bitword lowest = w & (~w + 1);
            const bitword ripple = w + lowest;
            w = (((ripple ^ w) >> 2) / lowest) | ripple;
        }
    }

    int n() const { return n_; }
    int eta() const { return eta_; }
    std::size_t dim() const { return configs_.size(); }
    const std::vector<bitword>& configs() const { return configs_; }
    FermionConfig config(std::size_t i) const { return {configs_[i], n_}; }

    // Colex rank. Increasing integer order of fixed-weight words is colex order of their mode sets.
    std::size_t index(bitword bits) const {
        require(std::popcount(bits) == eta_ && (n_ == 64 || bits >> n_ == 0), "config is not in this sector");
        std::size_t rank = 0;
        int i = 1;
        while (bits) {
            const int pos = std::countr_zero(bits);
            rank += choose_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(i)];
            bits &= bits - 1;
            ++i;
        }
        return rank;
    }
    std::size_t index(const FermionConfig& c) const { return index(c.bits); }

    friend bool operator==(const SectorBasis& a, const SectorBasis& b) { return a.n_ == b.n_ && a.eta_ == b.eta_; }

  private:
    int n_;
    int eta_;
    std::vector<bitword> configs_;
    std::vector<std::vector<std::size_t>> choose_;
};

using SectorPtr = std::shared_ptr<const SectorBasis>;

inline SectorPtr enumerate_sector(int n, int eta) { return std::make_shared<const SectorBasis>(n, eta); }

// Dense matrix of a fermionic operator from the domain sector to the codomain sector.
struct SectorOperator {
    SectorPtr domain;
    SectorPtr codomain;
    ComplexMatrix matrix;

    SectorOperator() = default;
    SectorOperator(SectorPtr dom, SectorPtr cod)
        : domain(std::move(dom)), codomain(std::move(cod)), matrix(codomain->dim(), domain->dim()) {}
    SectorOperator(SectorPtr dom, SectorPtr cod, ComplexMatrix m)
        : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(m)) {
        require(matrix.rows() == codomain->dim() && matrix.cols() == domain->dim(),
                "operator matrix does not match its sectors");
    }

    static SectorOperator identity(const SectorPtr& s) { return {s, s, ComplexMatrix::identity(s->dim())}; }
    static SectorOperator zero(const SectorPtr& s) { return {s, s}; }

    bool number_preserving() const { return *domain == *codomain; }

    SectorOperator adjoint() const { return {codomain, domain, matrix.adjoint()}; }

    SectorOperator& operator+=(const SectorOperator& o) {
        check_same_sectors(o);
        matrix += o.matrix;
        return *this;
    }
    SectorOperator& operator-=(const SectorOperator& o) {
        check_same_sectors(o);
        matrix -= o.matrix;
        return *this;
    }
    SectorOperator& operator*=(cplx s) {
        matrix *= s;
        return *this;
    }
    friend SectorOperator operator+(SectorOperator a, const SectorOperator& b) { return a += b; }
    friend SectorOperator operator-(SectorOperator a, const SectorOperator& b) { return a -= b; }
    friend SectorOperator operator*(SectorOperator a, cplx s) { return a *= s; }
    friend SectorOperator operator*(cplx s, SectorOperator a) { return a *= s; }

    // Composition: (a * b) applies b first.
    friend SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
        require(*a.domain == *b.codomain, "operators are not composable");
        return {b.domain, a.codomain, a.matrix * b.matrix};
    }

  private:
    void check_same_sectors(const SectorOperator& o) const {
        require(*domain == *o.domain && *codomain == *o.codomain, "operators act on different sectors");
    }
};

inline SectorOperator commutator(const SectorOperator& a, const SectorOperator& b) { return a * b - b * a; }

enum class OpKind { creation, annihilation, number };

struct ElementaryOp {
    OpKind kind;
    int mode;

    ElementaryOp dagger() const {
        switch (kind) {
        case OpKind::creation: return {OpKind::annihilation, mode};
        case OpKind::annihilation: return {OpKind::creation, mode};
        default: return *this;
        }
    }
    friend bool operator==(const ElementaryOp&, const ElementaryOp&) = default;
};

inline std::optional<SignedConfig> apply_elementary(const ElementaryOp& op, const FermionConfig& c) {
    switch (op.kind) {
    case OpKind::creation: return apply_creation(op.mode, c);
    case OpKind::annihilation: return apply_annihilation(op.mode, c);
    case OpKind::number:
        require(op.mode >= 0 && op.mode < c.n, "mode index out of range");
        if (!c.occupied(op.mode)) return std::nullopt;
        return SignedConfig{c, 1};
    }
    return std::nullopt;
}

inline int electron_shift(OpKind k) { return k == OpKind::creation ? 1 : k == OpKind::annihilation ? -1 : 0; }

// Builds column by column from the single-config action, then stays dense.
inline SectorOperator elementary_operator(const ElementaryOp& op, const SectorPtr& domain) {
    const int eta2 = domain->eta() + electron_shift(op.kind);
    require(eta2 >= 0 && eta2 <= domain->n(), "elementary operator leaves the Fock space");
    SectorPtr codomain = eta2 == domain->eta() ? domain : enumerate_sector(domain->n(), eta2);
    SectorOperator out(domain, codomain);
    for (std::size_t col = 0; col < domain->dim(); ++col) {
        if (auto r = apply_elementary(op, domain->config(col)))
            out.matrix(codomain->index(r->config), col) = static_cast<double>(r->sign);
    }
    return out;
}

inline SectorOperator creation_op(int j, const SectorPtr& d) { return elementary_operator({OpKind::creation, j}, d); }
inline SectorOperator annihilation_op(int j, const SectorPtr& d) {
    return elementary_operator({OpKind::annihilation, j}, d);
}
inline SectorOperator number_op(int j, const SectorPtr& d) { return elementary_operator({OpKind::number, j}, d); }

inline SectorOperator total_number(const SectorPtr& s) {
    SectorOperator out = SectorOperator::zero(s);
    for (std::size_t i = 0; i < s->dim(); ++i) out.matrix(i, i) = std::popcount(s->configs()[i]);
    return out;
}

// A_j^dagger A_k on a sector, built directly.
inline SectorOperator hopping_op(int j, int k, const SectorPtr& s) {
    SectorOperator out = SectorOperator::zero(s);
    for (std::size_t col = 0; col < s->dim(); ++col) {
        auto a = apply_annihilation(k, s->config(col));
        if (!a) continue;
        auto b = apply_creation(j, a->config);
        if (!b) continue;
        out.matrix(s->index(b->config), col) = static_cast<double>(a->sign * b->sign);
    }
    return out;
}

} // namespace fermitrot
