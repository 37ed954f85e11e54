#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "commutator.hpp"
#include "config.hpp"
#include "fock.hpp"
#include "hamiltonian.hpp"

namespace fermitrot {

enum class Ruleset { standard, normal_ordered };

inline std::string to_string(Ruleset r) { return r == Ruleset::standard ? "standard" : "normal_ordered"; }

// gamma = 1: A_j^+ A_k with coefficient tau_jk; gamma = 0: N_j N_k with nu_jk.
struct IndexedTerm {
    int gamma;
    int j;
    int k;
};

// sign * ops[0] ops[1] ... ops.back(); the rightmost op acts first.
struct FermionicPath {
    int sign = 1;
    std::vector<ElementaryOp> ops;

    FermionicPath dagger() const {
        FermionicPath out{sign, {}};
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) out.ops.push_back(it->dagger());
        return out;
    }
};

namespace detail {

struct Replacement {
    int sign;
    std::vector<ElementaryOp> ops;
};

inline constexpr ElementaryOp cre(int m) { return {OpKind::creation, m}; }
inline constexpr ElementaryOp ann(int m) { return {OpKind::annihilation, m}; }
inline constexpr ElementaryOp num(int m) { return {OpKind::number, m}; }

// [H, op] as a signed list of op strings.
inline void commute_with(const IndexedTerm& h, const ElementaryOp& op, Ruleset rules, std::vector<Replacement>& out) {
    out.clear();
    const int x = op.mode;
    if (h.gamma == 1) {
        const int j = h.j, k = h.k;
        switch (op.kind) {
        case OpKind::creation:
            if (k == x) out.push_back({1, {cre(j)}});
            break;
        case OpKind::annihilation:
            if (j == x) out.push_back({-1, {ann(k)}});
            break;
        case OpKind::number:
            if (k == x) out.push_back({1, {cre(j), ann(k)}});
            if (j == x) out.push_back({-1, {cre(j), ann(k)}});
            break;
        }
        return;
    }
    const int l = h.j, m = h.k;
    if (op.kind == OpKind::number) return;
    const bool up = op.kind == OpKind::creation;
    const int s = up ? 1 : -1;
    if (rules == Ruleset::standard) {
        if (up) {
            if (m == x) out.push_back({1, {num(l), op}});
            if (l == x) out.push_back({1, {op, num(m)}});
        } else {
            if (m == x) out.push_back({-1, {num(l), op}});
            if (l == x) out.push_back({-1, {op, num(m)}});
        }
        return;
    }
    // normal ordered: N's left of A^+, right of A, with the doubly-indexed correction
    auto place = [&](int mode) {
        return up ? std::vector<ElementaryOp>{num(mode), op} : std::vector<ElementaryOp>{op, num(mode)};
    };
    if (m == x) out.push_back({s, place(l)});
    if (l == x) out.push_back({s, place(m)});
    if (l == x && m == x) out.push_back({-s, {op}});
}

inline std::vector<ElementaryOp> initial_ops(const IndexedTerm& h) {
    if (h.gamma == 1) return {cre(h.j), ann(h.k)};
    return {num(h.j), num(h.k)};
}

// Leibniz rule: [H, Y_1 ... Y_r] = sum_i Y_1 ... [H, Y_i] ... Y_r
inline void expand_layer(const IndexedTerm& h, const std::vector<FermionicPath>& in, Ruleset rules,
                         std::vector<FermionicPath>& out) {
    out.clear();
    std::vector<Replacement> reps;
    for (const auto& path : in) {
        for (std::size_t i = 0; i < path.ops.size(); ++i) {
            commute_with(h, path.ops[i], rules, reps);
            for (const auto& r : reps) {
                FermionicPath np{path.sign * r.sign, {}};
                np.ops.reserve(path.ops.size() + r.ops.size() - 1);
                np.ops.insert(np.ops.end(), path.ops.begin(), path.ops.begin() + static_cast<std::ptrdiff_t>(i));
                np.ops.insert(np.ops.end(), r.ops.begin(), r.ops.end());
                np.ops.insert(np.ops.end(), path.ops.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.ops.end());
                out.push_back(std::move(np));
            }
        }
    }
}

} // namespace detail

// terms are listed outermost first, matching GammaWord.
inline std::vector<FermionicPath> expand_paths(const std::vector<IndexedTerm>& terms, Ruleset rules) {
    require(terms.size() >= 2, "a commutator needs at least two terms");
    for (const auto& t : terms) require(t.gamma == 0 || t.gamma == 1, "term gamma must be 0 or 1");
    std::vector<FermionicPath> cur{{1, detail::initial_ops(terms.back())}}, next;
    for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
        detail::expand_layer(*it, cur, rules, next);
        std::swap(cur, next);
        if (cur.empty()) break;
    }
    return cur;
}

inline std::optional<SignedConfig> apply_path(const FermionicPath& path, const FermionConfig& c) {
    SignedConfig cur{c, path.sign};
    for (auto it = path.ops.rbegin(); it != path.ops.rend(); ++it) {
        auto r = apply_elementary(*it, cur.config);
        if (!r) return std::nullopt;
        cur.config = r->config;
        cur.sign *= r->sign;
    }
    return cur;
}

inline SectorOperator path_operator(const FermionicPath& path, const SectorPtr& domain) {
    int shift = 0;
    for (const auto& op : path.ops) shift += electron_shift(op.kind);
    const int eta2 = domain->eta() + shift;
    require(eta2 >= 0 && eta2 <= domain->n(), "path leaves the Fock space");
    SectorPtr codomain = shift == 0 ? domain : enumerate_sector(domain->n(), eta2);
    SectorOperator out(domain, codomain);
    for (std::size_t col = 0; col < domain->dim(); ++col)
        if (auto r = apply_path(path, domain->config(col)))
            out.matrix(codomain->index(r->config), col) += static_cast<double>(r->sign);
    return out;
}

// sum of signed path matrices
inline SectorOperator paths_operator(const std::vector<FermionicPath>& paths, const SectorPtr& s) {
    SectorOperator out = SectorOperator::zero(s);
    for (const auto& p : paths) out += path_operator(p, s);
    return out;
}

struct DegreeTable {
    SectorPtr sector;
    std::vector<double> degree;     // indexed like sector->configs()
    std::vector<double> site_paths; // paths whose rightmost op acts on each mode
    double total_paths = 0;
    std::size_t visits = 0;

    double max_degree() const { return degree.empty() ? 0.0 : *std::max_element(degree.begin(), degree.end()); }
};

struct EnumerationOptions {
    Ruleset rules = Ruleset::standard;
    std::size_t budget = default_tolerances().enumeration_budget;
    double support_threshold = default_tolerances().support_threshold;
    unsigned jobs = 1;
};

namespace detail {

inline std::vector<std::pair<int, int>> coefficient_support(const CoefficientPair& coeff, int gamma, double thr) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < coeff.n(); ++j)
        for (int k = 0; k < coeff.n(); ++k) {
            const double mag = gamma ? std::abs(coeff.tau(j, k)) : std::abs(coeff.nu(j, k));
            if (mag > thr) out.emplace_back(j, k);
        }
    return out;
}

class DegreeWalker {
  public:
    DegreeWalker(const GammaWord& g, const CoefficientPair& coeff, const SectorPtr& s, const EnumerationOptions& opt,
                 std::atomic<std::size_t>& visits)
        : g_(g), s_(s), opt_(opt), visits_(visits) {
        for (int q = 1; q <= g.order() + 1; ++q)
            supports_.push_back(coefficient_support(coeff, g.at(q), opt.support_threshold));
        table_.sector = s;
        table_.degree.assign(s->dim(), 0.0);
        table_.site_paths.assign(static_cast<std::size_t>(s->n()), 0.0);
        scratch_.resize(static_cast<std::size_t>(g.order() + 2));
    }

    const std::vector<std::pair<int, int>>& innermost() const { return supports_[0]; }

    void walk_from(const std::pair<int, int>& jk) {
        scratch_[1] = {{1, initial_ops({g_.at(1), jk.first, jk.second})}};
        charge(1);
        descend(2);
    }

    DegreeTable take() { return std::move(table_); }

  private:
    void charge(std::size_t n) {
        table_.visits += n;
        if (visits_.fetch_add(n) + n > opt_.budget)
            throw budget_exceeded("path enumeration exceeded the budget of " + std::to_string(opt_.budget) + " visits");
    }

    void descend(int q) {
        const int depth = g_.order() + 1;
        if (q > depth) {
            record(scratch_[static_cast<std::size_t>(depth)]);
            return;
        }
        const int gq = g_.at(q);
        for (const auto& [j, k] : supports_[static_cast<std::size_t>(q - 1)]) {
            auto& next = scratch_[static_cast<std::size_t>(q)];
            expand_layer({gq, j, k}, scratch_[static_cast<std::size_t>(q - 1)], opt_.rules, next);
            if (next.empty()) continue;
            charge(next.size());
            descend(q + 1);
        }
    }

    // Each nonzero <c'|P|c> adds 1/2 to both c and c', the symmetrized weight.
    void record(const std::vector<FermionicPath>& paths) {
        for (const auto& p : paths) {
            table_.total_paths += 1;
            table_.site_paths[static_cast<std::size_t>(p.ops.back().mode)] += 1;
            for (std::size_t i = 0; i < s_->dim(); ++i) {
                auto r = apply_path(p, s_->config(i));
                if (!r) continue;
                table_.degree[i] += 0.5;
                table_.degree[s_->index(r->config)] += 0.5;
            }
        }
    }

    const GammaWord& g_;
    SectorPtr s_;
    const EnumerationOptions& opt_;
    std::atomic<std::size_t>& visits_;
    std::vector<std::vector<std::pair<int, int>>> supports_; // supports_[q-1] for layer q
    std::vector<std::vector<FermionicPath>> scratch_;
    DegreeTable table_;
};

} // namespace detail

// Degrees of every configuration in the sector. Work is split over the innermost index pairs;
// partial tables are summed in a fixed order.
inline DegreeTable degree_table(const GammaWord& g, const CoefficientPair& coeff, int eta,
                                const EnumerationOptions& opt = {}) {
    const SectorPtr s = enumerate_sector(coeff.n(), eta);
    std::atomic<std::size_t> visits{0};
    const auto inner = detail::coefficient_support(coeff, g.at(1), opt.support_threshold);
    const unsigned jobs = std::max(1U, std::min<unsigned>(opt.jobs, static_cast<unsigned>(inner.size())));

    std::vector<DegreeTable> parts(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](unsigned w) {
        try {
            detail::DegreeWalker walker(g, coeff, s, opt, visits);
            for (std::size_t i = w; i < inner.size(); i += jobs) walker.walk_from(inner[i]);
            parts[w] = walker.take();
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    DegreeTable out;
    out.sector = s;
    out.degree.assign(s->dim(), 0.0);
    out.site_paths.assign(static_cast<std::size_t>(s->n()), 0.0);
    for (const auto& part : parts) {
        if (part.degree.empty()) continue;
        for (std::size_t i = 0; i < s->dim(); ++i) out.degree[i] += part.degree[i];
        for (std::size_t i = 0; i < out.site_paths.size(); ++i) out.site_paths[i] += part.site_paths[i];
        out.total_paths += part.total_paths;
        out.visits += part.visits;
    }
    return out;
}

inline double degree(const FermionConfig& c, const GammaWord& g, const CoefficientPair& coeff,
                     const EnumerationOptions& opt = {}) {
    require(c.n == coeff.n(), "config size does not match the coefficients");
    const DegreeTable t = degree_table(g, coeff, c.weight(), opt);
    return t.degree[t.sector->index(c)];
}

// ||tau||_max^{|g|} ||nu||_max^{p+1-|g|} max_c deg(c)
inline double path_bound(const GammaWord& g, const CoefficientPair& coeff, int eta, const EnumerationOptions& opt = {}) {
    const int p = g.order();
    return std::pow(coeff.tau_max(), g.weight()) * std::pow(coeff.nu_max(), p + 1 - g.weight()) *
           degree_table(g, coeff, eta, opt).max_degree();
}

struct SparseRegime {
    int d;
    int eta;
};
struct DenseRegime {
    int n;
    int eta;
    int gamma_weight;
};

inline double closed_form_counts(int p, const std::variant<SparseRegime, DenseRegime>& regime) {
    require(p >= 1, "order must be positive");
    double fact = 1.0;
    for (int i = 2; i <= p + 1; ++i) fact *= i;
    if (const auto* s = std::get_if<SparseRegime>(&regime))
        return s->eta * std::pow(2.0 * s->d, p + 1) * fact / 2.0;
    const auto& d = std::get<DenseRegime>(regime);
    return d.eta * std::pow(3.0, p) * fact * std::pow(d.n, d.gamma_weight) * std::pow(d.eta, p + 1 - d.gamma_weight);
}

} // namespace fermitrot
