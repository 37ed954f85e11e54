#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "config.hpp"
#include "fock.hpp"
#include "hamiltonian.hpp"
#include "linalg.hpp"

namespace fermitrot {

enum class Generator { T, V };

struct FormulaStage {
    Generator generator;
    double weight;
};

struct ProductFormula {
    int order = 1;
    std::vector<FormulaStage> stages; // leftmost factor first
};

namespace detail {

inline void push_merged(std::vector<FormulaStage>& out, FormulaStage st) {
    if (!out.empty() && out.back().generator == st.generator) out.back().weight += st.weight;
    else out.push_back(st);
}

inline std::vector<FormulaStage> suzuki(int p) {
    if (p == 2) return {{Generator::V, 0.5}, {Generator::T, 1.0}, {Generator::V, 0.5}};
    const int k = p / 2;
    const double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2 * k - 1)));
    const auto inner = suzuki(p - 2);
    std::vector<FormulaStage> out;
    auto append = [&](double scale) {
        for (const auto& st : inner) push_merged(out, {st.generator, st.weight * scale});
    };
    append(u);
    append(u);
    append(1.0 - 4.0 * u);
    append(u);
    append(u);
    return out;
}

} // namespace detail

inline ProductFormula build_formula(int p) {
    require(p == 1 || (p >= 2 && p % 2 == 0), "product formula order must be 1 or even");
    require(p <= 12, "product formula order above 12 is not supported");
    if (p == 1) return {1, {{Generator::T, 1.0}, {Generator::V, 1.0}}};
    return {p, detail::suzuki(p)};
}

// Sector data reused across stages and steps.
class SplitEvolution {
  public:
    SplitEvolution(const SectorOperator& T, const SectorOperator& V) {
        require(T.number_preserving() && V.number_preserving() && *T.domain == *V.domain,
                "T and V must act on the same sector");
        t_eig_ = hermitian_eig(T.matrix);
        h_eig_ = hermitian_eig(T.matrix + V.matrix);
        const std::size_t n = V.matrix.rows();
        v_diag_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && V.matrix(i, j) != cplx{}) throw invalid_input("V must be diagonal in the configuration basis");
            v_diag_[i] = V.matrix(i, i).real();
        }
    }

    // Ordered product of e^{-i w t X} over the stages.
    ComplexMatrix step(const ProductFormula& f, double t) const {
        const std::size_t dim = v_diag_.size();
        ComplexMatrix u = ComplexMatrix::identity(dim);
        for (const auto& st : f.stages) {
            if (st.generator == Generator::T) {
                u = u * unitary_from_eig(t_eig_, st.weight * t);
            } else {
                for (std::size_t c = 0; c < dim; ++c) {
                    const cplx ph = std::polar(1.0, -st.weight * t * v_diag_[c]);
                    for (std::size_t r = 0; r < dim; ++r) u(r, c) *= ph;
                }
            }
        }
        return u;
    }

    ComplexMatrix evolve(const ProductFormula& f, double t, int r) const {
        require(r >= 1, "step count must be positive");
        const ComplexMatrix one = step(f, t / r);
        ComplexMatrix u = one;
        for (int i = 1; i < r; ++i) u = u * one;
        return u;
    }

    ComplexMatrix exact(double t) const { return unitary_from_eig(h_eig_, t); }

  private:
    HermitianEig t_eig_;
    HermitianEig h_eig_;
    std::vector<double> v_diag_;
};

inline SectorOperator apply_formula(const ProductFormula& f, const SectorOperator& T, const SectorOperator& V, double t) {
    const SplitEvolution ev(T, V);
    return {T.domain, T.domain, ev.step(f, t)};
}

inline SectorOperator exact_evolution(const SectorOperator& H, double t) {
    return {H.domain, H.domain, unitary_from_hermitian(H.matrix, t)};
}

// ||S_p(t/r)^r - e^{-itH}||_eta
inline double trotter_error(const ProductFormula& f, const SplitEvolution& ev, double t, int r) {
    return spectral_norm(ev.evolve(f, t, r) - ev.exact(t));
}

inline double trotter_error(int p, const CoefficientPair& coeff, int eta, double t, int r) {
    const SectorPtr s = enumerate_sector(coeff.n(), eta);
    const auto h = assemble(coeff, s);
    return trotter_error(build_formula(p), SplitEvolution(h.T, h.V), t, r);
}

// Least-squares slope of log(error) against log(t).
inline double fit_error_order(const std::vector<double>& ts, const std::vector<double>& errors) {
    require(ts.size() == errors.size() && ts.size() >= 2, "need at least two matching samples");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        require(ts[i] > 0.0 && errors[i] > 0.0, "slope fit needs positive samples");
        x.push_back(std::log(ts[i]));
        y.push_back(std::log(errors[i]));
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    require(sxx > 0.0, "slope fit needs distinct times");
    return sxy / sxx;
}

} // namespace fermitrot
