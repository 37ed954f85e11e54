#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace fermitrot {

// ||X||_eta: the spectral norm of X restricted to the eta-electron sector.
inline double fermionic_seminorm(const SectorOperator& x) {
    if (!x.number_preserving())
        throw invalid_input("the seminorm is only defined for number-preserving operators");
    return spectral_norm(x.matrix);
}

// max over eta-electron states of |<psi|X|psi>|
inline double max_expectation(const SectorOperator& x) {
    if (!x.number_preserving())
        throw invalid_input("max_expectation is only defined for number-preserving operators");
    return numerical_radius(x.matrix);
}

struct AxiomResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
};

struct AxiomReport {
    std::vector<AxiomResult> results;
    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return true;
    }
};

// Homogeneity, triangle, submultiplicativity, ||I|| = 1, unitary invariance, adjoint invariance.
inline AxiomReport seminorm_axiom_check(const SectorOperator& x, const SectorOperator& y, cplx lambda,
                                        std::uint64_t seed = 1, double tol = 1e-9) {
    AxiomReport rep;
    const double nx = fermionic_seminorm(x), ny = fermionic_seminorm(y);
    const double scale = std::max({1.0, nx, ny});
    auto add = [&](std::string name, double slack) {
        // slack <= 0 means the inequality holds
        rep.results.push_back({std::move(name), slack <= tol * scale * scale, std::max(0.0, slack)});
    };

    add("homogeneity", std::abs(fermionic_seminorm(x * lambda) - std::abs(lambda) * nx));
    add("triangle", fermionic_seminorm(x + y) - nx - ny);
    add("submultiplicativity", fermionic_seminorm(x * y) - nx * ny);
    add("identity", std::abs(fermionic_seminorm(SectorOperator::identity(x.domain)) - 1.0));

    Rng rng(seed);
    const auto dim = x.domain->dim();
    const SectorOperator u{x.domain, x.domain, random_unitary(dim, rng)};
    const SectorOperator w{x.domain, x.domain, random_unitary(dim, rng)};
    add("unitary_invariance", std::abs(fermionic_seminorm(u * x * w) - nx));
    add("adjoint_invariance", std::abs(fermionic_seminorm(x.adjoint()) - nx));
    return rep;
}

} // namespace fermitrot
