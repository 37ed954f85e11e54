#pragma once

#include <cstdint>
#include <vector>

#include "hamiltonian.hpp"
#include "random.hpp"

namespace fermitrot {

// Dense instance: tau Hermitian and nu symmetric with entries uniform in [-1, 1] (real and imaginary parts).
inline CoefficientPair random_coefficients(int n, Rng& rng) {
    const auto un = static_cast<std::size_t>(n);
    ComplexMatrix tau(un, un);
    std::vector<double> nu(un * un, 0.0);
    for (std::size_t j = 0; j < un; ++j) {
        tau(j, j) = rng.uniform(-1, 1);
        for (std::size_t k = j + 1; k < un; ++k) {
            tau(j, k) = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            tau(k, j) = std::conj(tau(j, k));
        }
        for (std::size_t k = j; k < un; ++k) {
            nu[j * un + k] = rng.uniform(-1, 1);
            nu[k * un + j] = nu[j * un + k];
        }
    }
    return {std::move(tau), std::move(nu)};
}

// Cyclic offsets 1, -1, 2, -2, ... (plus 0 for odd d), so every row and column has exactly d nonzeros.
inline std::vector<int> sparse_offsets(int n, int d) {
    require(d >= 1 && d <= n, "sparsity must lie in [1, n]");
    std::vector<int> off;
    if (d % 2) off.push_back(0);
    for (int s = 1; static_cast<int>(off.size()) < d; ++s) {
        off.push_back(s);
        off.push_back(n - s);
    }
    return off;
}

inline CoefficientPair random_sparse_coefficients(int n, int d, Rng& rng) {
    const auto un = static_cast<std::size_t>(n);
    ComplexMatrix tau(un, un);
    std::vector<double> nu(un * un, 0.0);
    const auto off = sparse_offsets(n, d);
    for (int j = 0; j < n; ++j)
        for (int o : off) {
            const int k = (j + o) % n;
            if (k < j) continue;
            const auto uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
            if (k == j) {
                tau(uj, uj) = rng.uniform(-1, 1);
                nu[uj * un + uj] = rng.uniform(-1, 1);
                continue;
            }
            tau(uj, uk) = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            tau(uk, uj) = std::conj(tau(uj, uk));
            nu[uj * un + uk] = rng.uniform(-1, 1);
            nu[uk * un + uj] = nu[uj * un + uk];
        }
    return {std::move(tau), std::move(nu)};
}

} // namespace fermitrot
