#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"

namespace fermitrot {

// Seeded generator. Draws are built from raw 64-bit words so streams match across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int below(int k) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(k)); }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    cplx complex_normal() {
        const double a = normal();
        return {a, normal()};
    }
    std::uint64_t next() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (auto& x : m.data()) x = rng.complex_normal();
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        m(r, r) = rng.normal();
        for (std::size_t c = r + 1; c < n; ++c) {
            m(r, c) = rng.complex_normal();
            m(c, r) = std::conj(m(r, c));
        }
    }
    return m;
}

inline ComplexMatrix random_unitary(std::size_t n, Rng& rng) { return unitary_from_hermitian(random_hermitian(n, rng), 1.0); }

} // namespace fermitrot
