#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fermitrot {

inline constexpr const char* version = "0.3.1";

// Every numerical threshold in the library lives here.
struct Tolerances {
    // Jacobi stops once the off-diagonal Frobenius norm falls below this times ||A||_F.
    double jacobi_offdiag = 1e-12;
    int jacobi_max_sweeps = 100;

    int radius_grid = 64;
    int radius_golden_steps = 40;

    // coefficient entries below this magnitude are outside the path-counting support
    double support_threshold = 1e-14;

    double hermitian_check = 1e-12;
    double unitarity_check = 1e-9;

    std::size_t sector_dim_cap = 20000;
    std::size_t enumeration_budget = 10'000'000;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

// Bad arguments and malformed configs. The CLI maps these to exit code 2.
class invalid_input : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Exit code 3.
class budget_exceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Exit code 4.
class numerical_failure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

} // namespace fermitrot
