#pragma once

#include <cmath>
#include <map>
#include <string>

#include "commutator.hpp"
#include "config.hpp"
#include "seminorm.hpp"

namespace fermitrot {

// Unit-constant scaling values, not certified bounds.

// (||tau|| + ||nu||_max eta)^{p-1} ||tau|| ||nu||_max eta^2 t^{p+1}
inline double scaling_bound_general(int p, double spec_tau, double max_nu, int eta, double t) {
    require(p >= 1, "order must be positive");
    const double e = eta;
    return std::pow(spec_tau + max_nu * e, p - 1) * spec_tau * max_nu * e * e * std::pow(t, p + 1);
}

// (||tau||_max + ||nu||_max)^{p-1} ||tau||_max ||nu||_max d^{p+1} eta t^{p+1}
inline double scaling_bound_sparse(int p, double max_tau, double max_nu, int d, int eta, double t) {
    require(p >= 1, "order must be positive");
    return std::pow(max_tau + max_nu, p - 1) * max_tau * max_nu * std::pow(d, p + 1) * eta * std::pow(t, p + 1);
}

// (n ||tau||_max + ||nu||_max eta)^{p-1} ||tau||_max ||nu||_max n eta^2 t^{p+1}
inline double scaling_bound_path_dense(int p, double max_tau, double max_nu, int n, int eta, double t) {
    require(p >= 1, "order must be positive");
    const double e = eta;
    return std::pow(n * max_tau + max_nu * e, p - 1) * max_tau * max_nu * n * e * e * std::pow(t, p + 1);
}

// Certified: seminorms taken under the integral error representations.
inline double rigorous_bound_low_order(int p, const SectorOperator& T, const SectorOperator& V, double t) {
    require(t >= 0.0, "time must be nonnegative");
    if (p == 1) return t * t / 2.0 * fermionic_seminorm(commutator(T, V));
    if (p == 2) {
        const double ttv = fermionic_seminorm(nested_commutator(GammaWord({1, 1, 0}), T, V));
        const double vvt = fermionic_seminorm(nested_commutator(GammaWord({0, 0, 1}), T, V));
        return t * t * t / 6.0 * (0.5 * ttv + 0.25 * vvt);
    }
    throw invalid_input("rigorous bound is available for p = 1 and p = 2 only");
}

// max over gamma of ||[...]||_eta t^{p+1}
inline double commutator_scaling(int p, const SectorOperator& T, const SectorOperator& V, double t) {
    double m = 0.0;
    for (const auto& g : gamma_enumeration(p)) m = std::max(m, fermionic_seminorm(nested_commutator(g, T, V)));
    return m * std::pow(t, p + 1);
}

struct BoundParams {
    double spec_tau = 0.0;
    double max_tau = 0.0;
    double max_nu = 0.0;
    int n = 0;
    int eta = 0;
    int d = 0;
};

enum class BoundFamily { general, sparse, path_dense, plane_wave, hubbard };

inline BoundFamily parse_bound_family(const std::string& s) {
    static const std::map<std::string, BoundFamily> names{{"general", BoundFamily::general},
                                                          {"sparse", BoundFamily::sparse},
                                                          {"path_dense", BoundFamily::path_dense},
                                                          {"plane_wave", BoundFamily::plane_wave},
                                                          {"hubbard", BoundFamily::hubbard}};
    const auto it = names.find(s);
    if (it == names.end()) throw invalid_input("unknown bound family '" + s + "'");
    return it->second;
}

inline std::string to_string(BoundFamily f) {
    switch (f) {
    case BoundFamily::general: return "general";
    case BoundFamily::sparse: return "sparse";
    case BoundFamily::path_dense: return "path_dense";
    case BoundFamily::plane_wave: return "plane_wave";
    case BoundFamily::hubbard: return "hubbard";
    }
    return "";
}

// Commutator prefactor C of an error C t^{p+1}; r = (C / eps)^{1/p} t^{1+1/p}.
inline double step_count_prefactor(int p, BoundFamily family, const BoundParams& b) {
    const double n = b.n, eta = b.eta;
    switch (family) {
    case BoundFamily::general: return scaling_bound_general(p, b.spec_tau, b.max_nu, b.eta, 1.0);
    case BoundFamily::sparse: return scaling_bound_sparse(p, b.max_tau, b.max_nu, b.d, b.eta, 1.0);
    case BoundFamily::path_dense: return scaling_bound_path_dense(p, b.max_tau, b.max_nu, b.n, b.eta, 1.0);
    case BoundFamily::plane_wave: {
        // ||tau|| ~ n^{2/3}/eta^{2/3}, ||nu||_max ~ n^{1/3}/eta^{1/3} at omega = eta
        require(b.n > 0 && b.eta > 0, "plane-wave step count needs n and eta");
        const double x = std::cbrt(n * n / (eta * eta)) + std::cbrt(n * eta * eta);
        return std::pow(x, p) * std::cbrt(n * eta * eta);
    }
    case BoundFamily::hubbard: return eta;
    }
    return 0.0;
}

inline long long step_count(int p, BoundFamily family, const BoundParams& b, double t, double eps) {
    require(p >= 1, "order must be positive");
    require(eps > 0.0, "target error must be positive");
    require(t >= 0.0, "time must be nonnegative");
    const double r = std::pow(step_count_prefactor(p, family, b) / eps, 1.0 / p) * std::pow(t, 1.0 + 1.0 / p);
    if (!std::isfinite(r) || r > 9.0e18) throw numerical_failure("step count overflows");
    // guard against 16^{1/4} landing a hair above 2
    const double rounded = std::ceil(r * (1.0 - 1e-12));
    return std::max(1LL, static_cast<long long>(rounded));
}

struct GateComplexity {
    double r;
    double g;
};

// r = (n^{2/3}/eta^{2/3} + n^{1/3} eta^{2/3}) n^{1/p}, g = (n^{5/3}/eta^{2/3} + n^{4/3} eta^{2/3}) n^{1/p} log n
inline GateComplexity gate_complexity_planewave(int n, int eta, int p) {
    require(n >= 2 && eta >= 1 && p >= 1, "gate complexity needs n >= 2, eta >= 1, p >= 1");
    const double nn = n, e = eta;
    const double r = (std::cbrt(nn * nn / (e * e)) + std::cbrt(nn * e * e)) * std::pow(nn, 1.0 / p);
    const double g = (std::cbrt(std::pow(nn, 5) / (e * e)) + std::cbrt(std::pow(nn, 4) * e * e)) *
                     std::pow(nn, 1.0 / p) * std::log(nn);
    return {r, g};
}

} // namespace fermitrot
