// Acceptance run: one PASS/FAIL line per criterion, with the measured quantity and the wall time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fermitrot/bounds.hpp"
#include "fermitrot/commutator.hpp"
#include "fermitrot/instances.hpp"
#include "fermitrot/pathcount.hpp"
#include "fermitrot/seminorm.hpp"
#include "fermitrot/tightness.hpp"
#include "fermitrot/trotter.hpp"
#include "oracle/paths.hpp"

using namespace fermitrot;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

SectorOperator random_op(const SectorPtr& s, Rng& rng) { return {s, s, random_matrix(s->dim(), s->dim(), rng)}; }

// ---- 1: algebra ----

Outcome algebra() {
    const double tol = 1e-12;
    double car = 0.0, rel = 0.0, number = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (int eta = 0; eta <= n; ++eta) {
            const auto s = enumerate_sector(n, eta);
            const auto id = SectorOperator::identity(s);
            SectorOperator total = SectorOperator::zero(s);
            for (int j = 0; j < n; ++j) total += number_op(j, s);
            number = std::max(number, max_abs_diff(total.matrix, id.matrix * cplx(eta)));
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    // A_j^+ A_k + A_k A_j^+ = d_jk
                    SectorOperator anti = hopping_op(j, k, s);
                    if (eta < n) anti += annihilation_op(k, enumerate_sector(n, eta + 1)) * creation_op(j, s);
                    if (j == k) anti -= id;
                    car = std::max(car, anti.matrix.max_abs());
                    if (eta + 2 <= n) {
                        const auto up = enumerate_sector(n, eta + 1);
                        car = std::max(car, (creation_op(j, up) * creation_op(k, s) + creation_op(k, up) * creation_op(j, s))
                                                .matrix.max_abs());
                    }
                    if (eta >= 2) {
                        const auto down = enumerate_sector(n, eta - 1);
                        car = std::max(car, (annihilation_op(j, down) * annihilation_op(k, s) +
                                             annihilation_op(k, down) * annihilation_op(j, s))
                                                .matrix.max_abs());
                    }
                    if (eta == 0 || eta == n) continue;
                    const auto up = enumerate_sector(n, eta + 1), down = enumerate_sector(n, eta - 1);
                    for (int l = 0; l < n; ++l) {
                        SectorOperator d = hopping_op(j, k, up) * creation_op(l, s) - creation_op(l, s) * hopping_op(j, k, s);
                        rel = std::max(rel, max_abs_diff(d.matrix, (creation_op(j, s) * cplx(k == l)).matrix));
                        d = hopping_op(j, k, down) * annihilation_op(l, s) - annihilation_op(l, s) * hopping_op(j, k, s);
                        rel = std::max(rel, max_abs_diff(d.matrix, (annihilation_op(k, s) * cplx(-(j == l))).matrix));
                        d = commutator(hopping_op(j, k, s), number_op(l, s));
                        rel = std::max(rel, max_abs_diff(d.matrix, (hopping_op(j, k, s) * cplx((k == l) - (j == l))).matrix));
                        rel = std::max(rel, commutator(number_op(j, s), number_op(l, s)).matrix.max_abs());
                    }
                }
        }
    return {car <= tol && rel <= tol && number <= tol,
            "anticommutators " + num(car) + ", commutation relations " + num(rel) + ", total number " + num(number)};
}

// ---- 2: oracle ----

Outcome oracle_equivalence() {
    Rng rng(2);
    double worst = 0.0;
    auto track = [&](const ComplexMatrix& got, const ComplexMatrix& want) {
        worst = std::max(worst, max_abs_diff(got, want) / std::max(1.0, want.max_abs()));
    };
    std::vector<CoefficientPair> cases;
    for (int n = 1; n <= 4; ++n) {
        cases.push_back(random_coefficients(n, rng));
        cases.push_back(random_sparse_coefficients(n, std::min(n, 2), rng));
    }
    cases.push_back(fermi_hubbard({2}, 1.0, 4.0, false));
    for (const auto& c : cases) {
        const int n = c.n();
        ComplexMatrix tf, vf;
        const ComplexMatrix hf = oracle::hamiltonian(n, c.tau(), c.nu(), &tf, &vf);
        for (int eta = 0; eta <= n; ++eta) {
            const auto h = assemble(c, enumerate_sector(n, eta));
            track(h.T.matrix, oracle::project(tf, n, eta));
            track(h.V.matrix, oracle::project(vf, n, eta));
            track(h.H.matrix, oracle::project(hf, n, eta));
            for (int p = 1; p <= 3; ++p)
                for (const auto& g : gamma_enumeration(p)) {
                    ComplexMatrix x = g.at(1) ? tf : vf;
                    for (int q = 2; q <= p + 1; ++q) x = commutator(g.at(q) ? tf : vf, x);
                    track(nested_commutator(g, h.T, h.V).matrix, oracle::project(x, n, eta));
                }
        }
    }
    // path expansions of indexed-term commutators
    for (int n = 2; n <= 4; ++n)
        for (auto rules : {Ruleset::standard, Ruleset::normal_ordered})
            for (int p = 1; p <= 2; ++p)
                for (const auto& g : gamma_enumeration(p))
                    for (int trial = 0; trial < 6; ++trial) {
                        std::vector<IndexedTerm> terms;
                        for (int b : g.bits())
                            terms.push_back({b, static_cast<int>(rng.next() % static_cast<unsigned>(n)),
                                             static_cast<int>(rng.next() % static_cast<unsigned>(n))});
                        // innermost term last
                        auto full = [&](const IndexedTerm& t) {
                            return t.gamma ? oracle::creation(n, t.j) * oracle::annihilation(n, t.k)
                                           : oracle::number(n, t.j) * oracle::number(n, t.k);
                        };
                        ComplexMatrix x = full(terms.back());
                        for (int i = static_cast<int>(terms.size()) - 2; i >= 0; --i) x = commutator(full(terms[static_cast<std::size_t>(i)]), x);
                        const auto paths = expand_paths(terms, rules);
                        for (int eta = 0; eta <= n; ++eta)
                            track(paths_operator(paths, enumerate_sector(n, eta)).matrix, oracle::project(x, n, eta));
                    }
    return {worst <= 1e-12, "max scaled deviation " + num(worst)};
}

// ---- 3: seminorm ----

Outcome seminorm_suite() {
    const double tol = 1e-6;
    Rng rng(3);
    int failures = 0, operators = 0;
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
        for (int eta = 0; eta <= n; ++eta) {
            const auto s = enumerate_sector(n, eta);
            for (int trial = 0; trial < 100; ++trial, ++operators) {
                const auto x = random_op(s, rng), y = random_op(s, rng);
                const auto rep = seminorm_axiom_check(x, y, rng.complex_normal(), rng.next(), tol);
                bool ok = rep.all_passed();
                for (const auto& r : rep.results) worst = std::max(worst, r.residual);
                const double nx = fermionic_seminorm(x);
                const double sq = std::abs(fermionic_seminorm(x.adjoint() * x) - nx * nx);
                worst = std::max(worst, sq / std::max(1.0, nx * nx));
                ok = ok && sq <= tol * std::max(1.0, nx * nx);
                const double w = max_expectation(x);
                ok = ok && w <= nx + tol * std::max(1.0, nx) && nx <= 2 * w + tol * std::max(1.0, nx);
                failures += ok ? 0 : 1;
            }
        }
    const auto s = enumerate_sector(2, 1);
    const auto a = hopping_op(0, 1, s);
    const double tn = fermionic_seminorm(a), tw = max_expectation(a);
    const bool tight = std::abs(tn - 1.0) <= 1e-7 && std::abs(tw - 0.5) <= 1e-7;
    return {failures == 0 && tight, std::to_string(operators) + " operators, " + std::to_string(failures) +
                                        " failing, max residual " + num(worst) + ", tight case (" + num(tn) + ", " +
                                        num(tw) + ")"};
}

// ---- 4: lemmas ----

Outcome lemma_suite() {
    Rng rng(4);
    int cauchy = 0, diag = 0, holder = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4, eta = 1 + trial % (n - 1);
        const auto s = enumerate_sector(n, eta), up = enumerate_sector(n, eta + 1), down = enumerate_sector(n, eta - 1);
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 4);
        std::vector<SectorOperator> bs, cs, bc, cc;
        for (std::size_t i = 0; i < m; ++i) {
            bs.push_back(random_op(s, rng));
            cs.push_back(random_op(s, rng));
            const int mode = static_cast<int>(i % static_cast<std::size_t>(n));
            bc.push_back(trial % 2 ? annihilation_op(mode, s) * random_op(s, rng) : creation_op(mode, s) * random_op(s, rng));
            cc.push_back(random_op(trial % 2 ? down : up, rng));
        }
        // number-preserving lists and electron-number-changing lists alternate
        cauchy += lemma_cauchy_check(trial % 3 ? bs : bc, trial % 3 ? cs : cc, 1e-9) ? 0 : 1;
        diag += lemma_diagonalization_check(random_hermitian(m, rng), trial % 3 ? bs : bc, 1e-9) ? 0 : 1;
        holder += lemma_holder_check(trial % 3 ? bs : bc, trial % 3 ? cs : cc, 1e-9) ? 0 : 1;
    }
    return {cauchy + diag + holder == 0, "failures: Cauchy-Schwarz " + std::to_string(cauchy) + ", diagonalization " +
                                             std::to_string(diag) + ", Hoelder " + std::to_string(holder) + " (of 100 each)"};
}

// ---- 5: order scaling ----

Outcome order_scaling() {
    Rng rng(5);
    const std::vector<double> ts{0.02, 0.04, 0.06, 0.08, 0.1};
    bool ok = true;
    std::ostringstream detail;
    for (int p : {1, 2, 4}) {
        const double band = p <= 2 ? 0.15 : 0.3;
        double lo = 1e9, hi = -1e9;
        for (int i = 0; i < 5; ++i) {
            const auto c = random_coefficients(6, rng);
            const auto h = assemble(c, enumerate_sector(6, 3));
            const SplitEvolution ev(h.T, h.V);
            std::vector<double> es;
            for (double t : ts) es.push_back(trotter_error(build_formula(p), ev, t, 1));
            const double slope = fit_error_order(ts, es);
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
            ok = ok && std::abs(slope - (p + 1)) <= band;
        }
        detail << "p=" << p << " slopes [" << num(lo) << ", " << num(hi) << "] ";
    }
    return {ok, detail.str()};
}

// ---- 6: certified dominance ----

Outcome certified_dominance() {
    Rng rng(6);
    std::vector<std::pair<CoefficientPair, int>> cases;
    for (int i = 0; i < 30; ++i) {
        const int n = 3 + i % 4;
        cases.emplace_back(random_coefficients(n, rng), 1 + i % (n - 1));
    }
    cases.emplace_back(fermi_hubbard({2, 2}, 1.0, 4.0, false), 4);
    cases.emplace_back(fermi_hubbard({3}, 1.0, 2.0, true), 3);
    cases.emplace_back(random_sparse_coefficients(6, 2, rng), 3);
    int checked = 0, violations = 0;
    double max_ratio = 0.0;
    for (const auto& [c, eta] : cases) {
        const auto h = assemble(c, enumerate_sector(c.n(), eta));
        const SplitEvolution ev(h.T, h.V);
        for (int p : {1, 2})
            for (double t : {0.01, 0.05, 0.1, 0.2, 0.5, 1.0}) {
                const double e = trotter_error(build_formula(p), ev, t, 1), b = rigorous_bound_low_order(p, h.T, h.V, t);
                ++checked;
                if (b > 0) max_ratio = std::max(max_ratio, e / b);
                violations += e <= b * (1 + 1e-9) ? 0 : 1;
            }
    }
    return {violations == 0, std::to_string(checked) + " checks, " + std::to_string(violations) +
                                 " violations, max measured/bound " + num(max_ratio)};
}

// ---- 7: scaling-bound dominance ----

Outcome scaling_dominance() {
    std::vector<double> cg, cs;
    double worst_path = 1e9;
    bool norm_relation = true;
    for (std::uint64_t seed : {1, 2, 3}) {
        Rng rng(seed);
        double g = 0.0, s = 0.0;
        for (int i = 0; i < 100; ++i) {
            const int n = 4 + i % 3, eta = 1 + (i / 3) % 3;
            const auto c = random_coefficients(n, rng);
            const auto sc = random_sparse_coefficients(n, 2, rng);
            const auto h = assemble(c, enumerate_sector(n, eta));
            const auto hs = assemble(sc, enumerate_sector(n, eta));
            const SplitEvolution ev(h.T, h.V), evs(hs.T, hs.V);
            norm_relation = norm_relation && c.tau_spectral() <= n * c.tau_max() * (1 + 1e-12);
            for (int p : {1, 2})
                for (double t : {0.05, 0.1, 0.2}) {
                    const double bg = scaling_bound_general(p, c.tau_spectral(), c.nu_max(), eta, t);
                    g = std::max(g, trotter_error(build_formula(p), ev, t, 1) / bg);
                    worst_path = std::min(worst_path, scaling_bound_path_dense(p, c.tau_max(), c.nu_max(), n, eta, t) / bg);
                    const double bs = scaling_bound_sparse(p, sc.tau_max(), sc.nu_max(), interaction_sparsity(sc), eta, t);
                    s = std::max(s, trotter_error(build_formula(p), evs, t, 1) / bs);
                }
        }
        cg.push_back(g);
        cs.push_back(s);
    }
    auto spread = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x / static_cast<double>(v.size());
        double dev = 0.0;
        for (double x : v) dev = std::max(dev, std::abs(x - mean) / mean);
        return std::pair{*std::max_element(v.begin(), v.end()), dev};
    };
    const auto [g, gdev] = spread(cg);
    const auto [s, sdev] = spread(cs);
    // the fitted constant is the largest per-seed ratio, so dominance holds by construction; 10 caps it
    const bool ok = gdev <= 0.2 && sdev <= 0.2 && g <= 10 && s <= 10 && worst_path >= 1 - 1e-12 && norm_relation;
    return {ok, "C_general " + num(g) + " (seed spread " + num(100 * gdev) + "%), C_sparse " + num(s) + " (seed spread " +
                    num(100 * sdev) + "%), min path/general " + num(worst_path)};
}

// ---- 8: path counts ----

Outcome path_counts() {
    Rng rng(8);
    int mismatches = 0, compared = 0;
    for (int n = 2; n <= 4; ++n) {
        std::vector<CoefficientPair> cs{random_sparse_coefficients(n, std::min(n, 2), rng)};
        if (n <= 3) cs.push_back(random_coefficients(n, rng));
        for (const auto& c : cs)
            for (auto rules : {Ruleset::standard, Ruleset::normal_ordered})
                for (int p = 1; p <= 2; ++p)
                    for (const auto& g : gamma_enumeration(p))
                        for (int eta = 1; eta < n; ++eta) {
                            EnumerationOptions opt;
                            opt.rules = rules;
                            const auto table = degree_table(g, c, eta, opt);
                            auto want = oracle::degrees(g, c, eta, rules);
                            if (want.empty()) want.assign(table.degree.size(), 0.0);
                            ++compared;
                            mismatches += table.degree == want ? 0 : 1;
                        }
    }
    int over_cap = 0;
    for (int d : {1, 2, 3}) {
        const auto c = random_sparse_coefficients(8, d, rng);
        for (int p = 1; p <= 2; ++p) {
            double fact = 1.0;
            for (int i = 2; i <= p + 1; ++i) fact *= i;
            const double cap = std::pow(2.0 * d, p + 1) * fact / 2.0;
            for (const auto& g : gamma_enumeration(p))
                for (double x : degree_table(g, c, 3).site_paths) over_cap += x <= cap ? 0 : 1;
        }
    }
    int unsound = 0;
    double tightest = 1e9;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 5 + trial % 2, d = 1 + trial % 3, eta = 1 + trial % 3;
        const auto c = random_sparse_coefficients(n, d, rng);
        const auto h = assemble(c, enumerate_sector(n, eta));
        for (int p = 1; p <= 2; ++p)
            for (const auto& g : gamma_enumeration(p)) {
                const double sn = fermionic_seminorm(nested_commutator(g, h.T, h.V));
                const double pb = path_bound(g, c, eta);
                if (sn > 0) tightest = std::min(tightest, pb / sn);
                unsound += pb >= sn * (1 - 1e-12) ? 0 : 1;
            }
    }
    return {mismatches == 0 && over_cap == 0 && unsound == 0,
            std::to_string(compared) + " degree tables, " + std::to_string(mismatches) + " mismatches; " +
                std::to_string(over_cap) + " sites over the cap; " + std::to_string(unsound) +
                " unsound path bounds (min bound/seminorm " + num(tightest) + ")"};
}

// ---- 9: tightness ----

Outcome tightness() {
    double tt = 0.0;
    for (int n : {4, 6, 8})
        for (int eta = 1; eta < n; ++eta) {
            const auto s = enumerate_sector(n, eta);
            const auto t = assemble(tightness_instance(DenseInstance{static_cast<double>(n), 1.0}, n), s).T;
            tt = std::max(tt, max_abs_diff(ffft_conjugate(t, n).matrix, (number_op(0, s) * cplx(n)).matrix));
        }
    double b = 0.0, d = 0.0;
    for (int n : {8, 12})
        for (int eta : {2, 3}) {
            const cplx target = cplx(0.0, 2.0 * eta) * (eta % 2 ? -1.0 : 1.0);
            b = std::max(b, std::abs(expectation_nested_V_first(n, eta, 1) - target));
            d = std::max(d, std::abs(std::abs(expectation_nested_V_first(n, eta, 2)) - 4.0 * eta * eta) / (8.0 * eta));
        }
    std::vector<double> ratios;
    for (int n : {8, 12, 16}) {
        const int eta = n / 4;
        ratios.push_back(std::abs(expectation_nested_T_first(n, eta, 1, n, 1.0)) / (n * eta / std::numbers::pi));
    }
    bool c = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        c = c && std::abs(1 - ratios[i]) < std::abs(1 - ratios[i - 1]);
    return {tt <= 1e-12 && b <= 4 && c && d <= 1,
            "(a) " + num(tt) + " (b) max distance " + num(b) + " (c) ratios " + num(ratios[0]) + ", " + num(ratios[1]) +
                ", " + num(ratios[2]) + " (d) max distance/8eta " + num(d)};
}

// ---- 10: plane-wave norms ----

Outcome plane_wave_norms() {
    std::vector<double> tau, nu;
    for (int n : {8, 27, 64}) {
        const double omega = n;
        const auto c = plane_wave(n, omega, std::max(1, n / 4));
        tau.push_back(c.tau_spectral() * std::pow(omega, 2.0 / 3) / std::pow(n, 2.0 / 3));
        nu.push_back(c.nu_max() * std::pow(omega, 1.0 / 3) / std::pow(n, 1.0 / 3));
    }
    auto ratio = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };
    const double rt = ratio(tau), rv = ratio(nu);
    return {rt < 2 && rv < 2, "scaled spectral(tau) " + num(tau[0]) + ", " + num(tau[1]) + ", " + num(tau[2]) + " (spread " +
                                  num(rt) + "x); scaled max(nu) " + num(nu[0]) + ", " + num(nu[1]) + ", " + num(nu[2]) +
                                  " (spread " + num(rv) + "x)"};
}

// ---- 11: determinism ----

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no --cli given"};
    struct Run {
        std::string cmd, config, extra;
    };
    const std::vector<Run> runs{
        {"error", R"({"instances": 3, "orders": [1, 2, 4]})", ""},
        {"bound", R"({"instances": 4, "step_count": {"family": "hubbard", "eta": 16, "p": 4, "t": 1, "eps": 1}})", ""},
        {"commutator", "{}", ""},
        {"pathcount", R"({"degree_tables": true})", ""},
        {"tightness", "{}", "--family T_first"},
        {"hamiltonian", R"({"instance": {"kind": "plane_wave", "n": 8, "eta": 2}})", ""},
        {"selfcheck", "{}", ""},
    };
    int identical = 0, total = 0;
    std::string bad;
    for (const auto& r : runs)
        for (const char* format : {"csv", "json"}) {
            const std::string cfg = "determinism_" + r.cmd + ".json";
            std::ofstream(cfg) << r.config;
            std::string outs[2];
            for (int rep = 0; rep < 2; ++rep) {
                const std::string out = "determinism_" + r.cmd + "_" + std::to_string(rep) + "." + format;
                // the second run uses a different thread count
                const std::string line = "\"" + cli + "\" " + r.cmd + " --config " + cfg + " --seed 17 --format " + format +
                                         " --jobs " + (rep ? "3" : "1") + " --out " + out + " " + r.extra;
                if (std::system(line.c_str()) != 0) bad += r.cmd + "(exit) ";
                outs[rep] = slurp(out);
            }
            ++total;
            if (!outs[0].empty() && outs[0] == outs[1]) ++identical;
            else bad += r.cmd + "/" + format + " ";
        }
    return {identical == total && bad.empty(),
            std::to_string(identical) + "/" + std::to_string(total) + " byte-identical reruns" + (bad.empty() ? "" : "; differ: " + bad)};
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    struct Criterion {
        int id;
        std::string name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "algebra exactness", 10, algebra},
        {2, "oracle equivalence", 30, oracle_equivalence},
        {3, "seminorm metric suite", 60, seminorm_suite},
        {4, "lemma suite", 60, lemma_suite},
        {5, "order scaling", 120, order_scaling},
        {6, "certified dominance", 120, certified_dominance},
        {7, "scaling-bound dominance", 180, scaling_dominance},
        {8, "path-count validity", 180, path_counts},
        {9, "tightness reproduction", 300, tightness},
        {10, "plane-wave norm scalings", 60, plane_wave_norms},
        {11, "determinism", 60, [&] { return determinism(cli); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && secs <= c.limit_s;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %s  %s: %s [%.2f s of %.0f s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                    o.detail.c_str(), secs, c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
