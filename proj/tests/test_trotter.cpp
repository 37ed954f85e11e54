#include <gtest/gtest.h>

#include <cmath>

#include "fermitrot/instances.hpp"
#include "fermitrot/trotter.hpp"
#include "oracle/full_fock.hpp"

using namespace fermitrot;

namespace {

double weight_sum(const ProductFormula& f, Generator g) {
    double s = 0.0;
    for (const auto& st : f.stages)
        if (st.generator == g) s += st.weight;
    return s;
}

} // namespace

TEST(Formula, LowOrderShapes) {
    const auto f1 = build_formula(1);
    ASSERT_EQ(f1.stages.size(), 2u);
    EXPECT_EQ(f1.stages[0].generator, Generator::T);
    EXPECT_EQ(f1.stages[1].generator, Generator::V);

    const auto f2 = build_formula(2);
    ASSERT_EQ(f2.stages.size(), 3u);
    EXPECT_EQ(f2.stages[0].generator, Generator::V);
    EXPECT_EQ(f2.stages[0].weight, 0.5);
    EXPECT_EQ(f2.stages[1].weight, 1.0);
}

TEST(Formula, WeightsSumToOneAndAreSymmetric) {
    for (int p : {2, 4, 6, 8}) {
        const auto f = build_formula(p);
        EXPECT_NEAR(weight_sum(f, Generator::T), 1.0, 1e-12) << p;
        EXPECT_NEAR(weight_sum(f, Generator::V), 1.0, 1e-12) << p;
        const auto& st = f.stages;
        for (std::size_t i = 0; i < st.size(); ++i) {
            EXPECT_EQ(st[i].generator, st[st.size() - 1 - i].generator);
            EXPECT_NEAR(st[i].weight, st[st.size() - 1 - i].weight, 1e-14);
        }
        for (std::size_t i = 1; i < st.size(); ++i) EXPECT_NE(st[i].generator, st[i - 1].generator);
    }
    // fourth order: 5 copies of a 3-stage formula with adjacent V stages merged
    EXPECT_EQ(build_formula(4).stages.size(), 11u);
}

TEST(Formula, RejectsUnsupportedOrders) {
    EXPECT_THROW(build_formula(0), invalid_input);
    EXPECT_THROW(build_formula(3), invalid_input);
    EXPECT_THROW(build_formula(14), invalid_input);
}

TEST(Evolution, StepMatchesOracleExponentials) {
    Rng rng(31);
    const int n = 4, eta = 2;
    const auto c = random_coefficients(n, rng);
    ComplexMatrix tf, vf;
    oracle::hamiltonian(n, c.tau(), c.nu(), &tf, &vf);
    const ComplexMatrix t = oracle::project(tf, n, eta), v = oracle::project(vf, n, eta);
    const double dt = 0.37;
    const auto s = enumerate_sector(n, eta);
    const auto h = assemble(c, s);
    const SplitEvolution ev(h.T, h.V);

    const ComplexMatrix want1 = unitary_from_hermitian(t, dt) * unitary_from_hermitian(v, dt);
    EXPECT_LT(max_abs_diff(ev.step(build_formula(1), dt), want1), 1e-10);
    const ComplexMatrix want2 =
        unitary_from_hermitian(v, dt / 2) * unitary_from_hermitian(t, dt) * unitary_from_hermitian(v, dt / 2);
    EXPECT_LT(max_abs_diff(ev.step(build_formula(2), dt), want2), 1e-10);
    EXPECT_LT(max_abs_diff(ev.exact(dt), unitary_from_hermitian(t + v, dt)), 1e-10);
}

TEST(Evolution, CommutingPartsAreExact) {
    // tau diagonal commutes with any diagonal V
    const auto s = enumerate_sector(5, 2);
    Rng rng(2);
    std::vector<double> nu(25);
    for (auto& x : nu) x = rng.uniform(-1, 1);
    const CoefficientPair c(ComplexMatrix::diagonal({0.3, -1.0, 0.7, 2.0, 0.1}), nu);
    const auto h = assemble(c, s);
    const SplitEvolution ev(h.T, h.V);
    for (int p : {1, 2, 4}) EXPECT_LT(trotter_error(build_formula(p), ev, 1.3, 1), 1e-12);
}

TEST(Evolution, UnitarityAndRejections) {
    Rng rng(4);
    const auto h = assemble(random_coefficients(5, rng), enumerate_sector(5, 2));
    const SplitEvolution ev(h.T, h.V);
    const ComplexMatrix u = ev.evolve(build_formula(4), 0.8, 3);
    EXPECT_LT(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows())), 1e-10);
    EXPECT_THROW(ev.evolve(build_formula(1), 0.1, 0), invalid_input);
    EXPECT_THROW(SplitEvolution(h.T, h.T), invalid_input);
}

TEST(Error, SlopesMatchOrder) {
    Rng rng(8);
    const auto c = random_coefficients(6, rng);
    const auto h = assemble(c, enumerate_sector(6, 3));
    const SplitEvolution ev(h.T, h.V);
    for (int p : {1, 2, 4}) {
        std::vector<double> ts, es;
        for (int i = 0; i < 5; ++i) {
            ts.push_back(0.02 + 0.02 * i);
            es.push_back(trotter_error(build_formula(p), ev, ts.back(), 1));
        }
        EXPECT_NEAR(fit_error_order(ts, es), p + 1, p == 4 ? 0.3 : 0.15) << p;
    }
}

TEST(Error, DecreasesWithSteps) {
    Rng rng(9);
    const auto c = random_coefficients(5, rng);
    double prev = 1e9;
    for (int r : {1, 2, 4, 8}) {
        const double e = trotter_error(2, c, 2, 1.0, r);
        EXPECT_LT(e, prev);
        prev = e;
    }
    // second order: doubling r cuts the error by about 4
    EXPECT_NEAR(trotter_error(2, c, 2, 1.0, 16) / trotter_error(2, c, 2, 1.0, 32), 4.0, 0.2);
}

TEST(Fit, ExactPowerLaw) {
    std::vector<double> ts{0.1, 0.2, 0.4}, es;
    for (double t : ts) es.push_back(3.0 * std::pow(t, 2.5));
    EXPECT_NEAR(fit_error_order(ts, es), 2.5, 1e-12);
    EXPECT_THROW(fit_error_order({0.1}, {1.0}), invalid_input);
    EXPECT_THROW(fit_error_order({0.1, 0.1}, {1.0, 2.0}), invalid_input);
    EXPECT_THROW(fit_error_order({0.1, 0.2}, {0.0, 2.0}), invalid_input);
}
