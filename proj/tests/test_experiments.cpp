#include <cmath>

#include "doctest.h"
#include "fracsparse/experiments.hpp"
#include "fracsparse/operators.hpp"

using namespace fracsparse;

TEST_CASE("kappa arithmetic") {
    // m = 0 collapses to the single A_{p,q} power
    KappaInputs in0{ExponentSet(1, 0.5, 4.0 / 3.0, 0), 3.0, 3.0, 2.0, 2.0, 3.0, 3.0};
    double expo = (1.0 - 0.5) * std::max(1.0, 4.0 / 4.0);
    CHECK(kappa_m(in0) == doctest::Approx(std::pow(3.0, expo)).epsilon(1e-14));

    // all constants one, m = 1: the binomials sum to 2
    KappaInputs in1{ExponentSet(1, 0.5, 4.0 / 3.0, 1), 1, 1, 1, 1, 1, 1};
    CHECK(kappa_m(in1) == doctest::Approx(2.0).epsilon(1e-14));

    // monotone nondecreasing in every input constant
    KappaInputs base{ExponentSet(1, 0.25, 1.5, 2), 2.0, 3.0, 1.5, 2.5, 1.2, 2.2};
    double v = kappa_m(base);
    for (int field = 0; field < 6; ++field) {
        KappaInputs bumped = base;
        (&bumped.lambda_apq)[field] *= 1.5;
        CHECK(kappa_m(bumped) >= v - 1e-13);
    }
}

TEST_CASE("kappa collapse at mu = lambda") {
    // with [mu]_{A_{p,q}} = K, [mu^p]_{A_p} = K^{p/q}, [mu^q]_{A_q} = K:
    // kappa_m <= 2^m K^{(m+1-alpha/n) max(1, p'/q)}, exact arithmetic
    for (double p : {1.2, 4.0 / 3.0, 1.5, 1.8}) {
        for (double alpha : {0.25, 0.5, 0.6}) {
            if (p >= 1.0 / alpha) continue;
            double q = sobolev_q(1, alpha, p);
            double pd = dual_exponent(p);
            for (int m = 0; m <= 3; ++m) {
                for (int ke = 0; ke <= 10; ++ke) {
                    double K = std::pow(2.0, ke);
                    KappaInputs in{ExponentSet(1, alpha, p, m),
                                   K, K,
                                   std::pow(K, p / q), std::pow(K, p / q),
                                   K, K};
                    double bound = std::pow(2.0, m) *
                                   std::pow(K, (m + 1.0 - alpha) * std::max(1.0, pd / q));
                    CHECK(kappa_m(in) <= bound * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("power-weight A_{p,q} scaling") {
    // [w_delta]_{A_{p,q}} ~ delta^{-q/p'}
    Box box(-4.0, 8.0, 1);
    LatticeSystem sys(box, 1 << 12);
    CubeFamily fam = CubeFamily::full(sys);
    double p = 4.0 / 3.0, q = 4.0;
    std::vector<double> inv_delta, values;
    for (int e = 3; e <= 8; ++e) {
        double d = std::pow(2.0, -e);
        inv_delta.push_back(1.0 / d);
        values.push_back(power_apq_constant(d, p, q, sys, fam));
    }
    FitReport fit = fit_loglog(inv_delta, values);
    CHECK(std::abs(fit.slope - 1.0) <= 0.1);  // q/p' = 1 here
}

TEST_CASE("integration-by-parts minorant") {
    // int_0^{1/X} log^m(1/r) r^{delta-1} dr >= delta^{-m-1} X^{-delta}
    for (int m : {1, 2}) {
        for (double delta : {0.125, 0.0625}) {
            for (double X : {2.0, 4.0}) {
                double lhs = power_log_integral(m, delta, 0.0, 1.0 / X);
                double rhs = std::pow(delta, -m - 1.0) * std::pow(X, -delta);
                CHECK(lhs >= rhs);
                // independent quadrature of the same integral
                double quad = panel_gauss(
                    [&](double u) {
                        return std::exp(-delta * u) * std::pow(u, m);
                    },
                    std::log(X), std::log(X) + 60.0 / delta, 2000);
                CHECK(lhs == doctest::Approx(quad).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("sharpness experiment at the reference configuration") {
    SharpnessConfig cfg;
    cfg.m = 1;
    for (int e = 3; e <= 8; ++e) cfg.deltas.push_back(std::pow(2.0, -e));
    SharpnessResult res = sharpness_experiment(cfg);
    CHECK(!res.dualized);
    CHECK(res.theory_slope == doctest::Approx(1.5));
    CHECK(std::abs(res.ratio_vs_constant.slope - 1.5) <= 0.15);
    CHECK(std::abs(res.constant_vs_delta.slope - 1.0) <= 0.1);
    CHECK(res.ratio_vs_constant.max_residual <= 0.05);
    CHECK(res.deltas.size() == 6);  // nothing dropped: the norms are resolved
}

TEST_CASE("sharpness ratios are grid-converged") {
    // the near-field substitution route and the far-field cell-moment route
    // must agree across their moving boundary: R(delta) is grid-independent
    auto ratio_at = [](int64_t n) {
        SharpnessConfig cfg;
        cfg.m = 1;
        cfg.cells_per_side = n;
        cfg.auto_drop_smallest = false;
        for (int e = 3; e <= 6; ++e) cfg.deltas.push_back(std::pow(2.0, -e));
        return sharpness_experiment(cfg).ratios;
    };
    auto coarse = ratio_at(1 << 12);
    auto fine = ratio_at(1 << 13);
    for (size_t i = 0; i < coarse.size(); ++i)
        CHECK(std::abs(fine[i] - coarse[i]) <= 5e-3 * coarse[i]);
}

TEST_CASE("sharpness duality reduction") {
    // p'/q < 1 transposes to the adjoint triple
    SharpnessConfig cfg;
    cfg.p = 1.8;  // q = 18, p' = 2.25, p'/q = 0.125
    cfg.m = 0;
    cfg.cells_per_side = 1 << 12;
    for (int e = 3; e <= 8; ++e) cfg.deltas.push_back(std::pow(2.0, -e));
    SharpnessResult res = sharpness_experiment(cfg);
    CHECK(res.dualized);
    // dual triple: p~ = q' = 18/17, q~ = p' = 2.25, p~' = 18, ratio 8
    CHECK(res.theory_slope == doctest::Approx(0.5 * 8.0).epsilon(1e-12));
    // the dual constant spans only delta^{1/8}, which amplifies the finite-delta
    // transition; the fitted slope carries the same ~0.85 attenuation as the
    // primal m = 0 case at this delta range
    CHECK(std::abs(res.ratio_vs_constant.slope - res.theory_slope) <=
          0.2 * res.theory_slope);
}

TEST_CASE("bloom upper check") {
    Box box(-1.0, 2.0, 1);
    int64_t N = 1 << 7;
    Weight one(GridFunction(box, N, 1.0));

    // constant symbol, m >= 1: zero ratios
    GridFunction cst(box, N, 2.0);
    BloomCheckResult rep = bloom_upper_check(one, one, cst, 1, 0.5, 4.0 / 3.0, 6, 42);
    CHECK(rep.max_ratio == doctest::Approx(0.0));

    // m = 0: the measured operator-norm lower bound is controlled by kappa_0
    TestFunctionRng rng(1);
    GridFunction b = rng.smooth_random(box, N);
    BloomCheckResult rep0 = bloom_upper_check(one, one, b, 0, 0.5, 4.0 / 3.0, 8, 42);
    CHECK(rep0.max_ratio > 0.0);
    CHECK(rep0.kappa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep0.max_ratio <= 16.0 * rep0.kappa);

    // two power weights, b = log|x|: finite and stable under refinement
    auto run = [&](int64_t n) {
        GridFunction lg = GridFunction::sample(
            [](double x) { return std::log(std::abs(x)); }, box, n);
        Weight mu(GridFunction::sample(
            [](double x) { return std::pow(std::abs(x), 0.125); }, box, n));
        Weight la(GridFunction::sample(
            [](double x) { return std::pow(std::abs(x), -0.125); }, box, n));
        return bloom_upper_check(mu, la, lg, 1, 0.5, 4.0 / 3.0, 8, 7);
    };
    BloomCheckResult c7 = run(1 << 7);
    BloomCheckResult c8 = run(1 << 8);
    CHECK(std::isfinite(c7.empirical_c));
    CHECK(c7.empirical_c > 0.0);
    CHECK(std::isfinite(c8.empirical_c));
    double ratio = c8.empirical_c / c7.empirical_c;
    CHECK(ratio <= 4.0);
    CHECK(ratio >= 0.25);
}

TEST_CASE("necessity construction") {
    Box box(0.0, 1.0, 1);
    int64_t N = 1 << 8;
    LatticeSystem sys(box, N);
    DyadicCube root{kBaseLattice, 0, {0, 0}};
    Weight one(GridFunction(box, N, 1.0));

    GridFunction x = GridFunction::sample([](double t) { return t; }, box, N);
    NecessityReport rep = necessity_check(x, one, one, 1, 0.5, sys, root);
    CHECK(rep.holds);
    CHECK(rep.lhs <= rep.rhs);
    CHECK(std::isfinite(rep.chain_constant));
    CHECK(rep.a_cells >= N / 16);
    CHECK(rep.b_cells >= 7 * N / 16);

    GridFunction cst(box, N, 1.0);
    NecessityReport repc = necessity_check(cst, one, one, 1, 0.5, sys, root);
    CHECK(repc.omega == doctest::Approx(0.0));
    CHECK(repc.holds);

    // random symbols: the pointwise chain is exact, zero tolerance
    TestFunctionRng rng(21);
    for (int t = 0; t < 10; ++t) {
        GridFunction b = rng.smooth_random(box, N);
        for (int m : {1, 2}) {
            NecessityReport r = necessity_check(b, one, one, m, 0.5, sys, root);
            CHECK(r.holds);
        }
    }

    // chain constant for log|x| is stable under refinement
    Box sym(-1.0, 2.0, 1);
    auto chain = [&](int64_t n) {
        LatticeSystem s(sym, n);
        Weight w1(GridFunction(sym, n, 1.0));
        GridFunction lg = GridFunction::sample(
            [](double t) { return std::log(std::abs(t)); }, sym, n);
        return necessity_check(lg, w1, w1, 1, 0.5, s, DyadicCube{kBaseLattice, 0, {0, 0}})
            .chain_constant;
    };
    double c8 = chain(1 << 8), c9 = chain(1 << 9);
    CHECK(c9 <= 2.0 * c8);
    CHECK(c8 <= 2.0 * c9);
}

TEST_CASE("domination constant report") {
    CHECK(domination_constant_report(1, 0.5, 0, 0, 1 << 5, 9).empty());
    auto rows = domination_constant_report(1, 0.5, 1, 3, 1 << 5, 9);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(std::isfinite(r.constant));
    auto again = domination_constant_report(1, 0.5, 1, 3, 1 << 5, 9);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].constant == again[i].constant);  // bit-exact reproducibility
        CHECK(rows[i].max_adaptive == again[i].max_adaptive);
    }
}
