#include <cmath>

#include "doctest.h"
#include "fracsparse/grid.hpp"
#include "fracsparse/numerics.hpp"

using namespace fracsparse;

TEST_CASE("sampling at midpoints") {
    Box unit(0.0, 1.0, 1);
    GridFunction z = GridFunction::sample([](double) { return 0.0; }, unit, 4);
    for (int64_t i = 0; i < 4; ++i) CHECK(z[i] == 0.0);

    GridFunction x = GridFunction::sample([](double t) { return t; }, unit, 4);
    CHECK(x[0] == 1.0 / 8);
    CHECK(x[1] == 3.0 / 8);
    CHECK(x[2] == 5.0 / 8);
    CHECK(x[3] == 7.0 / 8);

    // no midpoint of an even grid hits the origin
    Box sym(-1.0, 2.0, 1);
    GridFunction lg = GridFunction::sample([](double t) { return std::log(std::abs(t)); }, sym, 8);
    for (int64_t i = 0; i < lg.size(); ++i) CHECK(std::isfinite(lg[i]));

    CHECK_THROWS_WITH_AS(
        GridFunction::sample([](double t) { return t < 0.25 ? 1.0 / 0.0 : 1.0; }, unit, 4),
        doctest::Contains("cell 0"), std::domain_error);
    CHECK_THROWS_AS(GridFunction(unit, 3), std::invalid_argument);
}

TEST_CASE("midpoint-rule integration") {
    Box unit(0.0, 1.0, 1);
    GridFunction one(unit, 4, 1.0);
    CHECK(integrate(one) == doctest::Approx(1.0).epsilon(1e-15));

    GridFunction x = GridFunction::sample([](double t) { return t; }, unit, 4);
    CHECK(integrate(x) == doctest::Approx(0.5).epsilon(1e-15));  // exact for linear

    // oracle: sum of squared midpoints times the cell size
    GridFunction x2 = GridFunction::sample([](double t) { return t * t; }, unit, 4);
    double oracle = 0.0;
    for (int64_t i = 0; i < 4; ++i) {
        double mid = (static_cast<double>(i) + 0.5) / 4.0;
        oracle += mid * mid * 0.25;
    }
    CHECK(oracle == doctest::Approx(21.0 / 64.0).epsilon(1e-16));
    CHECK(integrate(x2) == doctest::Approx(oracle).epsilon(1e-15));

    CHECK(integrate(one, {0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(integrate(one, {7}), std::out_of_range);
}

TEST_CASE("integration is linear and monotone") {
    Box unit(0.0, 1.0, 1);
    TestFunctionRng rng(41);
    GridFunction f = rng.smooth_random(unit, 32);
    GridFunction g = rng.smooth_random(unit, 32);
    GridFunction sum(unit, 32);
    GridFunction bigger(unit, 32);
    for (int64_t i = 0; i < 32; ++i) {
        sum[i] = 2.0 * f[i] + 3.0 * g[i];
        bigger[i] = f[i] + std::abs(g[i]);
    }
    CHECK(integrate(sum) ==
          doctest::Approx(2.0 * integrate(f) + 3.0 * integrate(g)).epsilon(1e-12));
    CHECK(integrate(f) <= integrate(bigger) + 1e-15);
}

TEST_CASE("weighted norms") {
    Box unit(0.0, 1.0, 1);
    GridFunction one(unit, 8, 1.0);
    GridFunction w1(unit, 8, 1.0);
    for (double p : {1.0, 1.5, 2.0, 4.0})
        CHECK(lp_weighted_norm(one, p, w1) == doctest::Approx(1.0).epsilon(1e-14));

    GridFunction two(unit, 8, 2.0);
    CHECK(lp_weighted_norm(two, 2.0, w1) == doctest::Approx(2.0).epsilon(1e-14));

    // f = chi_{[0,1/2)}, w = 3, p = 2 -> 3/sqrt(2)
    GridFunction mask(unit, 8);
    for (int64_t i = 0; i < 4; ++i) mask[i] = 1.0;
    GridFunction w3(unit, 8, 3.0);
    CHECK(lp_weighted_norm(mask, 2.0, w3) ==
          doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-14));

    // homogeneity
    TestFunctionRng rng(7);
    GridFunction f = rng.smooth_random(unit, 16);
    GridFunction cf = f;
    for (int64_t i = 0; i < 16; ++i) cf[i] *= -2.5;
    CHECK(lp_weighted_norm(cf, 1.5, GridFunction(unit, 16, 1.0)) ==
          doctest::Approx(2.5 * lp_weighted_norm(f, 1.5, GridFunction(unit, 16, 1.0)))
              .epsilon(1e-13));

    Box other(0.0, 2.0, 1);
    CHECK_THROWS_AS(lp_weighted_norm(one, 2.0, GridFunction(other, 8, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("discrete Hoelder inequality") {
    Box unit(0.0, 1.0, 1);
    TestFunctionRng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction f = rng.smooth_random(unit, 64);
        GridFunction g = rng.smooth_random(unit, 64);
        double p = 1.25 + 2.0 * rng.uniform();
        double pd = dual_exponent(p);
        GridFunction prod(unit, 64);
        for (int64_t i = 0; i < 64; ++i) prod[i] = std::abs(f[i] * g[i]);
        GridFunction one(unit, 64, 1.0);
        double lhs = integrate(prod);
        double rhs = lp_weighted_norm(f, p, one) * lp_weighted_norm(g, pd, one);
        CHECK(lhs <= rhs * (1.0 + 1e-13));
    }
}

TEST_CASE("exponent arithmetic") {
    CHECK(dual_exponent(2.0) == doctest::Approx(2.0).epsilon(1e-16));
    CHECK(dual_exponent(4.0 / 3.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(sobolev_q(1, 0.5, 4.0 / 3.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(dual_exponent(1.0), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_q(1, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_q(1, 0.5, 0.9), std::invalid_argument);

    ExponentSet e(1, 0.5, 4.0 / 3.0, 2);
    CHECK(std::abs(1.0 / e.q + e.alpha / e.n - 1.0 / e.p) <= 1e-16);
    CHECK(e.q > e.p);
    CHECK(e.p_dual() == doctest::Approx(4.0));
    for (double p : {1.1, 1.5, 1.9}) {
        ExponentSet s(1, 0.5, p, 0);
        CHECK(std::abs(1.0 / s.q + 0.5 - 1.0 / s.p) <= 1e-15);
        CHECK(s.q > s.p);
    }
}

TEST_CASE("2-d grids") {
    Box sq({0.0, 0.0}, 1.0, 2);
    GridFunction f = GridFunction::sample(
        [](const std::array<double, 2>& x) { return x[0] + 2.0 * x[1]; }, sq, 4);
    CHECK(f.size() == 16);
    CHECK(integrate(f) == doctest::Approx(1.5).epsilon(1e-14));  // exact for affine
    auto m = f.midpoint(f.cell_at({1, 2}));
    CHECK(m[0] == doctest::Approx(0.375));
    CHECK(m[1] == doctest::Approx(0.625));
}
