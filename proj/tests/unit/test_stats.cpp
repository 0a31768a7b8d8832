#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "confkern/errors.hpp"
#include "confkern/rng.hpp"
#include "confkern/stats.hpp"
#include "oracles.hpp"

using namespace confkern;

TEST_SUITE_BEGIN("stats");

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x.
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
    // I_x(a, b) = 1 - I_{1-x}(b, a).
    Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform(0.5, 20.0);
        const double b = rng.uniform(0.5, 20.0);
        const double x = rng.uniform01();
        const double lhs = regularized_incomplete_beta(a, b, x);
        const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("t CDF against closed forms") {
    // nu = 1 is the Cauchy distribution: F(t) = 1/2 + atan(t)/pi.
    for (const double t : {-3.0, -0.5, 0.0, 0.7, 4.2}) {
        const double expected = 0.5 + std::atan(t) / std::acos(-1.0);
        CHECK(student_t_cdf(t, 1.0) == doctest::Approx(expected).epsilon(1e-10));
    }
    // nu = 2: F(t) = 1/2 + t / (2 sqrt(2 + t^2)).
    for (const double t : {-2.0, 0.3, 1.9}) {
        const double expected = 0.5 + t / (2.0 * std::sqrt(2.0 + t * t));
        CHECK(student_t_cdf(t, 2.0) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("paired t-test: identical lists give p = 1") {
    const std::vector<double> a{0.9, 0.8, 0.95, 0.7};
    CHECK(paired_ttest(a, a) == 1.0);
}

TEST_CASE("paired t-test: constant nonzero difference gives the sub-normal sentinel") {
    const std::vector<double> a{2, 3, 4, 5, 6};
    const std::vector<double> b{1, 2, 3, 4, 5};
    const double p = paired_ttest(a, b);
    CHECK(p == std::numeric_limits<double>::denorm_min());
    CHECK(p < std::numeric_limits<double>::min());
}

TEST_CASE("paired t-test: spec example vector against the quadrature oracle") {
    const std::vector<double> diffs{1.2, -0.8, 0.5, -0.1, 1.0};
    const std::vector<double> zero(diffs.size(), 0.0);
    const double p = paired_ttest(diffs, zero);
    const double p_oracle = oracle::ttest_p_quadrature(diffs, zero);
    CHECK(p == doctest::Approx(p_oracle).epsilon(1e-6));
}

TEST_CASE("paired t-test matches quadrature on 50 random fold vectors") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.below(18);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(0.0, 1.0);
            b[i] = rng.uniform(0.0, 1.0);
        }
        const double p = paired_ttest(a, b);
        const double p_oracle = oracle::ttest_p_quadrature(a, b);
        CHECK(std::abs(p - p_oracle) < 1e-6);
    }
}

TEST_CASE("paired t-test is symmetric under argument swap") {
    Rng rng(9);
    std::vector<double> a(8), b(8);
    for (std::size_t i = 0; i < 8; ++i) {
        a[i] = rng.uniform01();
        b[i] = rng.uniform01();
    }
    CHECK(paired_ttest(a, b) == paired_ttest(b, a));
}

TEST_CASE("paired t-test input validation") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(paired_ttest(one, one), DataError);
    const std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(paired_ttest(two, one), DataError);
}

TEST_CASE("mean_ci95 covers the true mean at roughly the nominal rate") {
    Rng rng(11);
    int covered = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> xs(20);
        for (double& x : xs) x = rng.uniform(-1.0, 1.0);  // true mean 0
        const MeanCi ci = mean_ci95(xs);
        if (std::abs(ci.mean) <= ci.half_width) ++covered;
    }
    // 95% nominal; allow a generous band for 400 replicates.
    CHECK(covered > reps * 0.90);
    CHECK(covered <= reps);
}

TEST_SUITE_END();
