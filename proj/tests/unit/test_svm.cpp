#include <doctest.h>

#include <cmath>
#include <memory>
#include <set>

#include "confkern/errors.hpp"
#include "confkern/rng.hpp"
#include "confkern/svm.hpp"
#include "oracles.hpp"

using namespace confkern;

TEST_SUITE_BEGIN("svm");

namespace {

SparseVector vec1(double x) {
    const double v[1] = {x};
    return SparseVector::from_dense(v);
}

SparseVector vec2(double x, double y) {
    const double v[2] = {x, y};
    return SparseVector::from_dense(v);
}

std::shared_ptr<BaseKernel> linear_kernel() {
    return std::make_shared<BaseKernel>(KernelSpec::linear());
}

/// Two separable blobs in 2-d: class +1 around (2, 2), class -1 around
/// (-2, -2).
TrainSet random_blobs(Rng& rng, int n_per_class, double spread = 0.8) {
    TrainSet ts;
    for (int i = 0; i < n_per_class; ++i) {
        ts.points.push_back(
            vec2(2.0 + rng.uniform(-spread, spread), 2.0 + rng.uniform(-spread, spread)));
        ts.labels.push_back(1);
        ts.points.push_back(vec2(-2.0 + rng.uniform(-spread, spread),
                                 -2.0 + rng.uniform(-spread, spread)));
        ts.labels.push_back(-1);
    }
    return ts;
}

}  // namespace

TEST_CASE("train set validation") {
    TrainSet ts;
    ts.points = {vec1(1)};
    ts.labels = {1};
    CHECK_THROWS_AS(ts.validate(), DataError);
    ts.points.push_back(vec1(2));
    ts.labels.push_back(1);
    CHECK_THROWS_AS(ts.validate(), DataError);  // single class
    ts.labels[1] = 2;
    CHECK_THROWS_AS(ts.validate(), DataError);  // bad label
    ts.labels[1] = -1;
    CHECK_NOTHROW(ts.validate());
}

TEST_CASE("two-point analytic solution: alpha = 0.5, b = 0, f(x) = x") {
    TrainSet ts;
    ts.points = {vec1(1.0), vec1(-1.0)};
    ts.labels = {1, -1};
    const TrainedModel m = train(ts, linear_kernel(), {.C = 10.0, .tol = 1e-8});
    REQUIRE(m.sv_count() == 2);
    CHECK(m.alphas[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(m.alphas[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(m.bias == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(m.decision(vec1(1.0)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.decision(vec1(0.25)) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("XOR under a linear kernel: all alphas at bound, training error > 0") {
    TrainSet ts;
    ts.points = {vec2(0, 0), vec2(1, 1), vec2(0, 1), vec2(1, 0)};
    ts.labels = {1, 1, -1, -1};
    const double C = 5.0;
    const TrainedModel m = train(ts, linear_kernel(), {.C = C, .tol = 1e-6});
    REQUIRE(m.sv_count() == 4);
    for (double a : m.alphas) CHECK(a == doctest::Approx(C).epsilon(1e-9));
    int errors = 0;
    for (std::size_t i = 0; i < ts.points.size(); ++i) {
        if (m.predict(ts.points[i]) != ts.labels[i]) ++errors;
    }
    CHECK(errors > 0);
}

TEST_CASE("KKT conditions hold at the solver tolerance") {
    Rng rng(1234);
    const double tol = 1e-3;
    for (int trial = 0; trial < 5; ++trial) {
        TrainSet ts = random_blobs(rng, 15);
        const double C = trial % 2 == 0 ? 1.0 : 100.0;
        auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(0.5));
        const TrainedModel m = train(ts, kernel, {.C = C, .tol = tol});
        CHECK(m.kkt_violation <= tol);
        // Reconstruct alpha over all points (0 for non-SV).
        std::vector<double> alpha(ts.size(), 0.0);
        double lin = 0.0;
        for (std::size_t s = 0; s < m.sv_count(); ++s) {
            alpha[m.sv_indices[s]] = m.alphas[s];
            lin += m.alphas[s] * m.sv_labels[s];
        }
        CHECK(std::abs(lin) <= 1e-8);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double margin = ts.labels[i] * m.decision(ts.points[i]);
            if (alpha[i] == 0.0) {
                CHECK(margin >= 1.0 - 10 * tol);
            } else if (alpha[i] < C) {
                CHECK(margin == doctest::Approx(1.0).epsilon(10 * tol));
            } else {
                CHECK(margin <= 1.0 + 10 * tol);
            }
        }
    }
}

TEST_CASE("dual objective matches the projected-gradient QP oracle") {
    Rng rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        TrainSet ts = random_blobs(rng, 10);  // 20 points
        auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(0.3));
        const TrainedModel m = train(ts, kernel, {.C = 10.0, .tol = 1e-6});
        std::vector<std::vector<double>> k(ts.size(), std::vector<double>(ts.size()));
        for (std::size_t i = 0; i < ts.size(); ++i) {
            for (std::size_t j = 0; j < ts.size(); ++j) {
                k[i][j] = kernel->eval(ts.points[i], ts.points[j]);
            }
        }
        const double oracle_obj =
            oracle::qp_dual_objective(k, ts.labels, 10.0, 200000, 1e-3);
        CHECK(m.dual_objective == doctest::Approx(oracle_obj).epsilon(1e-4));
    }
}

TEST_CASE("determinism: retraining gives bit-identical alphas") {
    Rng rng(5);
    TrainSet ts = random_blobs(rng, 20);
    auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(0.7));
    const TrainedModel a = train(ts, kernel, {.C = 3.0, .seed = 42});
    const TrainedModel b = train(ts, kernel, {.C = 3.0, .seed = 42});
    REQUIRE(a.alphas.size() == b.alphas.size());
    for (std::size_t i = 0; i < a.alphas.size(); ++i) CHECK(a.alphas[i] == b.alphas[i]);
    CHECK(a.bias == b.bias);
}

TEST_CASE("permutation: same support-vector set through the index map") {
    Rng rng(6);
    TrainSet ts = random_blobs(rng, 12);
    auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(0.5));
    const TrainedModel base = train(ts, kernel, {.C = 2.0});

    std::vector<std::size_t> perm(ts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    TrainSet shuffled;
    for (std::size_t i : perm) {
        shuffled.points.push_back(ts.points[i]);
        shuffled.labels.push_back(ts.labels[i]);
    }
    const TrainedModel permuted = train(shuffled, kernel, {.C = 2.0});

    std::set<std::size_t> sv_base(base.sv_indices.begin(), base.sv_indices.end());
    std::set<std::size_t> sv_mapped;
    for (std::size_t s : permuted.sv_indices) sv_mapped.insert(perm[s]);
    CHECK(sv_base == sv_mapped);
}

TEST_CASE("batch predictions equal one-at-a-time predictions") {
    Rng rng(8);
    TrainSet ts = random_blobs(rng, 10);
    auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(1.0));
    const TrainedModel m = train(ts, kernel, {.C = 1.0});
    std::vector<SparseVector> queries;
    for (int i = 0; i < 10; ++i) queries.push_back(vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)));
    const std::vector<int> batch = m.predict(queries);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        CHECK(batch[i] == m.predict(queries[i]));
    }
}

TEST_CASE("sign(0) -> +1 tie rule") {
    TrainSet ts;
    ts.points = {vec1(1.0), vec1(-1.0)};
    ts.labels = {1, -1};
    const TrainedModel m = train(ts, linear_kernel(), {.C = 10.0, .tol = 1e-8});
    CHECK(m.decision(vec1(0.0)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(m.predict(vec1(0.0)) == 1);
}

TEST_CASE("budget exhaustion raises NumericalError with the gap") {
    Rng rng(10);
    TrainSet ts = random_blobs(rng, 50);
    auto kernel = std::make_shared<BaseKernel>(KernelSpec::gaussian(0.5));
    CHECK_THROWS_AS(train(ts, kernel, {.C = 100.0, .tol = 1e-12, .max_passes = 3}),
                    NumericalError);
}

TEST_SUITE_END();
