#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "confkern/datasets.hpp"
#include "confkern/errors.hpp"
#include "confkern/eval.hpp"
#include "confkern/rng.hpp"

using namespace confkern;

TEST_SUITE_BEGIN("eval");

TEST_CASE("stratified_kfold: balanced toy case") {
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) labels.push_back(1);
    for (int i = 0; i < 10; ++i) labels.push_back(-1);
    const auto folds = stratified_kfold(labels, 2, 7);
    REQUIRE(folds.size() == 2);
    for (const auto& [train_idx, test_idx] : folds) {
        CHECK(train_idx.size() == 10);
        CHECK(test_idx.size() == 10);
        const auto pos = std::count_if(test_idx.begin(), test_idx.end(),
                                       [&](std::size_t i) { return labels[i] == 1; });
        CHECK(pos == 5);
    }
}

TEST_CASE("stratified_kfold: partition, determinism, ratio preservation") {
    Rng rng(3);
    std::vector<int> labels;
    for (int i = 0; i < 130; ++i) labels.push_back(rng.uniform01() < 0.3 ? 1 : -1);
    while (std::count(labels.begin(), labels.end(), 1) < 5) labels.push_back(1);
    const int k = 5;
    const auto folds = stratified_kfold(labels, k, 99);
    std::set<std::size_t> seen;
    for (const auto& [train_idx, test_idx] : folds) {
        for (std::size_t i : test_idx) {
            CHECK(!seen.contains(i));
            seen.insert(i);
        }
        // Train and test partition the index set.
        std::set<std::size_t> train_set(train_idx.begin(), train_idx.end());
        for (std::size_t i : test_idx) CHECK(!train_set.contains(i));
        CHECK(train_idx.size() + test_idx.size() == labels.size());
        // Per-fold positive ratio within 1/|fold| of global.
        const double global =
            static_cast<double>(std::count(labels.begin(), labels.end(), 1)) /
            static_cast<double>(labels.size());
        const double fold_pos =
            static_cast<double>(std::count_if(test_idx.begin(), test_idx.end(),
                                              [&](std::size_t i) { return labels[i] == 1; }));
        const double ratio = fold_pos / static_cast<double>(test_idx.size());
        CHECK(std::abs(ratio - global) <= 1.0 / static_cast<double>(test_idx.size()));
    }
    CHECK(seen.size() == labels.size());

    const auto again = stratified_kfold(labels, k, 99);
    CHECK(again == folds);
    CHECK_THROWS_AS(stratified_kfold(std::vector<int>{1, -1, -1, -1}, 2, 0), DataError);
}

TEST_CASE("f1_score conventions") {
    CHECK(f1_score(2, 1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1_score(0, 5, 3) == 0.0);
    CHECK(f1_score(10, 0, 0) == 1.0);
    CHECK_THROWS_AS(f1_score(-1, 0, 0), DataError);
}

TEST_CASE("error_decrease identities and sentinel") {
    CHECK(*error_decrease(0.2, 0.1) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(*error_decrease(0.15, 0.15) == doctest::Approx(0.0));
    CHECK(*error_decrease(0.1, 0.2) == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(!error_decrease(0.0, 0.1).has_value());
}

TEST_CASE("config validation: GC and Darc demand L1") {
    ExperimentConfig config;
    config.kernel = KernelSpec::gc(0.1);
    config.norm = Norm::L2;
    CHECK_THROWS_AS(config.validate(), DataError);
    config.norm = Norm::L1;
    CHECK_NOTHROW(config.validate());

    config.kernel = KernelSpec::gaussian(1.0);
    config.transform = ConformalSpec::darc(3);
    config.norm = Norm::L2;
    CHECK_THROWS_AS(config.validate(), DataError);
}

TEST_CASE("two_pass with D3 kappa = 0 reproduces the original decisions") {
    SyntheticSpec sspec;
    sspec.boundary = Boundary::Sin;
    sspec.n_train = 60;
    sspec.n_test = 120;
    sspec.seed = 5;
    const SyntheticData data = gen_synthetic(sspec);

    ExperimentConfig config;
    config.kernel = KernelSpec::gaussian_sigma(0.5);
    config.transform = ConformalSpec::d3(0.0);
    config.C = 10.0;
    config.norm = Norm::L2;
    const TwoPassOutcome outcome = two_pass(config, data.train, data.test);
    REQUIRE(outcome.transformed.has_value());
    for (const SparseVector& x : data.test.points) {
        CHECK(outcome.original.model->decision(x) ==
              doctest::Approx(outcome.transformed->model->decision(x)).epsilon(1e-6));
    }
}

TEST_CASE("D2 improves an over-wide gaussian on the sin task on average") {
    // Single trials are noisy; average a small batch of them.
    SynthConfig config;
    config.boundary = Boundary::Sin;
    config.n_train = 100;
    config.n_test = 500;
    config.trials = 30;
    config.C = 10.0;
    config.seed = 1;
    config.transform = ConformalSpec::d2(3);
    const SynthCell cell = run_synth_cell(config, /*sigma=*/2.0);
    CHECK(cell.error_decrease_pooled > 0.0);
    CHECK(cell.mean_error_modified < cell.mean_error_original);
}

TEST_CASE("improvement classification follows the result tables") {
    ExperimentResult r;
    r.fold_f1_transformed = {0.97};
    r.mean_f1_original = 0.95;
    r.mean_f1_transformed = 0.97;
    CHECK(r.classify() == Improvement::AccuracyGain);

    // F1 slips insignificantly but the model got smaller.
    r.mean_f1_original = 0.99832;
    r.mean_f1_transformed = 0.99831;
    r.p_value = 0.99;
    r.mean_sv_original = 321;
    r.mean_sv_transformed = 299;
    CHECK(r.classify() == Improvement::EfficiencyGain);

    r.p_value = 0.01;
    CHECK(r.classify() == Improvement::NoGain);
}

TEST_CASE("run_cv_experiment aggregates per-fold metrics") {
    SyntheticSpec sspec;
    sspec.boundary = Boundary::Sin;
    sspec.n_train = 160;
    sspec.n_test = 1;
    sspec.seed = 23;
    const SyntheticData data = gen_synthetic(sspec);

    ExperimentConfig config;
    config.kernel = KernelSpec::gaussian_sigma(0.3);
    config.transform = ConformalSpec::d2(3);
    config.C = 10.0;
    config.folds = 4;
    config.norm = Norm::L2;
    config.seed = 11;
    config.task_name = "sin";
    const ExperimentResult r = run_cv_experiment(config, data.train);
    REQUIRE(r.fold_f1_original.size() == 4);
    REQUIRE(r.fold_f1_transformed.size() == 4);
    double mean = 0.0;
    for (double f : r.fold_f1_original) mean += f;
    mean /= 4.0;
    CHECK(r.mean_f1_original == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    for (double sv : r.fold_sv_original) CHECK(sv > 0);
}

TEST_SUITE_END();
