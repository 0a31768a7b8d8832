#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confkern/conformal.hpp"
#include "confkern/datasets.hpp"
#include "confkern/kernel.hpp"
#include "confkern/svm.hpp"

namespace confkern {

/// Fold assignments: deterministic for a given seed, class ratios preserved
/// (each fold's class count is within 1 of class_size/k). Throws DataError
/// when a class has fewer than k members.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

/// F1 = 2PR/(P+R); 0 when tp = 0 (the convention the result tables use).
double f1_score(long tp, long fp, long fn);

/// (E_o - E_m)/E_o * 100; nullopt when E_o = 0 (undefined).
std::optional<double> error_decrease(double e_original, double e_modified);

struct Metrics {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    double error_rate = 0.0;
    std::size_t sv_count = 0;

    static Metrics from_predictions(std::span<const int> predicted,
                                    std::span<const int> actual, std::size_t sv_count);
};

struct ExperimentConfig {
    KernelSpec kernel;
    std::optional<ConformalSpec> transform;
    double C = 1.0;
    int folds = 20;
    bool use_idf = false;
    Norm norm = Norm::L1;
    std::uint64_t seed = 0;
    double tol = 1e-3;
    std::size_t max_passes = 0;  // 0 -> solver default
    std::size_t cache_rows = 512;
    std::string task_name;
    int jobs = 0;

    /// GC kernel and the Darc transform require the L1 (simplex) embedding.
    void validate() const;
};

struct PassOutcome {
    std::shared_ptr<const TrainedModel> model;
    Metrics metrics;
};

struct TwoPassOutcome {
    PassOutcome original;
    std::optional<PassOutcome> transformed;
};

/// The experimental procedure: train the base kernel, fit the conformal
/// factor on its support vectors (M' = min(M, |SV|-1)), retrain with the
/// transformed kernel under the same C, evaluate both on the untouched test
/// set. Without a transform only the first pass runs.
TwoPassOutcome two_pass(const ExperimentConfig& config, const TrainSet& train,
                        const TrainSet& test);

enum class Improvement { AccuracyGain, EfficiencyGain, NoGain };
const char* improvement_name(Improvement imp);

/// Cross-validated comparison of the original and transformed kernels.
struct ExperimentResult {
    std::string task;
    std::string kernel_desc;
    std::string transform_desc;
    std::vector<double> fold_f1_original, fold_f1_transformed;
    std::vector<double> fold_precision_original, fold_precision_transformed;
    std::vector<double> fold_recall_original, fold_recall_transformed;
    std::vector<double> fold_sv_original, fold_sv_transformed;
    std::vector<double> fold_error_original, fold_error_transformed;
    double mean_f1_original = 0.0, mean_f1_transformed = 0.0;
    double pooled_f1_original = 0.0, pooled_f1_transformed = 0.0;
    double mean_sv_original = 0.0, mean_sv_transformed = 0.0;
    double p_value = 1.0;
    std::optional<double> error_decrease_pct;

    Improvement classify() const;
};

/// Runs stratified k-fold CV of two_pass over a labeled set.
ExperimentResult run_cv_experiment(const ExperimentConfig& config, const TrainSet& data);

/// One synthetic replication cell: `trials` independent train/test draws of
/// a boundary task under a Gaussian kernel of width sigma, each evaluated
/// with and without the transform.
struct SynthCell {
    double sigma = 0.0;
    int trials = 0;
    double error_decrease_mean = 0.0;   // mean over trials with E_o > 0
    double error_decrease_ci95 = 0.0;   // half-width
    double error_decrease_pooled = 0.0; // (mean E_o - mean E_m)/mean E_o * 100
    double mean_error_original = 0.0;
    double mean_error_modified = 0.0;
    double mean_sv_original = 0.0;
    double mean_sv_transformed = 0.0;
    int skipped_zero_error = 0;
};

struct SynthConfig {
    Boundary boundary = Boundary::Sin;
    int n_train = 100;
    int n_test = 10000;
    int trials = 200;
    double C = 10.0;
    double tol = 1e-3;
    std::uint64_t seed = 0;
    ConformalSpec transform = ConformalSpec::d2(3);
    int jobs = 0;
};

SynthCell run_synth_cell(const SynthConfig& config, double sigma);

}  // namespace confkern
