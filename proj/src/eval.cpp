#include "confkern/eval.hpp"

#include <algorithm>
#include <cmath>

#include "confkern/errors.hpp"
#include "confkern/parallel.hpp"
#include "confkern/rng.hpp"
#include "confkern/stats.hpp"

namespace confkern {

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw DataError("stratified_kfold: k must be >= 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? pos : neg).push_back(i);
    }
    if (pos.size() < static_cast<std::size_t>(k) || neg.size() < static_cast<std::size_t>(k)) {
        throw DataError("stratified_kfold: a class has fewer than k members");
    }
    Rng rng = Rng::derive(seed, 0xf01d5ULL);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<std::vector<std::size_t>> fold_members(k);
    for (std::size_t i = 0; i < pos.size(); ++i) fold_members[i % k].push_back(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) fold_members[i % k].push_back(neg[i]);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> folds(k);
    for (int f = 0; f < k; ++f) {
        std::sort(fold_members[f].begin(), fold_members[f].end());
        folds[f].second = fold_members[f];
        for (int g = 0; g < k; ++g) {
            if (g == f) continue;
            folds[f].first.insert(folds[f].first.end(), fold_members[g].begin(),
                                  fold_members[g].end());
        }
        std::sort(folds[f].first.begin(), folds[f].first.end());
    }
    return folds;
}

double f1_score(long tp, long fp, long fn) {
    if (tp < 0 || fp < 0 || fn < 0) throw DataError("f1_score: negative count");
    if (tp == 0) return 0.0;
    const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * p * r / (p + r);
}

std::optional<double> error_decrease(double e_original, double e_modified) {
    if (e_original == 0.0) return std::nullopt;
    return (e_original - e_modified) / e_original * 100.0;
}

Metrics Metrics::from_predictions(std::span<const int> predicted,
                                  std::span<const int> actual, std::size_t sv_count) {
    if (predicted.size() != actual.size()) {
        throw DataError("metrics: prediction/label length mismatch");
    }
    Metrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (actual[i] == 1) {
            predicted[i] == 1 ? ++m.tp : ++m.fn;
        } else {
            predicted[i] == 1 ? ++m.fp : ++m.tn;
        }
    }
    m.precision = m.tp > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = m.tp > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = f1_score(m.tp, m.fp, m.fn);
    const std::size_t n = predicted.size();
    m.error_rate = n > 0 ? static_cast<double>(m.fp + m.fn) / static_cast<double>(n) : 0.0;
    m.sv_count = sv_count;
    return m;
}

void ExperimentConfig::validate() const {
    const bool needs_simplex =
        kernel.kind == KernelKind::Diffusion ||
        (transform && transform->kind == ConformalKind::Darc);
    if (needs_simplex && norm != Norm::L1) {
        throw DataError("config: " + std::string(kernel.kind == KernelKind::Diffusion
                                                     ? "the diffusion kernel"
                                                     : "the Darc transform") +
                        " requires the L1 (simplex) embedding");
    }
    if (kernel.kind == KernelKind::GC && norm != Norm::L1) {
        throw DataError("config: the GC kernel requires the L1 embedding");
    }
    if (!(C > 0.0)) throw DataError("config: C must be > 0");
    if (folds < 2) throw DataError("config: folds must be >= 2");
}

namespace {

Metrics evaluate(const TrainedModel& model, const TrainSet& test) {
    const std::vector<int> predicted = model.predict(test.points);
    return Metrics::from_predictions(predicted, test.labels, model.sv_count());
}

TrainOptions options_from(const ExperimentConfig& config, std::size_t n_train) {
    TrainOptions opts;
    opts.C = config.C;
    opts.tol = config.tol;
    // The solver default of 10n pair updates is tight for conformal kernels;
    // the harness prefers convergence over an early budget diagnostic.
    opts.max_passes = config.max_passes > 0 ? config.max_passes
                                            : std::max<std::size_t>(10 * n_train, 100000);
    opts.seed = config.seed;
    opts.cache_rows = config.cache_rows;
    return opts;
}

}  // namespace

TwoPassOutcome two_pass(const ExperimentConfig& config, const TrainSet& train_set,
                        const TrainSet& test_set) {
    config.validate();
    TwoPassOutcome out;
    const TrainOptions opts = options_from(config, train_set.size());

    auto base = std::make_shared<BaseKernel>(config.kernel);
    std::shared_ptr<const TrainedModel> first;
    try {
        first = std::make_shared<TrainedModel>(train(train_set, base, opts));
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("two_pass, first pass: ") + e.what());
    }
    out.original = {first, evaluate(*first, test_set)};
    if (!config.transform) return out;

    FittedConformal fitted = fit_conformal(*config.transform, first);
    auto conformal = std::make_shared<ConformalKernel>(std::move(fitted), config.kernel);
    conformal->prime_cache(train_set.points, config.jobs);
    std::shared_ptr<const TrainedModel> second;
    try {
        second = std::make_shared<TrainedModel>(train(train_set, conformal, opts));
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("two_pass, second pass: ") + e.what());
    }
    // Prime the copies held by the model so batch decisions reuse D values.
    conformal->prime_cache(second->sv_points, config.jobs);
    out.transformed = {second, evaluate(*second, test_set)};
    return out;
}

const char* improvement_name(Improvement imp) {
    switch (imp) {
        case Improvement::AccuracyGain: return "accuracy_gain";
        case Improvement::EfficiencyGain: return "efficiency_gain";
        case Improvement::NoGain: return "no_gain";
    }
    return "?";
}

Improvement ExperimentResult::classify() const {
    if (fold_f1_transformed.empty()) return Improvement::NoGain;
    if (mean_f1_transformed > mean_f1_original) return Improvement::AccuracyGain;
    if (p_value >= 0.05 && mean_sv_transformed < mean_sv_original) {
        return Improvement::EfficiencyGain;
    }
    return Improvement::NoGain;
}

ExperimentResult run_cv_experiment(const ExperimentConfig& config, const TrainSet& data) {
    config.validate();
    const auto folds = stratified_kfold(data.labels, config.folds, config.seed);
    const std::size_t k = folds.size();

    ExperimentResult result;
    result.task = config.task_name;
    result.kernel_desc = config.kernel.describe();
    result.transform_desc = config.transform ? config.transform->describe() : "none";
    result.fold_f1_original.resize(k);
    result.fold_precision_original.resize(k);
    result.fold_recall_original.resize(k);
    result.fold_sv_original.resize(k);
    result.fold_error_original.resize(k);
    const bool transformed = config.transform.has_value();
    if (transformed) {
        result.fold_f1_transformed.resize(k);
        result.fold_precision_transformed.resize(k);
        result.fold_recall_transformed.resize(k);
        result.fold_sv_transformed.resize(k);
        result.fold_error_transformed.resize(k);
    }
    std::vector<Metrics> pooled_orig(k), pooled_trans(k);

    parallel_for(k, config.jobs, [&](std::size_t f) {
        TrainSet train_set, test_set;
        for (std::size_t i : folds[f].first) {
            train_set.points.push_back(data.points[i]);
            train_set.labels.push_back(data.labels[i]);
        }
        for (std::size_t i : folds[f].second) {
            test_set.points.push_back(data.points[i]);
            test_set.labels.push_back(data.labels[i]);
        }
        ExperimentConfig fold_config = config;
        fold_config.jobs = 1;  // folds already run concurrently
        const TwoPassOutcome outcome = two_pass(fold_config, train_set, test_set);
        result.fold_f1_original[f] = outcome.original.metrics.f1;
        result.fold_precision_original[f] = outcome.original.metrics.precision;
        result.fold_recall_original[f] = outcome.original.metrics.recall;
        result.fold_sv_original[f] = static_cast<double>(outcome.original.metrics.sv_count);
        result.fold_error_original[f] = outcome.original.metrics.error_rate;
        pooled_orig[f] = outcome.original.metrics;
        if (transformed) {
            const Metrics& m = outcome.transformed->metrics;
            result.fold_f1_transformed[f] = m.f1;
            result.fold_precision_transformed[f] = m.precision;
            result.fold_recall_transformed[f] = m.recall;
            result.fold_sv_transformed[f] = static_cast<double>(m.sv_count);
            result.fold_error_transformed[f] = m.error_rate;
            pooled_trans[f] = m;
        }
    });

    auto mean = [](std::span<const double> xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
    };
    auto pooled_f1 = [](std::span<const Metrics> ms) {
        long tp = 0, fp = 0, fn = 0;
        for (const Metrics& m : ms) {
            tp += m.tp;
            fp += m.fp;
            fn += m.fn;
        }
        return f1_score(tp, fp, fn);
    };
    result.mean_f1_original = mean(result.fold_f1_original);
    result.mean_sv_original = mean(result.fold_sv_original);
    result.pooled_f1_original = pooled_f1(pooled_orig);
    if (transformed) {
        result.mean_f1_transformed = mean(result.fold_f1_transformed);
        result.mean_sv_transformed = mean(result.fold_sv_transformed);
        result.pooled_f1_transformed = pooled_f1(pooled_trans);
        result.p_value = paired_ttest(result.fold_f1_transformed, result.fold_f1_original);
        const double eo = mean(result.fold_error_original);
        const double em = mean(result.fold_error_transformed);
        result.error_decrease_pct = error_decrease(eo, em);
    }
    return result;
}

SynthCell run_synth_cell(const SynthConfig& config, double sigma) {
    if (config.trials < 1) throw DataError("run_synth_cell: trials must be >= 1");
    SynthCell cell;
    cell.sigma = sigma;
    cell.trials = config.trials;

    ExperimentConfig exp;
    exp.kernel = KernelSpec::gaussian_sigma(sigma);
    exp.transform = config.transform;
    exp.C = config.C;
    exp.tol = config.tol;
    exp.norm = Norm::L2;  // raw 2-d coordinates, no embedding
    exp.jobs = 1;

    const std::size_t n = static_cast<std::size_t>(config.trials);
    std::vector<double> eo(n), em(n), svo(n), svt(n);
    parallel_for(n, config.jobs, [&](std::size_t trial) {
        SyntheticSpec sspec;
        sspec.boundary = config.boundary;
        sspec.n_train = config.n_train;
        sspec.n_test = config.n_test;
        sspec.seed = Rng::splitmix64(config.seed ^ (0x7a1a15ULL + trial));
        const SyntheticData data = gen_synthetic(sspec);
        ExperimentConfig trial_config = exp;
        trial_config.seed = sspec.seed;
        const TwoPassOutcome outcome = two_pass(trial_config, data.train, data.test);
        eo[trial] = outcome.original.metrics.error_rate;
        em[trial] = outcome.transformed->metrics.error_rate;
        svo[trial] = static_cast<double>(outcome.original.metrics.sv_count);
        svt[trial] = static_cast<double>(outcome.transformed->metrics.sv_count);
    });

    std::vector<double> decreases;
    double sum_eo = 0.0, sum_em = 0.0, sum_svo = 0.0, sum_svt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_eo += eo[i];
        sum_em += em[i];
        sum_svo += svo[i];
        sum_svt += svt[i];
        if (auto d = error_decrease(eo[i], em[i])) {
            decreases.push_back(*d);
        } else {
            ++cell.skipped_zero_error;
        }
    }
    cell.mean_error_original = sum_eo / static_cast<double>(n);
    cell.mean_error_modified = sum_em / static_cast<double>(n);
    cell.mean_sv_original = sum_svo / static_cast<double>(n);
    cell.mean_sv_transformed = sum_svt / static_cast<double>(n);
    const MeanCi ci = mean_ci95(decreases);
    cell.error_decrease_mean = ci.mean;
    cell.error_decrease_ci95 = ci.half_width;
    cell.error_decrease_pooled =
        cell.mean_error_original > 0.0
            ? (cell.mean_error_original - cell.mean_error_modified) /
                  cell.mean_error_original * 100.0
            : 0.0;
    return cell;
}

}  // namespace confkern
