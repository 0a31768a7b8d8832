#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "confkern/kernel.hpp"
#include "confkern/sparse_vector.hpp"

namespace confkern {

/// Binary training set: points with labels in {-1, +1}.
struct TrainSet {
    std::vector<SparseVector> points;
    std::vector<int> labels;

    std::size_t size() const { return points.size(); }

    /// Throws DataError unless there are >= 2 points, labels are +-1, both
    /// classes are present, and dimensions agree.
    void validate() const;
};

struct TrainOptions {
    double C = 1.0;
    double tol = 1e-3;
    /// Cap on SMO pair updates; 0 means the default 10 * n. Exhausting the
    /// budget with the KKT gap above tol raises NumericalError (the usual
    /// cause is a non-PSD kernel driving an unbounded ascent).
    std::size_t max_passes = 0;
    std::uint64_t seed = 0;
    /// Kernel rows kept in the LRU cache.
    std::size_t cache_rows = 512;
    /// Precompute the full Gram matrix up front. Only sensible for small n.
    bool materialize_gram = false;
};

/// Result of the dual soft-margin SVM. Only support vectors (alpha > 0) are
/// stored; their points are copied so the model is self-contained. Immutable
/// and safe to share across threads.
struct TrainedModel {
    std::vector<std::size_t> sv_indices;  // into the training set
    std::vector<double> alphas;           // in (0, C]
    std::vector<int> sv_labels;
    std::vector<SparseVector> sv_points;
    double bias = 0.0;
    double C = 0.0;
    double kkt_violation = 0.0;  // final KKT gap, <= tol
    double dual_objective = 0.0;
    std::string kernel_desc;
    std::shared_ptr<const KernelEvaluator> kernel;

    std::size_t sv_count() const { return sv_indices.size(); }

    /// f(x) = sum_i alpha_i y_i K(x_i, x) + b.
    double decision(const SparseVector& x) const;

    /// sign(f), with sign(0) -> +1.
    int predict(const SparseVector& x) const;
    std::vector<int> predict(std::span<const SparseVector> xs) const;
};

/// SMO (pairwise coordinate ascent on the dual) with maximal-violating-pair
/// working set selection and no shrinking. Deterministic: iteration order is
/// a pure function of the inputs; the seed is carried for reproducibility
/// bookkeeping only.
TrainedModel train(const TrainSet& ts, std::shared_ptr<const KernelEvaluator> kernel,
                   const TrainOptions& opts);

/// JSON serialization (schema version 1). Doubles survive bit-exactly, so a
/// reloaded model scores identically. Conformal-kernel models persist their
/// fitted transformation and are reconstructed against the same training set.
std::string save_model_json(const TrainedModel& m);
TrainedModel load_model_json(const std::string& text);

}  // namespace confkern
