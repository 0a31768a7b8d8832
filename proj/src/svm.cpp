#include "confkern/svm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "confkern/errors.hpp"
#include "confkern/parallel.hpp"

namespace confkern {

void TrainSet::validate() const {
    if (points.size() != labels.size()) {
        throw DataError("train set: points/labels length mismatch");
    }
    if (points.size() < 2) throw DataError("train set: need at least 2 points");
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            pos = true;
        } else if (labels[i] == -1) {
            neg = true;
        } else {
            throw DataError("train set: label at " + std::to_string(i) +
                            " is not +-1");
        }
        if (points[i].dim() != points[0].dim()) {
            throw DataError("train set: point " + std::to_string(i) +
                            " has mismatched dim");
        }
    }
    if (!pos || !neg) throw DataError("train set: single-class fold");
}

namespace {

/// Kernel rows over the training points, either fully materialized or held
/// in an LRU cache. Single-threaded use by the trainer.
class KernelRows {
public:
    KernelRows(const KernelEvaluator& kernel, std::span<const SparseVector> pts,
               std::size_t capacity, bool materialize)
        : kernel_(kernel), pts_(pts), capacity_(std::max<std::size_t>(capacity, 2)) {
        // A cache at least as large as the problem degenerates to full
        // materialization; take the cheaper bookkeeping.
        if (materialize || pts.size() <= capacity_) {
            all_.resize(pts.size());
            parallel_for(pts.size(), 0, [&](std::size_t i) {
                all_[i].resize(pts_.size());
                kernel_.eval_row(pts_[i], pts_, all_[i]);
            });
            materialized_ = true;
        }
    }

    const std::vector<double>& row(std::size_t i) {
        if (materialized_) return all_[i];
        if (auto it = map_.find(i); it != map_.end()) {
            order_.splice(order_.begin(), order_, it->second.second);
            return it->second.first;
        }
        if (map_.size() >= capacity_) {
            map_.erase(order_.back());
            order_.pop_back();
        }
        order_.push_front(i);
        auto& slot = map_[i];
        slot.second = order_.begin();
        slot.first.resize(pts_.size());
        kernel_.eval_row(pts_[i], pts_, slot.first);
        return slot.first;
    }

private:
    const KernelEvaluator& kernel_;
    std::span<const SparseVector> pts_;
    std::size_t capacity_;
    bool materialized_ = false;
    std::vector<std::vector<double>> all_;
    std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> map_;
    std::list<std::size_t> order_;
};

}  // namespace

TrainedModel train(const TrainSet& ts, std::shared_ptr<const KernelEvaluator> kernel,
                   const TrainOptions& opts) {
    ts.validate();
    if (!(opts.C > 0.0)) throw DataError("train: C must be > 0");
    if (!(opts.tol > 0.0)) throw DataError("train: tol must be > 0");
    const std::size_t n = ts.size();
    const double C = opts.C;
    const std::size_t max_iter = opts.max_passes > 0 ? opts.max_passes : 10 * n;
    const std::vector<int>& y = ts.labels;

    KernelRows rows(*kernel, ts.points, opts.cache_rows, opts.materialize_gram);

    // Minimize 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, 0 <= a <= C, y'a = 0.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    std::vector<double> diag(n);
    for (std::size_t k = 0; k < n; ++k) diag[k] = kernel->eval(ts.points[k], ts.points[k]);

    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0;; ++iter) {
        // First element by maximal KKT violation over the "up" set; the gap
        // against the "down" set is the stopping criterion.
        double up_best = -std::numeric_limits<double>::infinity();
        double down_best = std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = -y[k] * grad[k];
            const bool in_up = (y[k] == 1) ? alpha[k] < C : alpha[k] > 0.0;
            const bool in_down = (y[k] == 1) ? alpha[k] > 0.0 : alpha[k] < C;
            if (in_up && v > up_best) {
                up_best = v;
                i = static_cast<std::ptrdiff_t>(k);
            }
            if (in_down && v < down_best) down_best = v;
        }
        if (i < 0) throw NumericalError("smo: working set selection failed");
        gap = up_best - down_best;
        if (gap <= opts.tol) break;
        if (iter >= max_iter) {
            throw NumericalError(
                "smo: did not converge in " + std::to_string(max_iter) +
                " pair updates; KKT gap " + std::to_string(gap) +
                " > tol (non-PSD kernel or budget too small)");
        }

        const std::vector<double>& ki = rows.row(static_cast<std::size_t>(i));

        // Partner by maximal second-order objective decrease among the
        // down-set points still violating against i. First-order pairing
        // zigzags badly on near-singular Gram matrices (wide kernels).
        std::ptrdiff_t j = -1;
        double best_dec = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const bool in_down = (y[k] == 1) ? alpha[k] > 0.0 : alpha[k] < C;
            if (!in_down) continue;
            const double diff = up_best - (-y[k] * grad[k]);
            if (diff <= 0.0) continue;
            double a = diag[i] + diag[k] - 2.0 * ki[k];
            if (a <= 0.0) a = 1e-12;
            const double dec = diff * diff / a;
            if (dec > best_dec) {
                best_dec = dec;
                j = static_cast<std::ptrdiff_t>(k);
            }
        }
        if (j < 0) {
            throw NumericalError("smo: no admissible partner with KKT gap " +
                                 std::to_string(gap));
        }

        // row(i) is at the LRU front, so fetching row(j) cannot evict it;
        // both references stay valid for this update.
        const std::vector<double>& kj = rows.row(static_cast<std::size_t>(j));

        double eta = ki[i] + kj[j] - 2.0 * ki[j];
        if (eta <= 0.0) eta = 1e-12;  // non-PSD direction; step to the box edge

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        const double sum = y[i] * old_ai + y[j] * old_aj;
        const double pair_violation = up_best - (-y[j] * grad[j]);
        double ai = old_ai + y[i] * (pair_violation / eta);
        ai = std::clamp(ai, 0.0, C);
        double aj = y[j] * (sum - y[i] * ai);
        aj = std::clamp(aj, 0.0, C);
        ai = y[i] * (sum - y[j] * aj);
        ai = std::clamp(ai, 0.0, C);

        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        if (dai == 0.0 && daj == 0.0) {
            throw NumericalError("smo: stalled with KKT gap " + std::to_string(gap));
        }
        alpha[i] = ai;
        alpha[j] = aj;

#ifndef NDEBUG
        {  // pair update must not increase the (minimized) dual objective
            const double dobj = grad[i] * dai + grad[j] * daj +
                                0.5 * (ki[i] * dai * dai + kj[j] * daj * daj) +
                                y[i] * y[j] * ki[j] * dai * daj;
            assert(dobj <= 1e-9 * std::max(1.0, std::abs(gap)));
            double lin = 0.0;
            for (std::size_t k = 0; k < n; ++k) lin += alpha[k] * y[k];
            assert(std::abs(lin) <= 1e-8 * std::max(1.0, C));
        }
#endif

        for (std::size_t k = 0; k < n; ++k) {
            grad[k] += y[k] * (y[i] * ki[k] * dai + y[j] * kj[k] * daj);
        }
    }

    TrainedModel m;
    m.C = C;
    m.kkt_violation = std::max(gap, 0.0);
    m.kernel = std::move(kernel);
    m.kernel_desc = m.kernel->describe();

    // Bias from the free support vectors; midpoint of the feasible interval
    // when every alpha sits on a bound.
    double b_sum = 0.0;
    std::size_t b_count = 0;
    double up_best = -std::numeric_limits<double>::infinity();
    double down_best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double v = -y[k] * grad[k];
        if (alpha[k] > 0.0 && alpha[k] < C) {
            b_sum += v;
            ++b_count;
        }
        const bool in_up = (y[k] == 1) ? alpha[k] < C : alpha[k] > 0.0;
        const bool in_down = (y[k] == 1) ? alpha[k] > 0.0 : alpha[k] < C;
        if (in_up) up_best = std::max(up_best, v);
        if (in_down) down_best = std::min(down_best, v);
    }
    m.bias = b_count > 0 ? b_sum / static_cast<double>(b_count)
                         : 0.5 * (up_best + down_best);

    const double dust = 1e-12 * std::max(1.0, C);
    double obj = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        obj += alpha[k] * (1.0 - 0.5 * (grad[k] + 1.0));  // e'a - 1/2 a'Qa
        if (alpha[k] > dust) {
            m.sv_indices.push_back(k);
            m.alphas.push_back(alpha[k]);
            m.sv_labels.push_back(y[k]);
            m.sv_points.push_back(ts.points[k]);
        }
    }
    m.dual_objective = obj;
    if (m.sv_indices.empty()) throw NumericalError("smo: converged with no support vectors");
    return m;
}

double TrainedModel::decision(const SparseVector& x) const {
    std::vector<double> k(sv_points.size());
    kernel->eval_row(x, sv_points, k);
    double f = bias;
    for (std::size_t i = 0; i < sv_points.size(); ++i) {
        f += alphas[i] * sv_labels[i] * k[i];
    }
    return f;
}

int TrainedModel::predict(const SparseVector& x) const {
    return decision(x) >= 0.0 ? 1 : -1;
}

std::vector<int> TrainedModel::predict(std::span<const SparseVector> xs) const {
    std::vector<int> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = predict(xs[i]);
    return out;
}

}  // namespace confkern
