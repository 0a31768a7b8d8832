#include "confkern/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "confkern/errors.hpp"
#include "confkern/rng.hpp"

namespace confkern {

double boundary_value(Boundary b, double x) {
    switch (b) {
        case Boundary::Sin:
            return 0.5 * std::sin(2.0 * std::numbers::pi * x);
        case Boundary::Bump:
            return 2.0 * std::exp(-4.0 * x * x) - 1.0;
    }
    throw DataError("unknown boundary");
}

double region_halfwidth(Boundary b) { return b == Boundary::Sin ? 0.5 : 1.0; }

namespace {

TrainSet draw(Boundary b, int n, Rng& rng) {
    const double w = region_halfwidth(b);
    TrainSet ts;
    ts.points.reserve(n);
    ts.labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(-w, w);
        const double y = rng.uniform(-w, w);
        const double coords[2] = {x, y};
        ts.points.push_back(SparseVector::from_dense(coords));
        ts.labels.push_back(y >= boundary_value(b, x) ? 1 : -1);
    }
    return ts;
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
    if (spec.n_train < 1 || spec.n_test < 1) {
        throw DataError("gen_synthetic: sample counts must be positive");
    }
    SyntheticData d;
    Rng train_rng = Rng::derive(spec.seed, 0);
    Rng test_rng = Rng::derive(spec.seed, 1);
    d.train = draw(spec.boundary, spec.n_train, train_rng);
    d.test = draw(spec.boundary, spec.n_test, test_rng);
    return d;
}

BinaryTask make_task(std::span<const Document> docs, TaskMode mode,
                     const std::string& positive, const std::string& negative) {
    BinaryTask task;
    if (mode == TaskMode::OneVsRest) {
        task.name = positive + " vs rest";
        for (std::size_t i = 0; i < docs.size(); ++i) {
            task.doc_indices.push_back(i);
            task.labels.push_back(docs[i].label == positive ? 1 : -1);
        }
    } else {
        if (negative.empty()) throw DataError("make_task: one-vs-one needs a negative topic");
        task.name = positive + " vs " + negative;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            const Document& d = docs[i];
            const bool has_pos = std::find(d.topics.begin(), d.topics.end(), positive) !=
                                 d.topics.end();
            const bool has_neg = std::find(d.topics.begin(), d.topics.end(), negative) !=
                                 d.topics.end();
            if (has_pos && has_neg) continue;  // ambiguous for this pair
            if (d.label == positive) {
                task.doc_indices.push_back(i);
                task.labels.push_back(1);
            } else if (d.label == negative) {
                task.doc_indices.push_back(i);
                task.labels.push_back(-1);
            }
        }
    }
    const auto pos = std::count(task.labels.begin(), task.labels.end(), 1);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(task.labels.size())) {
        throw DataError("make_task: task '" + task.name + "' has an empty class");
    }
    return task;
}

TrainSet materialize(const BinaryTask& task, std::span<const SparseVector> embedded) {
    TrainSet ts;
    ts.points.reserve(task.doc_indices.size());
    for (std::size_t i = 0; i < task.doc_indices.size(); ++i) {
        if (task.doc_indices[i] >= embedded.size()) {
            throw DataError("materialize: document index out of range");
        }
        ts.points.push_back(embedded[task.doc_indices[i]]);
    }
    ts.labels = task.labels;
    return ts;
}

}  // namespace confkern
