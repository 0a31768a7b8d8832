#include "confkern/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "confkern/errors.hpp"

namespace confkern {

namespace {

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

}  // namespace

SparseVector::SparseVector(std::size_t dim, std::vector<Entry> entries, bool simplex)
    : dim_(dim), entries_(std::move(entries)), simplex_(simplex) {
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].index >= dim_) {
            throw DataError("sparse vector index " + std::to_string(entries_[i].index) +
                            " out of range for dim " + std::to_string(dim_));
        }
        if (i > 0 && entries_[i].index == entries_[i - 1].index) {
            throw DataError("duplicate sparse vector index " +
                            std::to_string(entries_[i].index));
        }
    }
    double sq = 0.0;
    for (const Entry& e : entries_) {
        sq += e.value * e.value;
        value_sum_ += e.value;
    }
    l2_norm_ = std::sqrt(sq);
    if (simplex_) {
        for (const Entry& e : entries_) {
            if (e.value <= 0.0) {
                throw DataError("simplex vector has non-positive value at index " +
                                std::to_string(e.index));
            }
        }
        if (std::abs(value_sum_ - 1.0) > kSimplexTol) {
            throw DataError("simplex vector sums to " + std::to_string(value_sum_) +
                            ", expected 1");
        }
    }
}

SparseVector SparseVector::from_dense(std::span<const double> values, bool simplex) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) {
            entries.push_back({static_cast<std::uint32_t>(i), values[i]});
        }
    }
    return SparseVector(values.size(), std::move(entries), simplex);
}

double SparseVector::at(std::size_t index) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), index,
        [](const Entry& e, std::size_t idx) { return e.index < idx; });
    if (it != entries_.end() && it->index == index) return it->value;
    return 0.0;
}

std::vector<double> SparseVector::to_dense() const {
    std::vector<double> out(dim_, 0.0);
    for (const Entry& e : entries_) out[e.index] = e.value;
    return out;
}

namespace {

void check_dims(const SparseVector& a, const SparseVector& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DataError(std::string(op) + ": dimension mismatch (" +
                        std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

double dot(const SparseVector& a, const SparseVector& b) {
    check_dims(a, b, "dot");
    auto ea = a.entries();
    auto eb = b.entries();
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].index == eb[j].index) {
            sum += ea[i].value * eb[j].value;
            ++i;
            ++j;
        } else if (ea[i].index < eb[j].index) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

double norm2(const SparseVector& a) { return a.l2_norm(); }

double sq_euclidean_dist(const SparseVector& a, const SparseVector& b) {
    check_dims(a, b, "sq_euclidean_dist");
    auto ea = a.entries();
    auto eb = b.entries();
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
            sum += ea[i].value * ea[i].value;
            ++i;
        } else if (i == ea.size() || eb[j].index < ea[i].index) {
            sum += eb[j].value * eb[j].value;
            ++j;
        } else {
            const double d = ea[i].value - eb[j].value;
            sum += d * d;
            ++i;
            ++j;
        }
    }
    return sum;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
    check_dims(a, b, "cosine_similarity");
    if (a.l2_norm() == 0.0 || b.l2_norm() == 0.0) {
        throw DataError("cosine similarity of a zero vector is undefined");
    }
    return clamp_unit(dot(a, b) / (a.l2_norm() * b.l2_norm()));
}

double cosine_distance(const SparseVector& a, const SparseVector& b) {
    return 1.0 - cosine_similarity(a, b);
}

double geodesic_distance(const SparseVector& a, const SparseVector& b) {
    check_dims(a, b, "geodesic_distance");
    if (!a.is_simplex() || !b.is_simplex()) {
        throw DataError("geodesic_distance requires simplex-embedded vectors");
    }
    return detail::geodesic_formula(a, b);
}

namespace detail {

double geodesic_formula(const SparseVector& a, const SparseVector& b) {
    auto ea = a.entries();
    auto eb = b.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].index == eb[j].index) {
            const double prod = ea[i].value * eb[j].value;
            if (prod > 0.0) s += std::sqrt(prod);
            ++i;
            ++j;
        } else if (ea[i].index < eb[j].index) {
            ++i;
        } else {
            ++j;
        }
    }
    // Floating-point sums like sum_i sqrt(t_i t_i) can exceed 1 by ~1e-16;
    // clamp before arccos.
    return 2.0 * std::acos(clamp_unit(s));
}

}  // namespace detail

}  // namespace confkern
