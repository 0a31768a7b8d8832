#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace confkern {

/// Immutable sparse vector over a fixed logical dimension. Entries are kept
/// sorted by index with zeros elided; the L2 norm and value sum are computed
/// once at construction. Instances are safe to share across threads.
///
/// A vector may be flagged as simplex-embedded at construction, which asserts
/// that all stored values are positive and sum to 1 within kSimplexTol. The
/// flag is carried rather than re-verified per call.
class SparseVector {
public:
    struct Entry {
        std::uint32_t index;
        double value;

        bool operator==(const Entry&) const = default;
    };

    static constexpr double kSimplexTol = 1e-9;

    SparseVector() = default;

    /// Entries may arrive unsorted; zero values are dropped. Throws DataError
    /// on duplicate indices, an index >= dim, or a violated simplex claim.
    SparseVector(std::size_t dim, std::vector<Entry> entries, bool simplex = false);

    static SparseVector from_dense(std::span<const double> values, bool simplex = false);

    std::size_t dim() const { return dim_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::span<const Entry> entries() const { return entries_; }
    bool is_simplex() const { return simplex_; }

    double l2_norm() const { return l2_norm_; }
    double value_sum() const { return value_sum_; }

    /// Value at a logical index; 0 for elided entries. O(log nnz).
    double at(std::size_t index) const;

    std::vector<double> to_dense() const;

    /// Structural equality (dimension and entries); the simplex flag is
    /// metadata and does not participate.
    bool operator==(const SparseVector& other) const {
        return dim_ == other.dim_ && entries_ == other.entries_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Entry> entries_;
    double l2_norm_ = 0.0;
    double value_sum_ = 0.0;
    bool simplex_ = false;
};

/// <a, b>. Accumulates in ascending index order (two-pointer merge) so the
/// result is bit-reproducible. Throws DataError on dimension mismatch.
double dot(const SparseVector& a, const SparseVector& b);

/// sqrt(<a, a>); 0 for the empty vector.
double norm2(const SparseVector& a);

/// ||a - b||^2. Throws DataError on dimension mismatch.
double sq_euclidean_dist(const SparseVector& a, const SparseVector& b);

/// <a, b> / (||a|| ||b||), clamped to [-1, 1]. Throws DataError if either
/// vector is zero.
double cosine_similarity(const SparseVector& a, const SparseVector& b);

/// 1 - cosine_similarity, in [0, 2].
double cosine_distance(const SparseVector& a, const SparseVector& b);

/// 2 arccos(sum_i sqrt(a_i b_i)): the great-circle distance between the two
/// multinomials after the square-root embedding onto the radius-2 sphere.
/// Requires both vectors to be simplex-flagged; in [0, pi].
double geodesic_distance(const SparseVector& a, const SparseVector& b);

namespace detail {
/// The geodesic formula on raw values, without the simplex-flag check.
/// Negative products under the square root are treated as 0. Used by
/// finite-difference code that evaluates just off the simplex.
double geodesic_formula(const SparseVector& a, const SparseVector& b);
}  // namespace detail

}  // namespace confkern
