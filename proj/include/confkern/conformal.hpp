#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "confkern/kernel.hpp"
#include "confkern/sparse_vector.hpp"
#include "confkern/svm.hpp"

namespace confkern {

/// Conformal factor families. All produce a positive scalar D(x); the
/// modified kernel is k~(x,y) = D(x) D(y) k(x,y).
///
///   D1    sum_i alpha_i exp(-||x - x_i||^2 / (2 tau^2)), one global tau
///   D2    sum_i exp(-||x - x_i||^2 / (2 tau_i^2)), per-SV tau_i
///   D3    exp(-kappa f(x)^2), f the first-pass decision function
///   Dcos  the D2 scheme with the cosine distance (unsquared)
///   Darc  the D2 scheme with the sphere geodesic distance (unsquared)
enum class ConformalKind { D1, D2, D3, Dcos, Darc };

/// Exponent denominator for the Dcos/Darc factor. The lineage convention is
/// 2 tau_s^2; the alternatives are exposed for sensitivity checks.
enum class TauDenominator { TwoTauSq, TwoTau, Tau };

struct ConformalSpec {
    ConformalKind kind = ConformalKind::D2;
    double tau = 1.0;    // D1
    int m = 3;           // D2 / Dcos / Darc neighbor count
    double kappa = 1.0;  // D3
    TauDenominator denom = TauDenominator::TwoTauSq;

    static ConformalSpec d1(double tau);
    static ConformalSpec d2(int m = 3);
    static ConformalSpec d3(double kappa);
    static ConformalSpec dcos(int m = 3, TauDenominator denom = TauDenominator::TwoTauSq);
    static ConformalSpec darc(int m = 3, TauDenominator denom = TauDenominator::TwoTauSq);

    std::string describe() const;
};

/// Per-SV scale parameters over the M' = min(M, |SV|-1) nearest SVs under
/// the kind's own distance. For D2 the mean squared Euclidean distance
/// defines tau_s^2 (tau_s is its square root); for Dcos and Darc tau_s is
/// the mean of the unsquared cosine or geodesic distance. A zero tau_s
/// (duplicate SVs) is replaced by the smallest positive tau in the set, or
/// 1e-6 if all are zero. Throws DataError with fewer than 2 SVs.
std::vector<double> fit_taus(const ConformalSpec& spec, std::span<const SparseVector> svs);

/// A conformal factor bound to a first-pass model's support vectors.
struct FittedConformal {
    ConformalSpec spec;
    std::vector<SparseVector> sv_points;
    std::vector<double> sv_taus;    // D2 / Dcos / Darc
    std::vector<double> sv_alphas;  // D1: the raw alpha_i >= 0
    std::shared_ptr<const TrainedModel> base_model;  // D3 decision function
};

FittedConformal fit_conformal(const ConformalSpec& spec,
                              std::shared_ptr<const TrainedModel> first_pass);

/// D(x) > 0. Darc requires a simplex-embedded x.
double eval_D(const FittedConformal& f, const SparseVector& x);

namespace detail {
/// Like eval_D but without the Darc simplex-flag check (geometry module
/// finite differences step slightly off the simplex).
double eval_D_relaxed(const FittedConformal& f, const SparseVector& x);
}  // namespace detail

/// k~(x,y) = D(x) D(y) k_base(x,y). prime_cache precomputes D over the
/// training points once (keyed by address; the training vector must outlive
/// the evaluator); after that the evaluator is read-only and thread-safe.
class ConformalKernel final : public KernelEvaluator {
public:
    ConformalKernel(FittedConformal fitted, KernelSpec base);

    void prime_cache(std::span<const SparseVector> training_points, int n_threads = 0);

    double eval(const SparseVector& a, const SparseVector& b) const override;
    void eval_row(const SparseVector& x, std::span<const SparseVector> pts,
                  std::span<double> out) const override;
    std::string describe() const override;

    /// Cached D(x) when x was primed, otherwise computed on the fly.
    double d_value(const SparseVector& x) const;

    const FittedConformal& fitted() const { return fitted_; }
    const KernelSpec& base() const { return base_; }

private:
    FittedConformal fitted_;
    KernelSpec base_;
    std::unordered_map<const SparseVector*, double> cache_;
};

}  // namespace confkern
