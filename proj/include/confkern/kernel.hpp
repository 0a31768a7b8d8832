#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "confkern/sparse_vector.hpp"

namespace confkern {

enum class KernelKind { Linear, Gaussian, GC, Diffusion };

/// Descriptor of a base kernel. Build through the factories, which validate
/// the parameters the kind requires.
///
///   Linear     k(x,y) = <x,y>
///   Gaussian   k(x,y) = exp(-gamma ||x-y||^2)
///   GC         k(x,y) = exp(-gamma (1 - <x,y>/(||x|| ||y||)))
///   Diffusion  k(x,y) = (4 pi t)^(-n/2) exp(-arccos^2(sum_i sqrt(x_i y_i))/t)
///
/// The Gaussian may alternatively be parameterized by a width sigma, with
/// gamma = 1/(2 sigma^2). The Diffusion normalization constant underflows at
/// large n, so a log-scale evaluation and a drop-constant variant exist; the
/// manifold dimension n is taken as dim - 1.
struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double gamma = 0.0;
    std::optional<double> sigma;
    double t = 0.0;
    bool log_scale_diffusion = false;
    bool drop_diffusion_constant = false;

    static KernelSpec linear();
    static KernelSpec gaussian(double gamma);
    static KernelSpec gaussian_sigma(double sigma);
    static KernelSpec gc(double gamma);
    static KernelSpec diffusion(double t, bool log_scale = false, bool drop_constant = false);

    std::string describe() const;
};

/// Single kernel evaluation with full input validation (GC rejects zero
/// vectors, Diffusion requires simplex-embedded inputs).
double eval_kernel(const KernelSpec& spec, const SparseVector& a, const SparseVector& b);

namespace detail {
/// Same formulas without the simplex-flag requirement for Diffusion; used by
/// the geometry module's finite differences.
double eval_kernel_relaxed(const KernelSpec& spec, const SparseVector& a,
                           const SparseVector& b);
}  // namespace detail

/// Pairwise kernel evaluations over a point set. Upper triangle computed
/// (rows in parallel), then mirrored, so symmetry is exact.
struct GramMatrix {
    Eigen::MatrixXd values;
    std::string source;
};

/// Abstract kernel evaluator: base kernels and their conformal
/// transformations share this surface. Implementations are immutable after
/// construction and safe for concurrent use.
class KernelEvaluator {
public:
    virtual ~KernelEvaluator() = default;

    virtual double eval(const SparseVector& a, const SparseVector& b) const = 0;

    /// K(pts[i], x) for all i. The default loops over eval; implementations
    /// with per-argument structure (conformal factors) override it.
    virtual void eval_row(const SparseVector& x, std::span<const SparseVector> pts,
                          std::span<double> out) const;

    virtual std::string describe() const = 0;
};

/// KernelEvaluator over a KernelSpec.
class BaseKernel final : public KernelEvaluator {
public:
    explicit BaseKernel(KernelSpec spec) : spec_(std::move(spec)) {}

    double eval(const SparseVector& a, const SparseVector& b) const override {
        return eval_kernel(spec_, a, b);
    }
    std::string describe() const override { return spec_.describe(); }
    const KernelSpec& spec() const { return spec_; }

private:
    KernelSpec spec_;
};

GramMatrix gram(const KernelEvaluator& kernel, std::span<const SparseVector> points,
                int n_threads = 0);
GramMatrix gram(const KernelSpec& spec, std::span<const SparseVector> points,
                int n_threads = 0);

struct PsdCheck {
    bool psd = false;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

/// True iff lambda_min >= -rel_tol * max(1, lambda_max). Matrices up to
/// 500x500 get a full symmetric eigendecomposition; larger ones are
/// spot-checked with random-projection Rayleigh quotients (a lower bound on
/// lambda_max, an upper bound on lambda_min).
PsdCheck check_psd(const GramMatrix& g, double rel_tol);

}  // namespace confkern
