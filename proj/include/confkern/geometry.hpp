#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "confkern/conformal.hpp"
#include "confkern/kernel.hpp"

namespace confkern {

/// The Riemannian metric g_ij at one point: the mixed second derivative of
/// the kernel at coincident arguments, g_ij(x) = d^2 k(x,y) / dx_i dy_j at
/// y = x. Dense and low-dimensional by design (n <= 64); this module exists
/// to validate the closed-form derivations, not for text-scale geometry.
struct MetricAtPoint {
    std::vector<double> point;
    Eigen::MatrixXd g;
    std::string source;
};

/// Dense two-argument kernel for finite differencing. Obtained from a
/// KernelSpec (or a conformal transform of one) with relaxed validation:
/// perturbed arguments may step slightly off the simplex.
using DenseKernel = std::function<double(std::span<const double>, std::span<const double>)>;

DenseKernel dense_kernel(const KernelSpec& spec);
DenseKernel dense_conformal_kernel(const FittedConformal& f, const KernelSpec& base);

/// Central finite differences of the mixed partial, symmetrized as
/// (g + g^T)/2. No step-size verification; divergent estimates (Diffusion
/// kernel) come out as-is.
MetricAtPoint induced_metric_fd_raw(const DenseKernel& k, std::span<const double> x,
                                    double h);

/// induced_metric_fd_raw plus a Richardson consistency check at h/2: a
/// relative Frobenius discrepancy above 10 * 1e-4 raises NumericalError.
/// h must lie in [1e-6, 1e-2].
MetricAtPoint induced_metric_fd(const DenseKernel& k, std::span<const double> x, double h);

/// Closed form for the GC kernel: g_ij = (gamma/||x||^2)(delta_ij -
/// x_i x_j / ||x||^2), the mixed partial of exp(-gamma(1 - cos)) at y = x.
/// Rank <= n-1; x itself is a null direction.
MetricAtPoint gc_metric_closed(double gamma, std::span<const double> x);

/// Metric induced by the conformally transformed kernel, assembled from the
/// general formula
///   g~_ij = D^2 g_ij + D_i D_j k(x,x) + D (D_i k_j(x,x) + D_j k_i(x,x))
/// with D_i, k_i(x,x) and g_ij all estimated by central differences.
MetricAtPoint conformal_metric(const FittedConformal& f, const KernelSpec& base,
                               std::span<const double> x, double h);

/// The GC specialization g~ = D^2 g + (grad D)(grad D)^T, valid because
/// k(x,x) = 1 and k_i(x,x) = 0 for the GC kernel. g is the closed form;
/// grad D is estimated by central differences. Cross-checks conformal_metric.
MetricAtPoint conformal_metric_gc_closed(const FittedConformal& f, double gamma,
                                         std::span<const double> x, double h);

/// sqrt(max(det g, 0)). With pseudo_det, the product of eigenvalues above
/// 1e-12 replaces the determinant, giving a volume element on the tangent
/// subspace of rank-deficient metrics.
double magnification_factor(const MetricAtPoint& m, bool pseudo_det = false);

}  // namespace confkern
