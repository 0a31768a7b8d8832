#include "confkern/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "confkern/errors.hpp"

namespace confkern {

namespace {

constexpr std::size_t kMaxDim = 64;
constexpr double kFdTol = 1e-4;

void check_point(std::span<const double> x) {
    if (x.empty()) throw DataError("geometry: empty point");
    if (x.size() > kMaxDim) {
        throw DataError("geometry: metric computation is limited to dim <= 64");
    }
}

SparseVector as_vector(std::span<const double> x) {
    return SparseVector::from_dense(x, /*simplex=*/false);
}

std::vector<double> perturb(std::span<const double> x, std::size_t i, double h) {
    std::vector<double> out(x.begin(), x.end());
    out[i] += h;
    return out;
}

Eigen::MatrixXd mixed_partial_fd(const DenseKernel& k, std::span<const double> x,
                                 double h) {
    const std::size_t n = x.size();
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xp = perturb(x, i, h);
        const auto xm = perturb(x, i, -h);
        for (std::size_t j = 0; j < n; ++j) {
            const auto yp = perturb(x, j, h);
            const auto ym = perturb(x, j, -h);
            g(i, j) = (k(xp, yp) - k(xp, ym) - k(xm, yp) + k(xm, ym)) / (4.0 * h * h);
        }
    }
    return 0.5 * (g + g.transpose());
}

}  // namespace

DenseKernel dense_kernel(const KernelSpec& spec) {
    return [spec](std::span<const double> a, std::span<const double> b) {
        return detail::eval_kernel_relaxed(spec, as_vector(a), as_vector(b));
    };
}

DenseKernel dense_conformal_kernel(const FittedConformal& f, const KernelSpec& base) {
    return [f, base](std::span<const double> a, std::span<const double> b) {
        const SparseVector va = as_vector(a);
        const SparseVector vb = as_vector(b);
        return detail::eval_D_relaxed(f, va) * detail::eval_D_relaxed(f, vb) *
               detail::eval_kernel_relaxed(base, va, vb);
    };
}

MetricAtPoint induced_metric_fd_raw(const DenseKernel& k, std::span<const double> x,
                                    double h) {
    check_point(x);
    if (!(h > 0.0)) throw DataError("geometry: h must be > 0");
    MetricAtPoint m;
    m.point.assign(x.begin(), x.end());
    m.g = mixed_partial_fd(k, x, h);
    m.source = "fd(h=" + std::to_string(h) + ")";
    return m;
}

MetricAtPoint induced_metric_fd(const DenseKernel& k, std::span<const double> x, double h) {
    check_point(x);
    if (h < 1e-6 || h > 1e-2) throw DataError("geometry: h must lie in [1e-6, 1e-2]");
    MetricAtPoint m = induced_metric_fd_raw(k, x, h);
    const Eigen::MatrixXd refined = mixed_partial_fd(k, x, 0.5 * h);
    const double scale = std::max(refined.norm(), 1e-30);
    const double discrepancy = (m.g - refined).norm() / scale;
    if (discrepancy > 10.0 * kFdTol) {
        throw NumericalError("induced_metric_fd: estimates at h and h/2 differ by " +
                             std::to_string(discrepancy) +
                             " (relative); the mixed partial may not exist here");
    }
    return m;
}

MetricAtPoint gc_metric_closed(double gamma, std::span<const double> x) {
    check_point(x);
    const std::size_t n = x.size();
    double sq = 0.0;
    for (double v : x) sq += v * v;
    if (sq == 0.0) throw DataError("gc_metric_closed: zero vector");
    const double norm = std::sqrt(sq);
    MetricAtPoint m;
    m.point.assign(x.begin(), x.end());
    m.g = Eigen::MatrixXd(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double delta = i == j ? 1.0 : 0.0;
            m.g(i, j) = gamma / sq * (delta - x[i] * x[j] / sq);
        }
    }
    m.source = "gc_closed(gamma=" + std::to_string(gamma) + ")";
    return m;
}

MetricAtPoint conformal_metric(const FittedConformal& f, const KernelSpec& base,
                               std::span<const double> x, double h) {
    check_point(x);
    if (h < 1e-6 || h > 1e-2) throw DataError("geometry: h must lie in [1e-6, 1e-2]");
    const std::size_t n = x.size();
    const DenseKernel k = dense_kernel(base);

    const SparseVector vx = as_vector(x);
    const double d0 = detail::eval_D_relaxed(f, vx);
    const double kxx = detail::eval_kernel_relaxed(base, vx, vx);

    // D_i and k_i(x,x) by central differences.
    Eigen::VectorXd grad_d(n), grad_k(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xp = perturb(x, i, h);
        const auto xm = perturb(x, i, -h);
        grad_d(i) = (detail::eval_D_relaxed(f, as_vector(xp)) -
                     detail::eval_D_relaxed(f, as_vector(xm))) /
                    (2.0 * h);
        grad_k(i) = (k(xp, x) - k(xm, x)) / (2.0 * h);
    }

    const Eigen::MatrixXd g = mixed_partial_fd(k, x, h);

    MetricAtPoint m;
    m.point.assign(x.begin(), x.end());
    m.g = d0 * d0 * g + kxx * (grad_d * grad_d.transpose()) +
          d0 * (grad_d * grad_k.transpose() + grad_k * grad_d.transpose());
    m.g = 0.5 * (m.g + m.g.transpose()).eval();
    m.source = "conformal(" + f.spec.describe() + " * " + base.describe() + ")";
    return m;
}

MetricAtPoint conformal_metric_gc_closed(const FittedConformal& f, double gamma,
                                         std::span<const double> x, double h) {
    check_point(x);
    const std::size_t n = x.size();
    MetricAtPoint base = gc_metric_closed(gamma, x);
    const SparseVector vx = as_vector(x);
    const double d0 = detail::eval_D_relaxed(f, vx);
    Eigen::VectorXd grad_d(n);
    for (std::size_t i = 0; i < n; ++i) {
        grad_d(i) = (detail::eval_D_relaxed(f, as_vector(perturb(x, i, h))) -
                     detail::eval_D_relaxed(f, as_vector(perturb(x, i, -h)))) /
                    (2.0 * h);
    }
    MetricAtPoint m;
    m.point.assign(x.begin(), x.end());
    m.g = d0 * d0 * base.g + grad_d * grad_d.transpose();
    m.source = "conformal_gc_closed(" + f.spec.describe() + ")";
    return m;
}

double magnification_factor(const MetricAtPoint& m, bool pseudo_det) {
    if (m.g.rows() != m.g.cols()) throw DataError("magnification_factor: non-square g");
    if (!pseudo_det) {
        return std::sqrt(std::max(m.g.determinant(), 0.0));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.g, Eigen::EigenvaluesOnly);
    double prod = 1.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double ev = solver.eigenvalues()(i);
        if (ev > 1e-12) prod *= ev;
    }
    return std::sqrt(prod);
}

}  // namespace confkern
