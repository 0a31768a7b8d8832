#include "confkern/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "confkern/errors.hpp"
#include "confkern/parallel.hpp"
#include "confkern/rng.hpp"

namespace confkern {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DataError(msg);
}

}  // namespace

KernelSpec KernelSpec::linear() { return KernelSpec{KernelKind::Linear}; }

KernelSpec KernelSpec::gaussian(double gamma) {
    require(gamma > 0.0, "Gaussian kernel requires gamma > 0");
    KernelSpec s;
    s.kind = KernelKind::Gaussian;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::gaussian_sigma(double sigma) {
    require(sigma > 0.0, "Gaussian kernel requires sigma > 0");
    KernelSpec s;
    s.kind = KernelKind::Gaussian;
    s.sigma = sigma;
    s.gamma = 1.0 / (2.0 * sigma * sigma);
    return s;
}

KernelSpec KernelSpec::gc(double gamma) {
    require(gamma > 0.0, "GC kernel requires gamma > 0");
    KernelSpec s;
    s.kind = KernelKind::GC;
    s.gamma = gamma;
    return s;
}

KernelSpec KernelSpec::diffusion(double t, bool log_scale, bool drop_constant) {
    require(t > 0.0, "Diffusion kernel requires t > 0");
    KernelSpec s;
    s.kind = KernelKind::Diffusion;
    s.t = t;
    s.log_scale_diffusion = log_scale;
    s.drop_diffusion_constant = drop_constant;
    return s;
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case KernelKind::Linear:
            os << "linear";
            break;
        case KernelKind::Gaussian:
            os << "gaussian(gamma=" << gamma;
            if (sigma) os << ", sigma=" << *sigma;
            os << ")";
            break;
        case KernelKind::GC:
            os << "gc(gamma=" << gamma << ")";
            break;
        case KernelKind::Diffusion:
            os << "diffusion(t=" << t;
            if (log_scale_diffusion) os << ", log";
            if (drop_diffusion_constant) os << ", no-const";
            os << ")";
            break;
    }
    return os.str();
}

namespace detail {

double eval_kernel_relaxed(const KernelSpec& spec, const SparseVector& a,
                           const SparseVector& b) {
    switch (spec.kind) {
        case KernelKind::Linear:
            return dot(a, b);
        case KernelKind::Gaussian:
            return std::exp(-spec.gamma * sq_euclidean_dist(a, b));
        case KernelKind::GC:
            return std::exp(-spec.gamma * (1.0 - cosine_similarity(a, b)));
        case KernelKind::Diffusion: {
            if (a.dim() != b.dim()) throw DataError("diffusion kernel: dimension mismatch");
            const double half_angle = 0.5 * detail::geodesic_formula(a, b);
            const double exponent = -half_angle * half_angle / spec.t;
            if (spec.drop_diffusion_constant) {
                return spec.log_scale_diffusion ? exponent : std::exp(exponent);
            }
            // Manifold dimension of the simplex in R^dim.
            const double n = a.dim() > 0 ? static_cast<double>(a.dim()) - 1.0 : 0.0;
            const double log_const = -0.5 * n * std::log(4.0 * std::numbers::pi * spec.t);
            const double log_k = log_const + exponent;
            return spec.log_scale_diffusion ? log_k : std::exp(log_k);
        }
    }
    throw std::logic_error("unreachable kernel kind");
}

}  // namespace detail

double eval_kernel(const KernelSpec& spec, const SparseVector& a, const SparseVector& b) {
    if (spec.kind == KernelKind::GC) {
        if (a.l2_norm() == 0.0 || b.l2_norm() == 0.0) {
            throw DataError("GC kernel is undefined for zero vectors");
        }
    }
    if (spec.kind == KernelKind::Diffusion) {
        if (!a.is_simplex() || !b.is_simplex()) {
            throw DataError("diffusion kernel requires simplex-embedded vectors");
        }
    }
    return detail::eval_kernel_relaxed(spec, a, b);
}

void KernelEvaluator::eval_row(const SparseVector& x, std::span<const SparseVector> pts,
                               std::span<double> out) const {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = eval(pts[i], x);
}

GramMatrix gram(const KernelEvaluator& kernel, std::span<const SparseVector> points,
                int n_threads) {
    if (points.empty()) throw DataError("gram: empty point set");
    const std::size_t n = points.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (points[i].dim() != points[0].dim()) {
            throw DataError("gram: point " + std::to_string(i) + " has mismatched dim");
        }
    }
    Eigen::MatrixXd k(n, n);
    parallel_for(n, n_threads, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            try {
                k(i, j) = kernel.eval(points[i], points[j]);
            } catch (const std::exception& e) {
                throw DataError("gram: kernel failed at pair (" + std::to_string(i) + ", " +
                                std::to_string(j) + "): " + e.what());
            }
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) k(i, j) = k(j, i);
    }
    return GramMatrix{std::move(k), kernel.describe()};
}

GramMatrix gram(const KernelSpec& spec, std::span<const SparseVector> points,
                int n_threads) {
    return gram(BaseKernel(spec), points, n_threads);
}

PsdCheck check_psd(const GramMatrix& g, double rel_tol) {
    const auto n = g.values.rows();
    if (n == 0 || g.values.cols() != n) throw DataError("check_psd: matrix not square");
    PsdCheck out;
    if (n <= 500) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.values,
                                                              Eigen::EigenvaluesOnly);
        out.min_eigenvalue = solver.eigenvalues().minCoeff();
        out.max_eigenvalue = solver.eigenvalues().maxCoeff();
    } else {
        // Spot check: Rayleigh quotients only bound the spectrum, but a full
        // eigendecomposition at this size is not worth it for property tests.
        Rng rng(0x5eed);
        double min_q = std::numeric_limits<double>::infinity();
        double max_q = -min_q;
        Eigen::VectorXd z(n);
        for (int trial = 0; trial < 256; ++trial) {
            for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.uniform(-1.0, 1.0);
            const double q = z.dot(g.values * z) / z.squaredNorm();
            min_q = std::min(min_q, q);
            max_q = std::max(max_q, q);
        }
        out.min_eigenvalue = min_q;
        out.max_eigenvalue = max_q;
    }
    out.psd = out.min_eigenvalue >= -rel_tol * std::max(1.0, out.max_eigenvalue);
    return out;
}

}  // namespace confkern
