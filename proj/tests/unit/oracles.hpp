#pragma once

// Independent reference implementations the unit tests check against. These
// deliberately avoid the library's code paths: dense arithmetic instead of
// sparse merges, quadrature instead of continued fractions, projected
// gradient instead of SMO.

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "confkern/rng.hpp"
#include "confkern/sparse_vector.hpp"

namespace oracle {

inline double dense_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dense_norm(const std::vector<double>& a) { return std::sqrt(dense_dot(a, a)); }

inline double dense_sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

inline double dense_geodesic(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::sqrt(a[i] * b[i]);
    s = std::min(1.0, std::max(-1.0, s));
    return 2.0 * std::acos(s);
}

/// Random sparse vector with ~density * dim nonzeros in [-1, 1].
inline confkern::SparseVector random_sparse(confkern::Rng& rng, std::size_t dim,
                                            double density = 0.3) {
    std::vector<confkern::SparseVector::Entry> entries;
    for (std::size_t i = 0; i < dim; ++i) {
        if (rng.uniform01() < density) {
            double v = rng.uniform(-1.0, 1.0);
            if (v == 0.0) v = 0.5;
            entries.push_back({static_cast<std::uint32_t>(i), v});
        }
    }
    if (entries.empty()) entries.push_back({0, rng.uniform(0.1, 1.0)});
    return confkern::SparseVector(dim, std::move(entries));
}

/// Random point on the simplex (positive entries summing to 1) with a given
/// support size.
inline confkern::SparseVector random_simplex(confkern::Rng& rng, std::size_t dim,
                                             std::size_t support) {
    std::vector<std::size_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    support = std::max<std::size_t>(1, std::min(support, dim));
    std::vector<confkern::SparseVector::Entry> entries;
    double sum = 0.0;
    for (std::size_t i = 0; i < support; ++i) {
        const double v = rng.uniform(0.05, 1.0);
        entries.push_back({static_cast<std::uint32_t>(idx[i]), v});
        sum += v;
    }
    for (auto& e : entries) e.value /= sum;
    return confkern::SparseVector(dim, std::move(entries), /*simplex=*/true);
}

/// Student-t two-sided p-value by adaptive Simpson quadrature of the pdf.
/// Wholly independent of the incomplete-beta route.
inline double t_pdf(double x, double nu) {
    const double log_c = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * std::acos(-1.0));
    return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int depth, double fa, double fm, double fb, double whole) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-12) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, depth - 1, fa, flm, fm, left) +
           simpson(f, m, b, depth - 1, fm, frm, fb, right);
}

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, 40, fa, fm, fb, whole);
}

inline double ttest_p_quadrature(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = std::abs(mean / (sd / std::sqrt(static_cast<double>(n))));
    const double nu = static_cast<double>(n - 1);
    const auto pdf = [nu](double x) { return t_pdf(x, nu); };
    // P(|T| >= t) = 1 - 2 * integral_0^t pdf.
    return 1.0 - 2.0 * integrate(pdf, 0.0, t);
}

/// Dual SVM objective by projected gradient ascent on the dense Gram matrix:
/// small steps, alternating projection onto {sum alpha_i y_i = 0} and the
/// box. Slow and simple on purpose.
inline double qp_dual_objective(const std::vector<std::vector<double>>& k,
                                const std::vector<int>& y, double c,
                                long iterations = 1000000, double step = 1e-3) {
    const std::size_t n = y.size();
    std::vector<double> alpha(n, 0.0), grad(n);
    for (long it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                s += alpha[j] * y[i] * y[j] * k[i][j];
            }
            grad[i] = 1.0 - s;
        }
        for (std::size_t i = 0; i < n; ++i) alpha[i] += step * grad[i];
        for (int proj = 0; proj < 32; ++proj) {
            double viol = 0.0;
            for (std::size_t i = 0; i < n; ++i) viol += alpha[i] * y[i];
            for (std::size_t i = 0; i < n; ++i) {
                alpha[i] -= viol * y[i] / static_cast<double>(n);
                alpha[i] = std::min(c, std::max(0.0, alpha[i]));
            }
        }
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += alpha[i];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    return obj;
}

}  // namespace oracle
