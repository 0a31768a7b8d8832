#include "confkern/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "confkern/errors.hpp"

namespace confkern {

namespace {

/// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete beta requires a, b > 0");
    if (x < 0.0 || x > 1.0) throw DataError("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast only for x below the mean; use
    // the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the far side.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    if (!(nu > 0.0)) throw DataError("student_t_cdf requires nu > 0");
    if (t == 0.0) return 0.5;
    const double x = nu / (nu + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * nu, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double paired_ttest(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("paired_ttest: unequal lengths");
    const std::size_t n = a.size();
    if (n < 2) throw DataError("paired_ttest: need n >= 2");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    if (var == 0.0) {
        return mean == 0.0 ? 1.0 : std::numeric_limits<double>::denorm_min();
    }
    const double t = mean / std::sqrt(var / static_cast<double>(n));
    const double nu = static_cast<double>(n - 1);
    // Two-sided: P(|T| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
    return regularized_incomplete_beta(0.5 * nu, 0.5, nu / (nu + t * t));
}

MeanCi mean_ci95(std::span<const double> xs) {
    MeanCi out;
    const std::size_t n = xs.size();
    if (n == 0) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(n);
    if (n < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    const double se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    if (se == 0.0) return out;
    // Invert the t CDF at 0.975 by bisection; cheap and dependency-free.
    const double nu = static_cast<double>(n - 1);
    double lo = 0.0, hi = 1e3;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (student_t_cdf(mid, nu) < 0.975 ? lo : hi) = mid;
    }
    out.half_width = 0.5 * (lo + hi) * se;
    return out;
}

}  // namespace confkern
