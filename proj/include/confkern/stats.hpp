#pragma once

#include <span>

namespace confkern {

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// Lentz continued fraction. |error| < 1e-10 over the tested domain.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Two-sided paired t-test p-value for equal-length samples (n >= 2).
/// Degenerate cases: zero-variance differences give p = 1 when the mean
/// difference is 0, and the sub-normal sentinel (reported as < machine
/// minimum) when it is not (the t statistic is infinite).
double paired_ttest(std::span<const double> a, std::span<const double> b);

/// Mean and the half-width of the 95% t confidence interval of the mean.
struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;
};
MeanCi mean_ci95(std::span<const double> xs);

}  // namespace confkern
