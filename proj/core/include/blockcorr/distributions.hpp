// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blockcorr {

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF Phi(x), computed from erfc so that both tails keep
/// full relative accuracy.
double normal_cdf(double x);

/// 1 - Phi(x), accurate in the far right tail.
double normal_upper_tail(double x);

/// Regularized lower incomplete gamma P(a, x); series for x < a + 1, Lentz
/// continued fraction otherwise. Accurate to about 1e-14 relative.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-squared distribution with `dof` degrees of freedom.
/// Negative or zero statistics map to 1.
double chi_squared_upper_tail(double x, double dof);

/// Upper tail P(K > lambda) of the asymptotic Kolmogorov distribution.
/// Uses the alternating exponential series for large lambda and the
/// theta-transformed series for small lambda.
double kolmogorov_upper_tail(double lambda);

struct KsResult {
    double statistic = 0.0;  // sup-norm distance D
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test of `sample` against the standard
/// normal CDF; the p-value uses the asymptotic law at sqrt(n) scaling.
KsResult ks_test_normal(std::span<const double> sample);

/// Two-sample Kolmogorov-Smirnov test with effective size n1*n2/(n1+n2).
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

/// Neumaier compensated sum; the result does not depend on how callers
/// chunked the work as long as the element order is fixed.
double compensated_sum(std::span<const double> values);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased (k2)
    double k3 = 0.0;        // unbiased third cumulant (k-statistic)
    std::size_t count = 0;
};

/// Mean, unbiased variance and third k-statistic of a sample (needs n >= 3
/// for k3; k3 is reported as 0 below that).
SampleMoments sample_moments(std::span<const double> values);

}  // namespace blockcorr
