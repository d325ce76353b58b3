// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "blockcorr/errors.hpp"

namespace blockcorr {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Lower regularized gamma by its power series.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by the modified Lentz continued fraction.
double gamma_q_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double normal_pdf(double x) {
    static const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0) throw InvalidInputError("gamma shape must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) throw InvalidInputError("gamma shape must be positive");
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_squared_upper_tail(double x, double dof) {
    if (dof <= 0.0) throw InvalidInputError("chi-squared needs positive degrees of freedom");
    if (x <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double kolmogorov_upper_tail(double lambda) {
    if (lambda <= 1e-3) return 1.0;
    if (lambda < 1.18) {
        // 1 - CDF via the rapidly converging small-lambda form.
        const double f = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int j = 1; j < 40; j += 2) {
            const double term = std::exp(-f * j * j);
            cdf += term;
            if (term < kEps) break;
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double tail = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        tail += sign * term;
        if (term < kEps) break;
        sign = -sign;
    }
    return std::clamp(2.0 * tail, 0.0, 1.0);
}

KsResult ks_test_normal(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n == 0) throw InvalidInputError("empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(sorted[i]);
        d = std::max(d, std::max(cdf - static_cast<double>(i) / dn,
                                 static_cast<double>(i + 1) / dn - cdf));
    }
    return {d, kolmogorov_upper_tail(std::sqrt(dn) * d)};
}

KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidInputError("empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = na * nb / (na + nb);
    return {d, kolmogorov_upper_tail(std::sqrt(ne) * d)};
}

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

SampleMoments sample_moments(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw InvalidInputError("need at least two values for sample moments");
    SampleMoments m;
    m.count = n;
    const double dn = static_cast<double>(n);
    m.mean = compensated_sum(values) / dn;

    std::vector<double> sq(n);
    std::vector<double> cu(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = values[i] - m.mean;
        sq[i] = c * c;
        cu[i] = c * c * c;
    }
    const double s2 = compensated_sum(sq);
    m.variance = s2 / (dn - 1.0);
    if (n >= 3) {
        const double s3 = compensated_sum(cu);
        m.k3 = dn * s3 / ((dn - 1.0) * (dn - 2.0));
    }
    return m;
}

}  // namespace blockcorr
