// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/freeness.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "blockcorr/detail/pair_sums.hpp"
#include "blockcorr/distributions.hpp"
#include "blockcorr/errors.hpp"
#include "blockcorr/parallel.hpp"
#include "blockcorr/sampling.hpp"

namespace blockcorr {

namespace {

void validate(const ProjectionSumModel& model) {
    if (model.dimension < 1) throw InvalidInputError("model dimension must be positive");
    if (model.ranks.empty()) throw InvalidInputError("model needs at least one rank");
    for (std::size_t i = 0; i < model.ranks.size(); ++i)
        if (model.ranks[i] < 1 || model.ranks[i] > model.dimension)
            throw InvalidInputError("rank " + std::to_string(model.ranks[i]) + " of block " +
                                    std::to_string(i + 1) + " is outside [1, " +
                                    std::to_string(model.dimension) + "]");
}

McEstimate mc_average(std::size_t reps, RngStream rng,
                      const std::function<double(RngStream)>& draw) {
    if (reps < 100) throw InvalidInputError("Monte Carlo estimates need reps >= 100");
    std::vector<double> values(reps);
    parallel_for_index(reps, [&](std::size_t r) { values[r] = draw(rng.child(r)); });
    const SampleMoments m = sample_moments(values);
    return {m.mean, std::sqrt(m.variance / static_cast<double>(reps)), reps};
}

}  // namespace

WeingartenPattern weingarten_pattern_from_string(std::string_view name) {
    if (name == "m2") return WeingartenPattern::m2;
    if (name == "m4_i") return WeingartenPattern::m4_i;
    if (name == "m4_ii") return WeingartenPattern::m4_ii;
    if (name == "m4_iii") return WeingartenPattern::m4_iii;
    if (name == "m4_iv") return WeingartenPattern::m4_iv;
    throw InvalidInputError("unknown weingarten pattern: " + std::string(name));
}

std::string_view to_string(WeingartenPattern pattern) {
    switch (pattern) {
        case WeingartenPattern::m2: return "m2";
        case WeingartenPattern::m4_i: return "m4_i";
        case WeingartenPattern::m4_ii: return "m4_ii";
        case WeingartenPattern::m4_iii: return "m4_iii";
        case WeingartenPattern::m4_iv: return "m4_iv";
    }
    return "?";
}

Eigen::MatrixXd sample_projection_sum(const ProjectionSumModel& model, RngStream rng) {
    validate(model);
    const int n = model.dimension;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < model.ranks.size(); ++i) {
        const Eigen::MatrixXd o = haar_orthogonal(n, rng.child(i));
        // O' P O only sees the first p_i rows of O.
        const auto top = o.topRows(model.ranks[i]);
        q.noalias() += top.transpose() * top;
    }
    q = ((q + q.transpose()) * 0.5).eval();
    return q;
}

double trace_sq_mean(const ProjectionSumModel& model) {
    validate(model);
    double p = 0.0;
    for (int r : model.ranks) p += r;
    return p + detail::pair_product_sum(model.ranks, static_cast<double>(model.dimension));
}

double trace_sq_var_leading(const ProjectionSumModel& model) {
    validate(model);
    return 4.0 * detail::pair_variance_sum(model.ranks, static_cast<double>(model.dimension));
}

double weingarten_moment(WeingartenPattern pattern, int n) {
    const double nn = n;
    switch (pattern) {
        case WeingartenPattern::m2:
            if (n < 1) throw InvalidInputError("pattern m2 needs N >= 1");
            return 1.0 / nn;
        case WeingartenPattern::m4_i:
            if (n < 2) throw InvalidInputError("fourth-moment patterns need N >= 2");
            return 3.0 / (nn * (nn + 2.0));
        case WeingartenPattern::m4_ii:
            if (n < 2) throw InvalidInputError("fourth-moment patterns need N >= 2");
            return 1.0 / (nn * (nn + 2.0));
        case WeingartenPattern::m4_iii:
            if (n < 2) throw InvalidInputError("fourth-moment patterns need N >= 2");
            return (nn + 1.0) / (nn * (nn - 1.0) * (nn + 2.0));
        case WeingartenPattern::m4_iv:
            if (n < 2) throw InvalidInputError("fourth-moment patterns need N >= 2");
            return -1.0 / (nn * (nn - 1.0) * (nn + 2.0));
    }
    throw InvalidInputError("unknown weingarten pattern");
}

McEstimate mc_monomial(std::span<const int> rows, std::span<const int> cols, int n,
                       std::size_t reps, RngStream rng) {
    if (rows.size() != cols.size() || rows.empty())
        throw InvalidInputError("row and column index lists must match and be non-empty");
    for (std::size_t t = 0; t < rows.size(); ++t)
        if (rows[t] < 1 || rows[t] > n || cols[t] < 1 || cols[t] > n)
            throw InvalidInputError("monomial index out of range");
    std::vector<int> r(rows.begin(), rows.end());
    std::vector<int> c(cols.begin(), cols.end());
    return mc_average(reps, rng, [&, r, c, n](RngStream s) {
        const Eigen::MatrixXd o = haar_orthogonal(n, s);
        double prod = 1.0;
        for (std::size_t t = 0; t < r.size(); ++t) prod *= o(r[t] - 1, c[t] - 1);
        return prod;
    });
}

McEstimate mc_weingarten(WeingartenPattern pattern, int n, std::size_t reps, RngStream rng) {
    weingarten_moment(pattern, n);  // validates n for the pattern
    // Canonical index assignments (1-based), fixed for reproducibility.
    switch (pattern) {
        case WeingartenPattern::m2: {
            const std::array<int, 2> i{1, 1}, j{1, 1};
            return mc_monomial(i, j, n, reps, rng);
        }
        case WeingartenPattern::m4_i: {
            const std::array<int, 4> i{1, 1, 1, 1}, j{1, 1, 1, 1};
            return mc_monomial(i, j, n, reps, rng);
        }
        case WeingartenPattern::m4_ii: {
            const std::array<int, 4> i{1, 1, 1, 1}, j{1, 1, 2, 2};
            return mc_monomial(i, j, n, reps, rng);
        }
        case WeingartenPattern::m4_iii: {
            const std::array<int, 4> i{1, 1, 2, 2}, j{1, 1, 2, 2};
            return mc_monomial(i, j, n, reps, rng);
        }
        case WeingartenPattern::m4_iv: {
            const std::array<int, 4> i{1, 2, 1, 2}, j{1, 1, 2, 2};
            return mc_monomial(i, j, n, reps, rng);
        }
    }
    throw InvalidInputError("unknown weingarten pattern");
}

double cross_term_mean(int rank_a, int rank_b, int n) {
    if (n < 1 || rank_a < 1 || rank_a > n || rank_b < 1 || rank_b > n)
        throw InvalidInputError("ranks must lie in [1, N]");
    return static_cast<double>(rank_a) * static_cast<double>(rank_b) / n;
}

McEstimate mc_cross_term(int rank_a, int rank_b, int n, std::size_t reps, RngStream rng) {
    cross_term_mean(rank_a, rank_b, n);  // validates
    return mc_average(reps, rng, [rank_a, rank_b, n](RngStream s) {
        const Eigen::MatrixXd oa = haar_orthogonal(n, s.child(0));
        const Eigen::MatrixXd ob = haar_orthogonal(n, s.child(1));
        // tr(A'A B'B) = ||A B'||_F^2 with A, B the projected row blocks.
        return (oa.topRows(rank_a) * ob.topRows(rank_b).transpose()).squaredNorm();
    });
}

MomentReport mc_moments(const ProjectionSumModel& model, std::size_t reps, RngStream rng) {
    validate(model);
    if (reps < 100) throw InvalidInputError("Monte Carlo estimates need reps >= 100");

    std::vector<double> values(reps);
    parallel_for_index(reps, [&](std::size_t r) {
        values[r] = sample_projection_sum(model, rng.child(r)).squaredNorm();
    });

    MomentReport report;
    report.reps = reps;
    const SampleMoments m = sample_moments(values);
    report.mc_mean = m.mean;
    report.mc_var = m.variance;
    report.mc_k3 = m.k3;
    report.se_mean = std::sqrt(m.variance / static_cast<double>(reps));

    // Batch standard errors for the higher cumulants; near-equal consecutive
    // batches keep the split deterministic.
    constexpr std::size_t kBatches = 20;
    std::vector<double> batch_var, batch_k3;
    batch_var.reserve(kBatches);
    batch_k3.reserve(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b) {
        const std::size_t lo = reps * b / kBatches;
        const std::size_t hi = reps * (b + 1) / kBatches;
        if (hi - lo < 3) continue;
        const SampleMoments bm =
            sample_moments(std::span<const double>(values.data() + lo, hi - lo));
        batch_var.push_back(bm.variance);
        batch_k3.push_back(bm.k3);
    }
    if (batch_var.size() >= 2) {
        const SampleMoments v = sample_moments(batch_var);
        const SampleMoments c = sample_moments(batch_k3);
        report.se_var = std::sqrt(v.variance / static_cast<double>(batch_var.size()));
        report.se_k3 = std::sqrt(c.variance / static_cast<double>(batch_k3.size()));
    }

    report.exact_mean = trace_sq_mean(model);
    report.leading_var = trace_sq_var_leading(model);
    return report;
}

}  // namespace blockcorr
