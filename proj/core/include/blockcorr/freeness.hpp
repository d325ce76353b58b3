// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "blockcorr/rng.hpp"

namespace blockcorr {

/// The rotated-projection-sum model: Q = sum_i O_i' P_i O_i with independent
/// Haar orthogonal O_i of size N and diagonal projections P_i of rank p_i.
/// Under the independence null this matches the reduced companion matrix in
/// distribution with N = n - 1.
struct ProjectionSumModel {
    int dimension = 0;       // N
    std::vector<int> ranks;  // p_1, ..., p_k, each in [1, N]
};

/// Moment patterns of Haar orthogonal entries with closed-form expectations:
///   m2     E O_11^2                = 1/N
///   m4_i   E O_11^4                = 3/(N(N+2))
///   m4_ii  E O_11^2 O_12^2         = 1/(N(N+2))
///   m4_iii E O_11^2 O_22^2         = (N+1)/(N(N-1)(N+2))
///   m4_iv  E O_11 O_21 O_12 O_22   = -1/(N(N-1)(N+2))
enum class WeingartenPattern { m2, m4_i, m4_ii, m4_iii, m4_iv };

WeingartenPattern weingarten_pattern_from_string(std::string_view name);
std::string_view to_string(WeingartenPattern pattern);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t reps = 0;
};

/// Monte Carlo vs closed-form report for tr Q^2 over the projection model.
struct MomentReport {
    double mc_mean = 0.0;
    double mc_var = 0.0;
    double mc_k3 = 0.0;  // unbiased third cumulant
    double se_mean = 0.0;
    double se_var = 0.0;
    double se_k3 = 0.0;
    double exact_mean = 0.0;   // closed form for E tr Q^2
    double leading_var = 0.0;  // leading-order Var tr Q^2
    std::size_t reps = 0;
};

/// One draw of Q; symmetric, eigenvalues in [0, k], trace = sum of ranks.
Eigen::MatrixXd sample_projection_sum(const ProjectionSumModel& model, RngStream rng);

/// Exact E tr Q^2 = p + sum_{i != j} p_i p_j / N with p = sum p_i.
double trace_sq_mean(const ProjectionSumModel& model);

/// Leading-order Var tr Q^2 = 4 sum_{i != j} p_i p_j (N-p_i)(N-p_j) / N^4.
/// Exactly four times the test calibration b_n when N = n - 1.
double trace_sq_var_leading(const ProjectionSumModel& model);

/// Closed-form Haar entry moment for the pattern at dimension N.
double weingarten_moment(WeingartenPattern pattern, int n);

/// Monte Carlo mean of the entry monomial prod_t O(i[t], j[t]) over Haar
/// draws (indices are 1-based rows/columns).
McEstimate mc_monomial(std::span<const int> rows, std::span<const int> cols, int n,
                       std::size_t reps, RngStream rng);

/// Monte Carlo check of weingarten_moment through the canonical index
/// assignment of the pattern (the one listed in the enum docs).
McEstimate mc_weingarten(WeingartenPattern pattern, int n, std::size_t reps, RngStream rng);

/// Exact E tr(O_a' P_a O_a O_b' P_b O_b) = rank_a * rank_b / N.
double cross_term_mean(int rank_a, int rank_b, int n);

/// Monte Carlo companion of cross_term_mean.
McEstimate mc_cross_term(int rank_a, int rank_b, int n, std::size_t reps, RngStream rng);

/// Streams tr Q^2 over `reps` independent draws (parallel over sub-streams,
/// reduced in replicate order) and reports moments with batch standard
/// errors against the closed forms.
MomentReport mc_moments(const ProjectionSumModel& model, std::size_t reps, RngStream rng);

}  // namespace blockcorr
