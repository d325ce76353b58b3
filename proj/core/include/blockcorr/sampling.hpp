// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "blockcorr/block_spec.hpp"
#include "blockcorr/rng.hpp"

namespace blockcorr {

/// Gaussian population N(mean, covariance).
struct Population {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

/// The four simulation populations: (I) standard normal; (II) random means
/// U(-1,1) with independent chi-squared(8) variances; (III) equicorrelated
/// with common correlation 0.15; (IV) three weakly cross-correlated blocks.
enum class Scenario { I, II, III, IV };

Scenario scenario_from_string(std::string_view name);
std::string_view to_string(Scenario s);

/// Haar-distributed n x n random orthogonal matrix: QR of an i.i.d. standard
/// Gaussian matrix with each column of Q flipped to make diag(R) positive.
/// Plain QR without the sign fix is not Haar.
Eigen::MatrixXd haar_orthogonal(int n, RngStream rng);

/// p x n matrix whose columns are i.i.d. N(mean, covariance). The covariance
/// is factored by pivoted Cholesky with an eigen-factor fallback for
/// semi-definite input; eigenvalues below -1e-8 * ||Sigma|| are rejected,
/// ones in [-1e-8 * ||Sigma||, 0) are clipped to zero.
Eigen::MatrixXd gaussian_sample(const Population& population, int n, RngStream rng);

/// Population for one of the four scenarios on the given block layout.
/// Only scenario II consumes randomness. Scenario IV requires k = 3.
Population scenario_population(Scenario scenario, const BlockSpec& spec, RngStream rng);

}  // namespace blockcorr
