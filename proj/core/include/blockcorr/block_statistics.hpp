// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "blockcorr/block_spec.hpp"

namespace blockcorr {

/// p x n data layout: columns are observations.
using DataMatrix = Eigen::MatrixXd;

/// Block correlation matrix B: the sample Gram matrix conjugated by the
/// inverse square roots of its diagonal blocks. Diagonal blocks become
/// identities; off-diagonal blocks hold the sample canonical structure
/// between the corresponding sub-vectors.
struct BlockCorrelation {
    Eigen::MatrixXd matrix;  // p x p, symmetric
    BlockSpec spec;
};

/// (n-1) x (n-1) companion of B: the sum of the k row-space projections of
/// the reduced data blocks. Shares B's nonzero spectrum and stays usable
/// when p exceeds n.
struct ReducedMatrix {
    Eigen::MatrixXd matrix;  // (n-1) x (n-1), symmetric
    BlockSpec spec;
    int sample_count = 0;  // n
};

/// Subtracts the per-row mean of the observations from every column.
DataMatrix center_columns(const DataMatrix& x);

/// The n x n orthogonal Helmert-type matrix: first row constant 1/sqrt(n),
/// row r zeroing out a prefix average.
Eigen::MatrixXd helmert_matrix(int n);

/// Rotates centered data into p x (n-1) i.i.d.-column form: Z = Xc * A' with
/// the first (zero) column dropped; Z Z' = Xc Xc'.
DataMatrix helmert_reduce(const DataMatrix& centered);

/// Block correlation matrix of raw data (centering happens internally).
/// Throws SingularBlockError naming the block whose Gram matrix is
/// numerically rank deficient.
BlockCorrelation block_correlation(const DataMatrix& x, const BlockSpec& spec);

/// Block correlation matrix from a precomputed p x p Gram matrix (for data
/// that is already centered or reduced; no recentering happens here).
BlockCorrelation block_correlation_from_gram(const Eigen::MatrixXd& gram,
                                             const BlockSpec& spec);

/// The reduced companion matrix of raw data (centering and the Helmert
/// rotation happen internally).
ReducedMatrix reduced_matrix(const DataMatrix& x, const BlockSpec& spec);

/// tr C(i, j): the sum of squared sample canonical correlations between
/// blocks i and j. Lives in [0, min(p_i, p_j)].
double pillai_trace(const DataMatrix& x, const BlockSpec& spec, int i, int j);

/// The statistic 0.5 * tr(B^2) - p / 2, equal to the sum of pillai_trace
/// over unordered block pairs. Routed through the reduced matrix whenever
/// n - 1 < p; computed as a squared Frobenius norm either way.
double schott_statistic(const DataMatrix& x, const BlockSpec& spec);

}  // namespace blockcorr
