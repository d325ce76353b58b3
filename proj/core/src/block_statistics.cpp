// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/block_statistics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "blockcorr/errors.hpp"

namespace blockcorr {

namespace {

constexpr double kRankTol = 1e-10;  // relative eigenvalue cutoff for block Grams

void require_shape(const DataMatrix& x, const BlockSpec& spec) {
    if (x.rows() != spec.dimension())
        throw InvalidInputError("data has " + std::to_string(x.rows()) +
                                " rows but the block spec needs " +
                                std::to_string(spec.dimension()));
    if (!x.allFinite()) throw InvalidInputError("data contains non-finite entries");
}

struct BlockEigen {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

// Eigendecomposition of one block Gram matrix with the hard rank check.
// No pseudo-inverse fallback: a deficient block invalidates the statistic,
// so it must surface as an error.
BlockEigen gram_eigen(const Eigen::MatrixXd& gram, int block_index) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed for block " +
                             std::to_string(block_index + 1));
    const double largest = eig.eigenvalues().maxCoeff();
    const double smallest = eig.eigenvalues().minCoeff();
    if (largest <= 0.0 || smallest <= kRankTol * largest)
        throw SingularBlockError(
            static_cast<std::size_t>(block_index),
            "block " + std::to_string(block_index + 1) +
                " has a numerically singular Gram matrix (eigenvalue ratio " +
                std::to_string(largest > 0.0 ? smallest / largest : 0.0) + ")");
    return {eig.eigenvectors(), eig.eigenvalues()};
}

Eigen::MatrixXd inverse_sqrt(const BlockEigen& e) {
    return e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
}

}  // namespace

DataMatrix center_columns(const DataMatrix& x) {
    if (x.cols() < 2) throw InvalidInputError("centering needs at least two observations");
    if (!x.allFinite()) throw InvalidInputError("data contains non-finite entries");
    return x.colwise() - x.rowwise().mean().eval();
}

Eigen::MatrixXd helmert_matrix(int n) {
    if (n < 1) throw InvalidInputError("matrix dimension must be positive");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    a.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    for (int r = 1; r < n; ++r) {
        const double norm = std::sqrt(static_cast<double>(r) * (r + 1.0));
        for (int c = 0; c < r; ++c) a(r, c) = 1.0 / norm;
        a(r, r) = -static_cast<double>(r) / norm;
    }
    return a;
}

DataMatrix helmert_reduce(const DataMatrix& centered) {
    const Eigen::Index n = centered.cols();
    if (n < 2) throw InvalidInputError("reduction needs at least two observations");
    if (!centered.allFinite()) throw InvalidInputError("data contains non-finite entries");
    const double scale = std::max(centered.cwiseAbs().maxCoeff(), 1e-300);
    if ((centered.rowwise().sum()).cwiseAbs().maxCoeff() >
        1e-8 * scale * static_cast<double>(n))
        throw InvalidInputError("input rows are not centered");
    const Eigen::MatrixXd a = helmert_matrix(static_cast<int>(n));
    return (centered * a.transpose()).rightCols(n - 1);
}

BlockCorrelation block_correlation(const DataMatrix& x, const BlockSpec& spec) {
    require_shape(x, spec);
    const DataMatrix xc = center_columns(x);
    Eigen::MatrixXd s = xc * xc.transpose();
    s = ((s + s.transpose()) * 0.5).eval();
    return block_correlation_from_gram(s, spec);
}

BlockCorrelation block_correlation_from_gram(const Eigen::MatrixXd& gram,
                                             const BlockSpec& spec) {
    const int p = spec.dimension();
    const int k = spec.block_count();
    if (gram.rows() != p || gram.cols() != p)
        throw InvalidInputError("Gram matrix must be " + std::to_string(p) + " x " +
                                std::to_string(p));
    if (!gram.allFinite()) throw InvalidInputError("Gram matrix contains non-finite entries");
    const Eigen::MatrixXd& s = gram;

    std::vector<Eigen::MatrixXd> roots(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        roots[static_cast<std::size_t>(i)] =
            inverse_sqrt(gram_eigen(s.block(spec.offset(i), spec.offset(i), spec.size(i),
                                            spec.size(i)),
                                    i));

    Eigen::MatrixXd b(p, p);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            const Eigen::MatrixXd bij =
                roots[static_cast<std::size_t>(i)] *
                s.block(spec.offset(i), spec.offset(j), spec.size(i), spec.size(j)) *
                roots[static_cast<std::size_t>(j)];
            b.block(spec.offset(i), spec.offset(j), spec.size(i), spec.size(j)) = bij;
            if (j > i)
                b.block(spec.offset(j), spec.offset(i), spec.size(j), spec.size(i)) =
                    bij.transpose();
        }
    b = ((b + b.transpose()) * 0.5).eval();
    return {std::move(b), spec};
}

ReducedMatrix reduced_matrix(const DataMatrix& x, const BlockSpec& spec) {
    require_shape(x, spec);
    const DataMatrix z = helmert_reduce(center_columns(x));
    const Eigen::Index m = z.cols();  // n - 1
    const int k = spec.block_count();

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < k; ++i) {
        const auto zi = z.middleRows(spec.offset(i), spec.size(i));
        Eigen::MatrixXd gram = zi * zi.transpose();
        gram = ((gram + gram.transpose()) * 0.5).eval();
        const BlockEigen e = gram_eigen(gram, i);
        // Z_i' G^{-1} Z_i through the eigenbasis, without forming G^{-1}.
        const Eigen::MatrixXd w = e.vectors.transpose() * zi;
        sum.noalias() += w.transpose() * e.values.cwiseInverse().asDiagonal() * w;
    }
    sum = ((sum + sum.transpose()) * 0.5).eval();
    return {std::move(sum), spec, static_cast<int>(x.cols())};
}

double pillai_trace(const DataMatrix& x, const BlockSpec& spec, int i, int j) {
    require_shape(x, spec);
    if (i < 0 || i >= spec.block_count() || j < 0 || j >= spec.block_count())
        throw InvalidInputError("block index out of range");
    if (i == j) throw InvalidInputError("pillai_trace needs two distinct blocks");

    const DataMatrix xc = center_columns(x);
    const auto xi = xc.middleRows(spec.offset(i), spec.size(i));
    const auto xj = xc.middleRows(spec.offset(j), spec.size(j));

    Eigen::MatrixXd gi = xi * xi.transpose();
    gi = ((gi + gi.transpose()) * 0.5).eval();
    Eigen::MatrixXd gj = xj * xj.transpose();
    gj = ((gj + gj.transpose()) * 0.5).eval();

    const Eigen::MatrixXd wi = inverse_sqrt(gram_eigen(gi, i));
    const Eigen::MatrixXd wj = inverse_sqrt(gram_eigen(gj, j));
    return (wi * (xi * xj.transpose()) * wj).squaredNorm();
}

double schott_statistic(const DataMatrix& x, const BlockSpec& spec) {
    require_shape(x, spec);
    const int p = spec.dimension();
    const Eigen::Index n = x.cols();
    // tr(B^2) is the squared Frobenius norm; take it on whichever of the two
    // spectrally equivalent matrices is smaller.
    if (n - 1 < p)
        return 0.5 * reduced_matrix(x, spec).matrix.squaredNorm() - 0.5 * p;
    return 0.5 * block_correlation(x, spec).matrix.squaredNorm() - 0.5 * p;
}

}  // namespace blockcorr
