// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/sampling.hpp"

#include <cmath>
#include <string>

#include "blockcorr/errors.hpp"

namespace blockcorr {

namespace {

// Fills column-major so the draw order is independent of how the matrix is
// consumed later.
Eigen::MatrixXd standard_normal_matrix(int rows, int cols, Rng& gen) {
    Eigen::MatrixXd m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = gen.normal();
    return m;
}

// L with L * L' = sigma, up to the documented clipping tolerance.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma) {
    const Eigen::Index p = sigma.rows();

    // Diagonal fast path (covers the identity and the scenario-II case).
    bool diagonal = true;
    for (Eigen::Index c = 0; c < p && diagonal; ++c)
        for (Eigen::Index r = 0; r < p; ++r)
            if (r != c && sigma(r, c) != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        const double scale = sigma.diagonal().cwiseAbs().maxCoeff();
        Eigen::VectorXd d = sigma.diagonal();
        for (Eigen::Index i = 0; i < p; ++i) {
            if (d[i] < -1e-8 * scale)
                throw InvalidInputError("covariance is not positive semi-definite (diagonal entry " +
                                        std::to_string(d[i]) + ")");
            d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
        }
        return d.asDiagonal();
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
    if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd d = ldlt.vectorD();
        const double dmax = d.maxCoeff();
        if (dmax > 0.0 && d.minCoeff() >= -1e-12 * dmax) {
            for (Eigen::Index i = 0; i < p; ++i) d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
            Eigen::MatrixXd l = ldlt.matrixL();
            l = l * d.asDiagonal();
            return ldlt.transpositionsP().transpose() * l;
        }
    }

    // Semi-definite or marginally indefinite input: factor through the
    // spectrum and clip the tolerated negative dust.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    if (eig.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of the covariance failed");
    Eigen::VectorXd lam = eig.eigenvalues();
    const double norm = lam.cwiseAbs().maxCoeff();
    if (lam.minCoeff() < -1e-8 * norm)
        throw InvalidInputError("covariance is not positive semi-definite (eigenvalue " +
                                std::to_string(lam.minCoeff()) + ")");
    for (Eigen::Index i = 0; i < p; ++i) lam[i] = lam[i] > 0.0 ? std::sqrt(lam[i]) : 0.0;
    return eig.eigenvectors() * lam.asDiagonal();
}

}  // namespace

Scenario scenario_from_string(std::string_view name) {
    if (name == "I" || name == "i" || name == "1") return Scenario::I;
    if (name == "II" || name == "ii" || name == "2") return Scenario::II;
    if (name == "III" || name == "iii" || name == "3") return Scenario::III;
    if (name == "IV" || name == "iv" || name == "4") return Scenario::IV;
    throw InvalidInputError("unknown scenario: " + std::string(name) + " (expected I, II, III or IV)");
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::I: return "I";
        case Scenario::II: return "II";
        case Scenario::III: return "III";
        case Scenario::IV: return "IV";
    }
    return "?";
}

Eigen::MatrixXd haar_orthogonal(int n, RngStream rng) {
    if (n < 1) throw InvalidInputError("matrix dimension must be positive");
    Rng gen(rng);
    const Eigen::MatrixXd g = standard_normal_matrix(n, n, gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& packed = qr.matrixQR();
    for (int j = 0; j < n; ++j)
        if (packed(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Eigen::MatrixXd gaussian_sample(const Population& population, int n, RngStream rng) {
    const Eigen::Index p = population.covariance.rows();
    if (n < 1) throw InvalidInputError("sample size must be positive");
    if (population.covariance.cols() != p)
        throw InvalidInputError("covariance must be square");
    if (population.mean.size() != p)
        throw InvalidInputError("mean length does not match covariance dimension");
    const double scale = std::max(population.covariance.cwiseAbs().maxCoeff(), 1e-300);
    if ((population.covariance - population.covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * scale)
        throw InvalidInputError("covariance is not symmetric");

    const Eigen::MatrixXd factor = psd_factor(population.covariance);
    Rng gen(rng);
    Eigen::MatrixXd x = factor * standard_normal_matrix(static_cast<int>(factor.cols()),
                                                        n, gen);
    x.colwise() += population.mean;
    return x;
}

Population scenario_population(Scenario scenario, const BlockSpec& spec, RngStream rng) {
    const int p = spec.dimension();
    const int k = spec.block_count();
    Population pop;
    pop.mean = Eigen::VectorXd::Zero(p);
    pop.covariance = Eigen::MatrixXd::Zero(p, p);

    switch (scenario) {
        case Scenario::I:
            pop.covariance.setIdentity();
            break;
        case Scenario::II: {
            // Means first, then variances, block-major; one generator so a
            // single stream reproduces the whole population.
            Rng gen(rng);
            for (int i = 0; i < p; ++i) pop.mean[i] = gen.uniform(-1.0, 1.0);
            for (int i = 0; i < p; ++i) pop.covariance(i, i) = gen.chi_squared(8.0);
            break;
        }
        case Scenario::III:
            pop.covariance.setConstant(0.15);
            pop.covariance.diagonal().setConstant(1.0);
            break;
        case Scenario::IV: {
            if (k != 3)
                throw InvalidInputError("scenario IV is defined for exactly 3 blocks, got " +
                                        std::to_string(k));
            pop.covariance.setIdentity();
            pop.covariance *= 26.0 / 25.0;
            auto partial_identity = [&](int bi, int bj, double value) {
                const int m = std::min(spec.size(bi), spec.size(bj));
                for (int t = 0; t < m; ++t) {
                    pop.covariance(spec.offset(bi) + t, spec.offset(bj) + t) = value;
                    pop.covariance(spec.offset(bj) + t, spec.offset(bi) + t) = value;
                }
            };
            partial_identity(0, 1, 1.0 / 25.0);
            partial_identity(0, 2, 6.0 / 25.0);
            partial_identity(1, 2, 6.0 / 25.0);
            break;
        }
    }
    return pop;
}

}  // namespace blockcorr
