// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>

#include "blockcorr/errors.hpp"
#include "blockcorr/sampling.hpp"

using namespace blockcorr;

namespace {

// mean and standard error of f(O) over Haar draws
std::pair<double, double> haar_mc(int n, std::size_t reps, RngStream rng,
                                  const std::function<double(const Eigen::MatrixXd&)>& f) {
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const double v = f(haar_orthogonal(n, rng.child(r)));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(reps);
    const double var = (sumsq / static_cast<double>(reps) - mean * mean) /
                       static_cast<double>(reps - 1) * static_cast<double>(reps);
    return {mean, std::sqrt(var / static_cast<double>(reps))};
}

}  // namespace

TEST_CASE("haar matrices are orthogonal for every draw") {
    const RngStream rng{1, 0};
    for (int n : {1, 2, 3, 5, 8, 20}) {
        for (std::size_t r = 0; r < 25; ++r) {
            const Eigen::MatrixXd o = haar_orthogonal(n, rng.child(static_cast<std::uint64_t>(
                                                             100 * n + static_cast<int>(r))));
            const double err = (o.transpose() * o - Eigen::MatrixXd::Identity(n, n))
                                   .cwiseAbs()
                                   .maxCoeff();
            CHECK(err <= 1e-10);
        }
    }
    CHECK_THROWS_AS(haar_orthogonal(0, rng), InvalidInputError);
}

TEST_CASE("haar at dimension one is a fair sign") {
    const RngStream rng{2, 0};
    int plus = 0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        const double v = haar_orthogonal(1, rng.child(static_cast<std::uint64_t>(r)))(0, 0);
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);
        if (v > 0) ++plus;
    }
    // fair coin: 3 sigma band around 1/2
    const double rate = static_cast<double>(plus) / reps;
    CHECK(rate == doctest::Approx(0.5).epsilon(0.031));
}

TEST_CASE("haar entry second moment is 1/N at N=8") {
    const auto [mean, se] = haar_mc(8, 100000, RngStream{3, 0},
                                    [](const Eigen::MatrixXd& o) { return o(0, 0) * o(0, 0); });
    CHECK(std::abs(mean - 1.0 / 8.0) <= 3.0 * se);
}

TEST_CASE("haar entry fourth moment is 3/(N(N+2)) at N=8") {
    const auto [mean, se] = haar_mc(8, 100000, RngStream{4, 0}, [](const Eigen::MatrixXd& o) {
        const double v = o(0, 0);
        return v * v * v * v;
    });
    CHECK(std::abs(mean - 0.0375) <= 3.0 * se);
}

TEST_CASE("haar law is invariant under a fixed left rotation") {
    const int n = 4;
    const std::size_t reps = 100000;
    const Eigen::MatrixXd f = haar_orthogonal(n, RngStream{99, 1});

    Eigen::MatrixXd sum_plain = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sum_rot = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sumsq_plain = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sumsq_rot = Eigen::MatrixXd::Zero(n, n);
    const RngStream rng{5, 0};
    for (std::size_t r = 0; r < reps; ++r) {
        const Eigen::MatrixXd o = haar_orthogonal(n, rng.child(r));
        const Eigen::MatrixXd rot = f * o;
        // first-row second moments: row' row outer products
        const Eigen::MatrixXd mp = o.row(0).transpose() * o.row(0);
        const Eigen::MatrixXd mr = rot.row(0).transpose() * rot.row(0);
        sum_plain += mp;
        sum_rot += mr;
        sumsq_plain += mp.cwiseProduct(mp);
        sumsq_rot += mr.cwiseProduct(mr);
    }
    const double dr = static_cast<double>(reps);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double m1 = sum_plain(i, j) / dr;
            const double m2 = sum_rot(i, j) / dr;
            const double v1 = sumsq_plain(i, j) / dr - m1 * m1;
            const double v2 = sumsq_rot(i, j) / dr - m2 * m2;
            const double se = std::sqrt((v1 + v2) / dr);
            CHECK(std::abs(m1 - m2) <= 4.0 * se + 1e-12);
        }
}

TEST_CASE("gaussian sampling with zero covariance returns the mean") {
    Population pop;
    pop.mean = Eigen::Vector3d(1.0, 2.0, 3.0);
    pop.covariance = Eigen::Matrix3d::Zero();
    const Eigen::MatrixXd x = gaussian_sample(pop, 5, RngStream{6, 0});
    REQUIRE(x.cols() == 5);
    for (int c = 0; c < 5; ++c) CHECK((x.col(c) - pop.mean).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian sampling is bit-identical across calls") {
    Population pop;
    pop.mean = Eigen::VectorXd::Zero(4);
    pop.covariance = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd a = gaussian_sample(pop, 11, RngStream{7, 3});
    const Eigen::MatrixXd b = gaussian_sample(pop, 11, RngStream{7, 3});
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd c = gaussian_sample(pop, 11, RngStream{7, 4});
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gaussian sampling rejects an indefinite covariance") {
    Population pop;
    pop.mean = Eigen::VectorXd::Zero(2);
    pop.covariance.resize(2, 2);
    pop.covariance << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(gaussian_sample(pop, 4, RngStream{8, 0}), InvalidInputError);

    pop.covariance << 1.0, 0.5, 0.4, 1.0;  // asymmetric
    CHECK_THROWS_AS(gaussian_sample(pop, 4, RngStream{8, 0}), InvalidInputError);
}

TEST_CASE("scenario I sample covariance approaches the identity") {
    const BlockSpec spec({2, 2, 3});
    const Population pop = scenario_population(Scenario::I, spec, RngStream{9, 0});
    CHECK(pop.mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK((pop.covariance - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() == 0.0);

    const int n = 10000;
    const Eigen::MatrixXd x = gaussian_sample(pop, n, RngStream{9, 1});
    const Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean().eval();
    const Eigen::MatrixXd cov = centered * centered.transpose() / (n - 1.0);
    CHECK((cov - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() <=
          5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("scenario II draws a diagonal covariance with chi-squared variances") {
    const BlockSpec spec({3, 4});
    double diag_sum = 0.0;
    int diag_count = 0;
    for (int rep = 0; rep < 400; ++rep) {
        const Population pop =
            scenario_population(Scenario::II, spec, RngStream{10, static_cast<std::uint64_t>(rep)});
        for (int i = 0; i < 7; ++i) {
            CHECK(pop.mean[i] >= -1.0);
            CHECK(pop.mean[i] <= 1.0);
            diag_sum += pop.covariance(i, i);
            ++diag_count;
            for (int j = 0; j < 7; ++j)
                if (i != j) CHECK(pop.covariance(i, j) == 0.0);
        }
    }
    // chi-squared(8) has mean 8; 400*7 draws give SE = 4/sqrt(2800) ~ 0.076
    CHECK(diag_sum / diag_count == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("scenario III has constant 0.15 correlations") {
    const BlockSpec tiny({1, 1, 1});
    const Population pop3 = scenario_population(Scenario::III, tiny, RngStream{11, 0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(pop3.covariance(i, j) == (i == j ? 1.0 : 0.15));

    const BlockSpec spec({2, 2, 3});
    const Population pop = scenario_population(Scenario::III, spec, RngStream{11, 1});
    const int n = 20000;
    const Eigen::MatrixXd x = gaussian_sample(pop, n, RngStream{11, 2});
    const Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean().eval();
    Eigen::MatrixXd cov = centered * centered.transpose() / (n - 1.0);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            if (i != j) {
                const double corr = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
                CHECK(corr == doctest::Approx(0.15).epsilon(0.2));
            }
}

TEST_CASE("scenario IV wires the partial identities") {
    const BlockSpec spec({2, 2, 3});
    const Population pop = scenario_population(Scenario::IV, spec, RngStream{12, 0});
    // diagonal blocks 26/25 I
    for (int i = 0; i < 7; ++i) CHECK(pop.covariance(i, i) == doctest::Approx(26.0 / 25.0));
    // block (1,2): entries (1,1) and (2,2) are 1/25 = 0.04
    CHECK(pop.covariance(0, 2) == doctest::Approx(0.04));
    CHECK(pop.covariance(1, 3) == doctest::Approx(0.04));
    CHECK(pop.covariance(0, 3) == 0.0);
    CHECK(pop.covariance(1, 2) == 0.0);
    // blocks (1,3) and (2,3): 6/25 on the partial diagonal
    CHECK(pop.covariance(0, 4) == doctest::Approx(0.24));
    CHECK(pop.covariance(1, 5) == doctest::Approx(0.24));
    CHECK(pop.covariance(2, 4) == doctest::Approx(0.24));
    CHECK(pop.covariance(3, 5) == doctest::Approx(0.24));
    CHECK(pop.covariance(2, 5) == 0.0);
    // symmetry and positive semi-definiteness
    CHECK((pop.covariance - pop.covariance.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pop.covariance);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);

    CHECK_THROWS_AS(scenario_population(Scenario::IV, BlockSpec({2, 2}), RngStream{12, 1}),
                    InvalidInputError);
}

TEST_CASE("scenario names parse both ways") {
    CHECK(scenario_from_string("I") == Scenario::I);
    CHECK(scenario_from_string("iv") == Scenario::IV);
    CHECK(to_string(Scenario::III) == "III");
    CHECK_THROWS_AS(scenario_from_string("V"), InvalidInputError);
}
