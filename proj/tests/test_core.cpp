// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

#include "blockcorr/block_spec.hpp"
#include "blockcorr/distributions.hpp"
#include "blockcorr/errors.hpp"
#include "blockcorr/io.hpp"
#include "blockcorr/rng.hpp"
#include "oracles.hpp"

using namespace blockcorr;

TEST_CASE("rng streams replay and separate") {
    const RngStream s{42, 7};
    Rng a(s);
    Rng b(s);
    for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

    // distinct stream counters give different sequences
    Rng c(RngStream{42, 8});
    int equal = 0;
    Rng a2(s);
    for (int i = 0; i < 100; ++i)
        if (a2.normal() == c.normal()) ++equal;
    CHECK(equal == 0);

    // children of different parents differ
    CHECK(s.child(0).key() != RngStream{42, 8}.child(0).key());
    CHECK(s.child(0).key() != s.child(1).key());
}

TEST_CASE("normal tail values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_upper_tail(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    // reference value from an independent implementation
    CHECK(normal_upper_tail(1.96) == doctest::Approx(0.0249978951482204).epsilon(1e-12));
    CHECK(normal_cdf(-5.0) == doctest::Approx(2.86651571879194e-07).epsilon(1e-10));
    CHECK(normal_upper_tail(8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-9));
}

TEST_CASE("chi-squared upper tail against reference values") {
    CHECK(chi_squared_upper_tail(26.29622760486423, 16) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_squared_upper_tail(10.0, 16) ==
          doctest::Approx(0.866628325929993).epsilon(1e-12));
    CHECK(chi_squared_upper_tail(5.99146454710798, 2) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_squared_upper_tail(-1.0, 4) == 1.0);
    CHECK(chi_squared_upper_tail(0.0, 4) == 1.0);
}

TEST_CASE("kolmogorov law against reference values") {
    CHECK(kolmogorov_upper_tail(0.5) == doctest::Approx(0.963945243664875).epsilon(1e-10));
    CHECK(kolmogorov_upper_tail(1.0) == doctest::Approx(0.269999671677355).epsilon(1e-10));
    CHECK(kolmogorov_upper_tail(1.36) == doctest::Approx(0.0494858767553779).epsilon(1e-10));
    CHECK(kolmogorov_upper_tail(2.0) == doctest::Approx(0.000670925255779695).epsilon(1e-10));
    CHECK(kolmogorov_upper_tail(1e-6) == 1.0);
}

TEST_CASE("ks distance matches the brute-force oracle") {
    std::mt19937_64 gen(123);
    std::normal_distribution<double> dist;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> sample(20 + rep);
        for (auto& v : sample) v = dist(gen);
        if (rep % 5 == 0) sample[0] = sample[1];  // exercise ties
        const KsResult r = ks_test_normal(sample);
        CHECK(r.statistic == oracles::ks_distance_brute_force(sample));
    }
}

TEST_CASE("two-sample ks detects equal and shifted samples") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> dist;
    std::vector<double> a(2000), b(2000), c(2000);
    for (auto& v : a) v = dist(gen);
    for (auto& v : b) v = dist(gen);
    for (auto& v : c) v = dist(gen) + 1.0;
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    CHECK(ks_test_two_sample(a, c).p_value < 1e-10);
}

TEST_CASE("sample moments and compensated sum") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const SampleMoments m = sample_moments(v);
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.variance == doctest::Approx(5.0 / 3.0));
    CHECK(m.k3 == doctest::Approx(0.0).epsilon(1e-14));

    // third k-statistic is unbiased: check on a skewed three-point sample
    const std::vector<double> w{0.0, 0.0, 3.0};
    // k3 = n/((n-1)(n-2)) * sum (x - mean)^3 = 3/2 * (2*(-1)^3 + 2^3) = 9
    CHECK(sample_moments(w).k3 == doctest::Approx(9.0));

    std::vector<double> tiny(1000, 1e-16);
    tiny.push_back(1.0);
    CHECK(compensated_sum(tiny) == doctest::Approx(1.0 + 1000e-16).epsilon(1e-15));
}

TEST_CASE("block spec validation, offsets and restriction") {
    const BlockSpec spec({2, 2, 3});
    CHECK(spec.block_count() == 3);
    CHECK(spec.dimension() == 7);
    CHECK(spec.offset(0) == 0);
    CHECK(spec.offset(2) == 4);
    CHECK(spec.to_string() == "2,2,3");

    const std::vector<int> subset{0, 2};
    CHECK(spec.restrict_to(subset).sizes() == std::vector<int>{2, 3});

    CHECK_THROWS_AS(BlockSpec({}), InvalidInputError);
    CHECK_THROWS_AS(BlockSpec({2, 0}), InvalidInputError);
    CHECK_THROWS_AS(BlockSpec({-1}), InvalidInputError);
}

TEST_CASE("significant-digit formatting round-trips csv and json") {
    CHECK(format_significant(0.05) == "0.05");
    CHECK(format_significant(1.0 / 3.0) == "0.333333");
    CHECK(format_significant(0.06027) == "0.06027");
    CHECK(round_significant(1.0 / 3.0) == doctest::Approx(0.333333).epsilon(1e-12));
    CHECK(json_escape("a\"b\\c\n") == "a\\\"b\\\\c\\n");
}

TEST_CASE("numeric csv reader handles headers and bad cells") {
    const std::string path = "test_core_tmp.csv";
    {
        std::ofstream out(path);
        out << "x,y\n1,2\n3,4\n";
    }
    const NumericCsv csv = read_numeric_csv(path);
    CHECK(csv.header == std::vector<std::string>{"x", "y"});
    CHECK(csv.values.rows() == 2);
    CHECK(csv.values(1, 1) == 4.0);

    {
        std::ofstream out(path);
        out << "1,2\n3,oops\n";
    }
    CHECK_THROWS_WITH_AS(read_numeric_csv(path), doctest::Contains("column 2"),
                         InvalidInputError);
    std::remove(path.c_str());
}
