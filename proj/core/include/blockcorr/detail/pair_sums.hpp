// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace blockcorr::detail {

// sum over ordered pairs i != j of p_i * p_j / m.
// Shared between the test calibration and the projection-model moments so
// the two agree bit for bit.
inline double pair_product_sum(const std::vector<int>& sizes, double m) {
    const std::size_t k = sizes.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            sum += static_cast<double>(sizes[i]) * static_cast<double>(sizes[j]) / m;
        }
    return sum;
}

// sum over ordered pairs i != j of p_i * p_j * (m - p_i) * (m - p_j) / m^4.
inline double pair_variance_sum(const std::vector<int>& sizes, double m) {
    const std::size_t k = sizes.size();
    const double m4 = m * m * m * m;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double pi = static_cast<double>(sizes[i]);
            const double pj = static_cast<double>(sizes[j]);
            sum += pi * pj * (m - pi) * (m - pj) / m4;
        }
    return sum;
}

}  // namespace blockcorr::detail
