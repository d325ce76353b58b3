// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blockcorr {

/// Malformed input: bad shapes, invalid flags, out-of-range parameters.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A block Gram matrix is numerically rank deficient. Carries the index of
/// the offending block.
class SingularBlockError : public std::runtime_error {
public:
    SingularBlockError(std::size_t block_index, const std::string& message)
        : std::runtime_error(message), block_index_(block_index) {}

    std::size_t block_index() const noexcept { return block_index_; }

private:
    std::size_t block_index_;
};

/// The test statistic cannot be calibrated (k = 1, or a vanishing variance).
class DegenerateTestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure outside the block-singularity case (e.g. a singular
/// full sample covariance in the determinant-based test).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace blockcorr
