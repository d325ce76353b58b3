// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace blockcorr {

/// Rounds to `digits` significant digits ("%.*g"); every number written to a
/// report goes through this so CSV and JSON mirrors carry identical values.
std::string format_significant(double value, int digits = 6);

/// The double that format_significant would print (for storing rounded
/// values before serialization).
double round_significant(double value, int digits = 6);

/// Minimal JSON string escaping (quotes, backslash, control characters).
std::string json_escape(const std::string& s);

/// Splits one CSV line on commas; trims blanks and strips symmetric double
/// quotes. No embedded-comma quoting support, which plain numeric tables do
/// not need.
std::vector<std::string> split_csv_line(const std::string& line);

struct NumericCsv {
    std::vector<std::string> header;  // empty when the file had none
    Eigen::MatrixXd values;           // rows x columns as stored in the file
};

/// Reads a numeric CSV with an optional single header row (detected by
/// non-numeric fields). Throws InvalidInputError naming the first bad cell.
NumericCsv read_numeric_csv(const std::string& path);

}  // namespace blockcorr
