// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "blockcorr/distributions.hpp"
#include "blockcorr/schott_test.hpp"

namespace blockcorr {

/// A panel of positive price series with a sector (block) label per series.
struct PricePanel {
    std::vector<std::string> labels;   // one name per series
    std::vector<std::string> sectors;  // block assignment per series
    Eigen::MatrixXd prices;            // T x p, rows are days
};

/// Reads a price CSV: one header row of series names, an optional second
/// header row of sector labels (detected by non-numeric fields), then T rows
/// of prices. A sidecar file of "label,sector" lines can supply or override
/// the sector mapping. Throws InvalidInputError naming the offending cell.
PricePanel load_price_panel(const std::string& csv_path, const std::string& sector_path = "");

/// p x n log-return matrix, n = T - 1: row i holds ln(u_i(t+1) / u_i(t)).
Eigen::MatrixXd log_returns(const PricePanel& panel);

/// Closed form of the integral of t^4 dPhi(t) over (a, b):
///   3 (Phi(b) - Phi(a)) - (b^3 + 3b) phi(b) + (a^3 + 3a) phi(a).
double truncated_normal_moment4(double a, double b);

struct PowerTransformResult {
    Eigen::VectorXd series;  // standardized output
    double beta = 1.0;       // fitted signed-power exponent
    bool beta_clamped = false;
    // residual of the moment equation at the returned beta (fourth sample
    // moment minus the size-n ideal normal sample target)
    double moment_gap = 0.0;
};

/// Fourth moment of the ideal standard normal sample of size n: the
/// quantile-grid evaluation of the truncated fourth-moment integral over
/// the probability range a size-n sample can occupy. This is the target the
/// power transform matches; unlike the integral over the observed min/max,
/// it lives on the same scale as a sample moment at every n.
double normal_sample_moment4_target(int n);

/// Gaussianizing transform of one return series:
///  1. Box-Cox with profile-ML lambda on a grid over [-2, 2] (step 0.01),
///     applied to a positivity-shifted copy (shift 1 + |min| when needed);
///  2. standardize (sample SD);
///  3. signed power u -> sign(u) |u|^beta, with beta solved by bisection on
///     [0.2, 5] so the fourth sample moment matches
///     normal_sample_moment4_target(n);
///  4. re-standardize.
/// When the moment equation has no sign change over [0.2, 5], beta is
/// clamped to the endpoint with the smaller residual and flagged.
PowerTransformResult power_transform(const Eigen::VectorXd& series);

/// One-sample KS normality screen of a transformed series.
KsResult ks_normal(const Eigen::VectorXd& series);

struct SeriesDiagnostic {
    std::string label;
    std::string sector;
    double beta = 1.0;
    bool beta_clamped = false;
    double ks_p_value = 1.0;
    bool ks_flag = false;  // true when the KS screen rejects at 5%
};

struct ScanEntry {
    std::vector<int> sectors;  // 0-based sector indices, ascending
    double p_value = 1.0;
};

struct ScanTable {
    int subset_size = 2;
    std::vector<ScanEntry> entries;  // lexicographic subset order
};

struct IndependenceReport {
    std::vector<std::string> sector_names;  // in order of first appearance
    std::vector<int> sector_sizes;
    int sample_count = 0;  // n = T - 1
    double alpha = 0.05;
    std::vector<SeriesDiagnostic> series;
    std::vector<ScanTable> scans;
};

/// Full workflow: log returns, per-series power transform, KS screen, then
/// an m-subset independence scan per requested subset size. Sectors become
/// blocks in order of first appearance.
IndependenceReport independence_report(const PricePanel& panel,
                                       const std::vector<int>& subset_sizes,
                                       double alpha = 0.05);

/// Two-section CSV: per-series diagnostics, a blank line, then the scan
/// table. All numbers carry 6 significant digits.
std::string report_to_csv(const IndependenceReport& report);
std::string report_to_json(const IndependenceReport& report);

void write_report_csv(const IndependenceReport& report, const std::string& path);
void write_report_json(const IndependenceReport& report, const std::string& path);

}  // namespace blockcorr
