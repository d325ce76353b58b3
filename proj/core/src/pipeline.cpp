// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "blockcorr/errors.hpp"
#include "blockcorr/io.hpp"
#include "blockcorr/parallel.hpp"

namespace blockcorr {

namespace {

bool parses_as_number(const std::string& s) {
    if (s.empty()) return false;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void validate_panel(const PricePanel& panel) {
    const Eigen::Index t = panel.prices.rows();
    const Eigen::Index p = panel.prices.cols();
    if (t < 3) throw InvalidInputError("price panel needs at least 3 rows of prices");
    if (p < 1) throw InvalidInputError("price panel has no series");
    if (panel.labels.size() != static_cast<std::size_t>(p))
        throw InvalidInputError("label count does not match the number of series");
    if (panel.sectors.size() != static_cast<std::size_t>(p))
        throw InvalidInputError("sector count does not match the number of series");
    for (Eigen::Index c = 0; c < p; ++c) {
        if (panel.sectors[static_cast<std::size_t>(c)].empty())
            throw InvalidInputError("series '" + panel.labels[static_cast<std::size_t>(c)] +
                                    "' has no sector label");
        for (Eigen::Index r = 0; r < t; ++r)
            if (!(panel.prices(r, c) > 0.0))
                throw InvalidInputError("non-positive price for series '" +
                                        panel.labels[static_cast<std::size_t>(c)] + "' at row " +
                                        std::to_string(r + 1));
    }
}

// Column mean and sample (n-1) standard deviation.
std::pair<double, double> mean_sd(const Eigen::VectorXd& v) {
    const double n = static_cast<double>(v.size());
    const double mean = v.mean();
    const double ss = (v.array() - mean).square().sum();
    return {mean, std::sqrt(ss / (n - 1.0))};
}

Eigen::VectorXd standardize(const Eigen::VectorXd& v) {
    const auto [mean, sd] = mean_sd(v);
    if (!(sd > 0.0)) throw InvalidInputError("series is constant");
    return (v.array() - mean) / sd;
}

// Box-Cox transform at a fixed exponent; the input must be positive.
Eigen::VectorXd box_cox(const Eigen::VectorXd& y, double lambda) {
    if (std::abs(lambda) < 1e-9) return y.array().log();
    return (y.array().pow(lambda) - 1.0) / lambda;
}

// Profile-ML lambda on the grid [-2, 2] with step 0.01.
double box_cox_ml_lambda(const Eigen::VectorXd& y) {
    const double n = static_cast<double>(y.size());
    const double log_sum = y.array().log().sum();
    double best_lambda = 1.0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 400; ++step) {
        const double lambda = -2.0 + 0.01 * step;
        const Eigen::VectorXd t = box_cox(y, lambda);
        const double mean = t.mean();
        const double mle_var = (t.array() - mean).square().sum() / n;
        if (!(mle_var > 0.0) || !std::isfinite(mle_var)) continue;
        const double ll = -0.5 * n * std::log(mle_var) + (lambda - 1.0) * log_sum;
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

Eigen::VectorXd signed_power(const Eigen::VectorXd& v, double beta) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        out[i] = (v[i] < 0.0 ? -1.0 : 1.0) * std::pow(a, beta);
    }
    return out;
}

// Mean fourth power of the signed-power transform: (1/n) sum |z_i|^(4 beta).
double fourth_moment(const Eigen::VectorXd& z, double beta) {
    const double n = static_cast<double>(z.size());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) sum += std::pow(std::abs(z[i]), 4.0 * beta);
    return sum / n;
}

}  // namespace

PricePanel load_price_panel(const std::string& csv_path, const std::string& sector_path) {
    std::ifstream in(csv_path);
    if (!in) throw InvalidInputError("cannot open " + csv_path);

    PricePanel panel;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<double>> rows;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };

    if (!next_line()) throw InvalidInputError(csv_path + ": empty file");
    panel.labels = split_csv_line(line);
    const std::size_t p = panel.labels.size();
    if (p == 0) throw InvalidInputError(csv_path + ": empty header");

    bool have_sector_row = false;
    while (next_line()) {
        const auto fields = split_csv_line(line);
        if (fields.size() != p)
            throw InvalidInputError(csv_path + ":" + std::to_string(line_no) + ": expected " +
                                    std::to_string(p) + " fields, got " +
                                    std::to_string(fields.size()));
        bool numeric = true;
        for (const auto& f : fields)
            if (!parses_as_number(f)) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (rows.empty() && !have_sector_row) {
                panel.sectors = fields;
                have_sector_row = true;
                continue;
            }
            for (std::size_t c = 0; c < fields.size(); ++c)
                if (!parses_as_number(fields[c]))
                    throw InvalidInputError(csv_path + ":" + std::to_string(line_no) +
                                            ": column " + std::to_string(c + 1) +
                                            " ('" + panel.labels[c] +
                                            "') is not a number: '" + fields[c] + "'");
        }
        std::vector<double> row(p);
        for (std::size_t c = 0; c < p; ++c) {
            double v = 0.0;
            std::from_chars(fields[c].data(), fields[c].data() + fields[c].size(), v);
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }

    if (!sector_path.empty()) {
        std::ifstream sec(sector_path);
        if (!sec) throw InvalidInputError("cannot open " + sector_path);
        std::map<std::string, std::string> mapping;
        std::string sline;
        std::size_t sline_no = 0;
        while (std::getline(sec, sline)) {
            ++sline_no;
            if (!sline.empty() && sline.back() == '\r') sline.pop_back();
            if (sline.empty()) continue;
            const auto fields = split_csv_line(sline);
            if (fields.size() != 2)
                throw InvalidInputError(sector_path + ":" + std::to_string(sline_no) +
                                        ": expected 'label,sector'");
            if (sline_no == 1 && fields[0] == "label" && fields[1] == "sector") continue;
            mapping[fields[0]] = fields[1];
        }
        panel.sectors.assign(p, "");
        for (std::size_t c = 0; c < p; ++c) {
            const auto it = mapping.find(panel.labels[c]);
            if (it == mapping.end())
                throw InvalidInputError("series '" + panel.labels[c] + "' is missing from " +
                                        sector_path);
            panel.sectors[c] = it->second;
        }
    }

    if (panel.sectors.empty())
        throw InvalidInputError(csv_path +
                                ": no sector labels (add a second header row or a sidecar file)");

    panel.prices.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < p; ++c)
            panel.prices(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    validate_panel(panel);
    return panel;
}

Eigen::MatrixXd log_returns(const PricePanel& panel) {
    validate_panel(panel);
    const Eigen::Index t = panel.prices.rows();
    const Eigen::Index p = panel.prices.cols();
    Eigen::MatrixXd returns(p, t - 1);
    for (Eigen::Index c = 0; c < p; ++c)
        for (Eigen::Index j = 0; j + 1 < t; ++j)
            returns(c, j) = std::log(panel.prices(j + 1, c) / panel.prices(j, c));
    return returns;
}

double truncated_normal_moment4(double a, double b) {
    if (!(a < b)) throw InvalidInputError("interval must satisfy a < b");
    return 3.0 * (normal_cdf(b) - normal_cdf(a)) - (b * b * b + 3.0 * b) * normal_pdf(b) +
           (a * a * a + 3.0 * a) * normal_pdf(a);
}

double normal_sample_moment4_target(int n) {
    if (n < 2) throw InvalidInputError("target needs n >= 2");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double prob = (i + 0.5) / static_cast<double>(n);
        // quantile by bisection on the erfc-backed CDF
        double lo = -40.0, hi = 40.0;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            (normal_cdf(mid) < prob ? lo : hi) = mid;
        }
        const double q = 0.5 * (lo + hi);
        sum += q * q * q * q;
    }
    return sum / static_cast<double>(n);
}

PowerTransformResult power_transform(const Eigen::VectorXd& series) {
    const Eigen::Index n = series.size();
    if (n < 8) throw InvalidInputError("power transform needs at least 8 observations");
    const double lo = series.minCoeff();
    if (series.maxCoeff() == lo) throw InvalidInputError("series is constant");

    const double shift = lo <= 0.0 ? 1.0 + std::abs(lo) : 0.0;
    const Eigen::VectorXd y = series.array() + shift;
    const double lambda = box_cox_ml_lambda(y);
    const Eigen::VectorXd z = standardize(box_cox(y, lambda));

    constexpr double kBetaLo = 0.2;
    constexpr double kBetaHi = 5.0;
    const double target = normal_sample_moment4_target(static_cast<int>(n));
    const auto objective = [&](double beta) { return fourth_moment(z, beta) - target; };

    double beta = 1.0;
    bool clamped = false;
    const double f_lo = objective(kBetaLo);
    const double f_hi = objective(kBetaHi);
    if (f_lo == 0.0) {
        beta = kBetaLo;
    } else if (f_hi == 0.0) {
        beta = kBetaHi;
    } else if (f_lo * f_hi > 0.0) {
        beta = std::abs(f_lo) <= std::abs(f_hi) ? kBetaLo : kBetaHi;
        clamped = true;
    } else {
        double a = kBetaLo, b = kBetaHi;
        double f_a = f_lo;
        for (int it = 0; it < 80 && b - a > 1e-8; ++it) {
            const double mid = 0.5 * (a + b);
            const double f_mid = objective(mid);
            if (f_a * f_mid <= 0.0) {
                b = mid;
            } else {
                a = mid;
                f_a = f_mid;
            }
        }
        beta = 0.5 * (a + b);
    }

    return {standardize(signed_power(z, beta)), beta, clamped, objective(beta)};
}

KsResult ks_normal(const Eigen::VectorXd& series) {
    if (series.size() < 8) throw InvalidInputError("KS screen needs at least 8 observations");
    return ks_test_normal(std::span<const double>(series.data(),
                                                  static_cast<std::size_t>(series.size())));
}

IndependenceReport independence_report(const PricePanel& panel,
                                       const std::vector<int>& subset_sizes, double alpha) {
    validate_panel(panel);
    const Eigen::MatrixXd returns = log_returns(panel);
    const Eigen::Index p = returns.rows();
    const int n = static_cast<int>(returns.cols());

    IndependenceReport report;
    report.sample_count = n;
    report.alpha = alpha;

    // Sectors become blocks in order of first appearance.
    std::map<std::string, int> sector_index;
    for (const auto& s : panel.sectors)
        if (!sector_index.contains(s)) {
            const int idx = static_cast<int>(report.sector_names.size());
            sector_index[s] = idx;
            report.sector_names.push_back(s);
        }
    const int k = static_cast<int>(report.sector_names.size());
    report.sector_sizes.assign(static_cast<std::size_t>(k), 0);
    for (const auto& s : panel.sectors) ++report.sector_sizes[sector_index[s]];

    // Per-series transforms (parallel; each series writes its own slot).
    std::vector<PowerTransformResult> transforms(static_cast<std::size_t>(p));
    std::vector<KsResult> screens(static_cast<std::size_t>(p));
    parallel_for_index(static_cast<std::size_t>(p), [&](std::size_t c) {
        transforms[c] = power_transform(returns.row(static_cast<Eigen::Index>(c)).transpose());
        screens[c] = ks_normal(transforms[c].series);
    });

    report.series.reserve(static_cast<std::size_t>(p));
    for (std::size_t c = 0; c < static_cast<std::size_t>(p); ++c)
        report.series.push_back({panel.labels[c], panel.sectors[c], transforms[c].beta,
                                 transforms[c].beta_clamped, screens[c].p_value,
                                 screens[c].p_value < 0.05});

    // Assemble the transformed data matrix grouped by sector.
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(p));
    for (int s = 0; s < k; ++s)
        for (Eigen::Index c = 0; c < p; ++c)
            if (sector_index[panel.sectors[static_cast<std::size_t>(c)]] == s)
                order.push_back(static_cast<int>(c));
    DataMatrix x(p, n);
    for (std::size_t r = 0; r < order.size(); ++r)
        x.row(static_cast<Eigen::Index>(r)) =
            transforms[static_cast<std::size_t>(order[r])].series.transpose();
    const BlockSpec spec(report.sector_sizes);

    for (int m : subset_sizes) {
        ScanTable table;
        table.subset_size = m;
        for (const auto& subset : groupwise_scan(x, spec, m, alpha))
            table.entries.push_back({subset.blocks, subset.result.p_value});
        report.scans.push_back(std::move(table));
    }
    return report;
}

namespace {

std::string sectors_field(const std::vector<int>& sectors) {
    std::string out;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(sectors[i] + 1);  // 1-based in reports
    }
    return out;
}

}  // namespace

std::string report_to_csv(const IndependenceReport& report) {
    std::ostringstream out;
    out << "series,sector,beta,beta_clamped,ks_p_value,ks_flag\n";
    for (const auto& s : report.series)
        out << s.label << ',' << s.sector << ',' << format_significant(s.beta) << ','
            << (s.beta_clamped ? 1 : 0) << ',' << format_significant(s.ks_p_value) << ','
            << (s.ks_flag ? 1 : 0) << '\n';
    out << '\n';
    out << "subset_size,sectors,p_value\n";
    for (const auto& table : report.scans)
        for (const auto& e : table.entries)
            out << table.subset_size << ',' << sectors_field(e.sectors) << ','
                << format_significant(e.p_value) << '\n';
    return out.str();
}

std::string report_to_json(const IndependenceReport& report) {
    std::ostringstream out;
    out << "{\n  \"n\": " << report.sample_count
        << ",\n  \"alpha\": " << format_significant(report.alpha) << ",\n  \"sectors\": [";
    for (std::size_t i = 0; i < report.sector_names.size(); ++i) {
        if (i) out << ", ";
        out << "{\"name\": \"" << json_escape(report.sector_names[i])
            << "\", \"size\": " << report.sector_sizes[i] << "}";
    }
    out << "],\n  \"series\": [\n";
    for (std::size_t i = 0; i < report.series.size(); ++i) {
        const auto& s = report.series[i];
        out << "    {\"label\": \"" << json_escape(s.label) << "\", \"sector\": \""
            << json_escape(s.sector) << "\", \"beta\": " << format_significant(s.beta)
            << ", \"beta_clamped\": " << (s.beta_clamped ? "true" : "false")
            << ", \"ks_p_value\": " << format_significant(s.ks_p_value)
            << ", \"ks_flag\": " << (s.ks_flag ? "true" : "false") << "}"
            << (i + 1 < report.series.size() ? ",\n" : "\n");
    }
    out << "  ],\n  \"scans\": [\n";
    for (std::size_t t = 0; t < report.scans.size(); ++t) {
        const auto& table = report.scans[t];
        out << "    {\"subset_size\": " << table.subset_size << ", \"entries\": [";
        for (std::size_t e = 0; e < table.entries.size(); ++e) {
            if (e) out << ", ";
            out << "{\"sectors\": [";
            for (std::size_t s = 0; s < table.entries[e].sectors.size(); ++s) {
                if (s) out << ", ";
                out << table.entries[e].sectors[s] + 1;
            }
            out << "], \"p_value\": " << format_significant(table.entries[e].p_value) << "}";
        }
        out << "]}" << (t + 1 < report.scans.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_report_csv(const IndependenceReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write " + path);
    out << report_to_csv(report);
}

void write_report_json(const IndependenceReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write " + path);
    out << report_to_json(report);
}

}  // namespace blockcorr
