// SPDX-License-Identifier: Apache-2.0
#include "blockcorr/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "blockcorr/errors.hpp"
#include "blockcorr/io.hpp"
#include "blockcorr/parallel.hpp"

namespace blockcorr {

namespace {

void validate(const ExperimentConfig& config) {
    if (config.reps < 1) throw InvalidInputError("replication count must be positive");
    if (!(config.alpha > 0.0 && config.alpha < 1.0) && config.alpha != 1.0)
        throw InvalidInputError("alpha must lie in (0, 1)");
    if (config.n_values.empty()) throw InvalidInputError("no sample sizes given");
    const int max_block =
        *std::max_element(config.spec.sizes().begin(), config.spec.sizes().end());
    for (int n : config.n_values)
        if (n < max_block + 1)
            throw InvalidInputError("n = " + std::to_string(n) +
                                    " is below the largest block size + 1 (" +
                                    std::to_string(max_block + 1) + ")");
    if (config.scenario == Scenario::IV && config.spec.block_count() != 3)
        throw InvalidInputError("scenario IV requires exactly 3 blocks");
}

// Stream reserved for a once-per-run population draw; replicate streams use
// counters in [0, reps), so the max counter can never collide.
RngStream fixed_population_stream(std::uint64_t seed) {
    return RngStream{seed, std::numeric_limits<std::uint64_t>::max()}.child(0);
}

ExperimentRow run_row(const ExperimentConfig& config, int n) {
    const auto start = std::chrono::steady_clock::now();

    const bool redraw = config.fresh_population && config.scenario == Scenario::II;
    Population fixed_pop;
    if (!redraw)
        fixed_pop = scenario_population(config.scenario, config.spec,
                                        fixed_population_stream(config.seed));

    const std::size_t reps = static_cast<std::size_t>(config.reps);
    std::vector<std::uint8_t> rejected(reps, 0);
    parallel_for_index(reps, [&](std::size_t r) {
        const RngStream replicate{config.seed, r};
        const Population& pop =
            redraw ? scenario_population(config.scenario, config.spec, replicate.child(0))
                   : fixed_pop;
        const DataMatrix x = gaussian_sample(pop, n, replicate.child(1));
        const TestResult t =
            config.alpha == 1.0
                ? TestResult{.p_value = 0.0, .reject = true}
                : schott_test(x, config.spec, config.alpha, config.alternative);
        rejected[r] = t.reject ? 1 : 0;
    });

    ExperimentRow row;
    row.scenario = config.scenario;
    row.block_sizes = config.spec.sizes();
    row.n = n;
    row.alpha = config.alpha;
    row.reps = config.reps;
    const double count = static_cast<double>(
        std::accumulate(rejected.begin(), rejected.end(), std::uint64_t{0}));
    row.rejection_rate = count / static_cast<double>(config.reps);
    row.mc_se = std::sqrt(row.rejection_rate * (1.0 - row.rejection_rate) /
                          static_cast<double>(config.reps));
    row.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

}  // namespace

ExperimentReport empirical_rate(const ExperimentConfig& config) {
    validate(config);
    ExperimentReport report;
    report.rows.reserve(config.n_values.size());
    for (int n : config.n_values) report.rows.push_back(run_row(config, n));
    return report;
}

ExperimentReport run_table(const std::vector<ExperimentConfig>& configs,
                           const std::string& csv_path) {
    ExperimentReport all;
    for (const auto& config : configs) {
        ExperimentReport part = empirical_rate(config);
        for (auto& row : part.rows) all.rows.push_back(std::move(row));
    }

    std::ofstream csv(csv_path);
    if (!csv) throw InvalidInputError("cannot write " + csv_path);
    csv << report_to_csv(all);

    const std::string json_path = json_mirror_path(csv_path);
    std::ofstream json(json_path);
    if (!json) throw InvalidInputError("cannot write " + json_path);
    json << report_to_json(all);
    return all;
}

std::string json_mirror_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

std::string report_to_csv(const ExperimentReport& report) {
    std::size_t k_max = 0;
    for (const auto& row : report.rows) k_max = std::max(k_max, row.block_sizes.size());
    if (k_max == 0) k_max = 1;

    std::ostringstream out;
    out << "scenario";
    for (std::size_t i = 1; i <= k_max; ++i) out << ",p" << i;
    out << ",n,alpha,reps,rate,se\n";
    for (const auto& row : report.rows) {
        out << to_string(row.scenario);
        for (std::size_t i = 0; i < k_max; ++i) {
            out << ',';
            if (i < row.block_sizes.size()) out << row.block_sizes[i];
        }
        out << ',' << row.n << ',' << format_significant(row.alpha) << ',' << row.reps << ','
            << format_significant(row.rejection_rate) << ',' << format_significant(row.mc_se)
            << '\n';
    }
    return out.str();
}

std::string report_to_json(const ExperimentReport& report) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const auto& row = report.rows[r];
        out << "  {\"scenario\": \"" << to_string(row.scenario) << "\", \"blocks\": [";
        for (std::size_t i = 0; i < row.block_sizes.size(); ++i) {
            if (i) out << ", ";
            out << row.block_sizes[i];
        }
        out << "], \"n\": " << row.n << ", \"alpha\": " << format_significant(row.alpha)
            << ", \"reps\": " << row.reps
            << ", \"rate\": " << format_significant(row.rejection_rate)
            << ", \"se\": " << format_significant(row.mc_se) << "}";
        out << (r + 1 < report.rows.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

}  // namespace blockcorr
