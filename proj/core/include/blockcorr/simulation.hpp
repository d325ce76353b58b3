// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockcorr/sampling.hpp"
#include "blockcorr/schott_test.hpp"

namespace blockcorr {

/// One size/power experiment: a scenario, a block layout and a grid of
/// sample sizes, replicated with counter-keyed streams.
struct ExperimentConfig {
    Scenario scenario = Scenario::I;
    BlockSpec spec;
    std::vector<int> n_values;
    double alpha = 0.05;
    int reps = 10000;
    std::uint64_t seed = 42;
    Alternative alternative = Alternative::upper;
    // Redraw the scenario-II population every replicate (only scenario II
    // has random parameters). When false the population is drawn once.
    bool fresh_population = true;
};

struct ExperimentRow {
    Scenario scenario = Scenario::I;
    std::vector<int> block_sizes;
    int n = 0;
    double alpha = 0.05;
    int reps = 0;
    double rejection_rate = 0.0;
    double mc_se = 0.0;  // sqrt(rate * (1 - rate) / reps)
    double wall_time_seconds = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
};

/// Monte Carlo rejection rate of the block independence test for every n in
/// the config. Replicate r draws from sub-stream (seed, r); the population
/// and data use distinct children of it so scenario-II parameters stay
/// independent of the noise. Fully deterministic for a fixed config; a
/// singular replicate aborts the run rather than being skipped.
ExperimentReport empirical_rate(const ExperimentConfig& config);

/// Runs every config and writes the rows (input order) as CSV with columns
/// scenario,p1..pk,n,alpha,reps,rate,se plus a JSON mirror next to it
/// (same path with a .json extension). Numbers are serialized with 6
/// significant digits in both files.
ExperimentReport run_table(const std::vector<ExperimentConfig>& configs,
                           const std::string& csv_path);

/// The JSON mirror path used by run_table for a given CSV path.
std::string json_mirror_path(const std::string& csv_path);

/// Serialization of a report (also used by the CLI for stdout echoes).
std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);

}  // namespace blockcorr
