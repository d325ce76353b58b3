// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands:
//   test      independence test on an observation CSV
//   simulate  Monte Carlo size/power tables for the built-in scenarios
//   freeness  closed-form vs Monte Carlo checks of the Haar projection model
//   pipeline  price panel -> transformed returns -> independence scans
//
// Exit codes: 0 ok, 1 internal error, 2 input/usage error, 3 numerical
// (singular block) error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "blockcorr/errors.hpp"
#include "blockcorr/freeness.hpp"
#include "blockcorr/io.hpp"
#include "blockcorr/pipeline.hpp"
#include "blockcorr/sampling.hpp"
#include "blockcorr/schott_test.hpp"
#include "blockcorr/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct CliConfig {
    std::string input;
    std::string sectors_path;
    std::string output;
    std::vector<int> blocks;
    std::vector<int> ranks;
    std::vector<int> n_values;
    std::vector<int> subset_sizes{2};
    int dimension = 0;  // N for the projection model
    double alpha = 0.05;
    int reps = 10000;
    std::uint64_t seed = 42;
    std::string alternative = "upper";
    std::string scenario = "I";
    std::string format = "csv";
    std::string pattern;
    bool fresh_population = true;
};

int run_test(const CliConfig& cfg) {
    const blockcorr::NumericCsv csv = blockcorr::read_numeric_csv(cfg.input);
    const blockcorr::BlockSpec spec(cfg.blocks);
    if (csv.values.cols() != spec.dimension())
        throw blockcorr::InvalidInputError(
            "blocks " + spec.to_string() + " need " + std::to_string(spec.dimension()) +
            " data columns but " + cfg.input + " has " + std::to_string(csv.values.cols()));

    // Rows are observations on disk; the statistic wants columns.
    const blockcorr::DataMatrix x = csv.values.transpose();
    const blockcorr::TestResult r = blockcorr::schott_test(
        x, spec, cfg.alpha, blockcorr::alternative_from_string(cfg.alternative));

    std::cout << "# blockcorr test\n"
              << "# input: " << cfg.input << "  blocks: " << spec.to_string()
              << "  n: " << x.cols() << "  alpha: " << blockcorr::format_significant(cfg.alpha)
              << "  alternative: " << blockcorr::to_string(r.alternative) << "\n";
    std::cout << "statistic  " << blockcorr::format_significant(r.statistic, 10) << "\n"
              << "a_n        " << blockcorr::format_significant(r.a_n, 10) << "\n"
              << "b_n        " << blockcorr::format_significant(r.b_n, 10) << "\n"
              << "z          " << blockcorr::format_significant(r.z, 10) << "\n"
              << "p_value    " << blockcorr::format_significant(r.p_value, 10) << "\n"
              << "decision   " << (r.reject ? "reject" : "fail-to-reject") << "\n";
    return kExitOk;
}

// One experiment object from a JSON config; unknown keys are rejected so a
// typo cannot silently fall back to a default.
blockcorr::ExperimentConfig experiment_from_json(const nlohmann::json& j) {
    blockcorr::ExperimentConfig config{blockcorr::Scenario::I,
                                       blockcorr::BlockSpec(j.at("blocks").get<std::vector<int>>()),
                                       {},
                                       0.05,
                                       10000,
                                       42,
                                       blockcorr::Alternative::upper,
                                       true};
    for (const auto& [key, value] : j.items()) {
        if (key == "scenario")
            config.scenario = blockcorr::scenario_from_string(value.get<std::string>());
        else if (key == "blocks")
            ;  // consumed above
        else if (key == "n")
            config.n_values = value.is_array() ? value.get<std::vector<int>>()
                                               : std::vector<int>{value.get<int>()};
        else if (key == "alpha")
            config.alpha = value.get<double>();
        else if (key == "reps")
            config.reps = value.get<int>();
        else if (key == "seed")
            config.seed = value.get<std::uint64_t>();
        else if (key == "alternative")
            config.alternative = blockcorr::alternative_from_string(value.get<std::string>());
        else if (key == "fresh_population")
            config.fresh_population = value.get<bool>();
        else
            throw blockcorr::InvalidInputError("unknown config key: " + key);
    }
    if (config.n_values.empty())
        throw blockcorr::InvalidInputError("config entry is missing \"n\"");
    return config;
}

std::vector<blockcorr::ExperimentConfig> load_experiment_configs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw blockcorr::InvalidInputError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw blockcorr::InvalidInputError(path + ": " + e.what());
    }
    std::vector<blockcorr::ExperimentConfig> configs;
    try {
        if (j.is_array())
            for (const auto& item : j) configs.push_back(experiment_from_json(item));
        else
            configs.push_back(experiment_from_json(j));
    } catch (const nlohmann::json::exception& e) {
        throw blockcorr::InvalidInputError(path + ": " + e.what());
    }
    return configs;
}

int run_simulate(const CliConfig& cfg, const std::string& config_path) {
    std::vector<blockcorr::ExperimentConfig> configs;
    if (!config_path.empty()) {
        configs = load_experiment_configs(config_path);
    } else {
        if (cfg.blocks.empty())
            throw CLI::ValidationError("simulate", "--blocks is required without --config");
        if (cfg.n_values.empty())
            throw CLI::ValidationError("simulate", "--n is required without --config");
        configs.push_back(blockcorr::ExperimentConfig{
            blockcorr::scenario_from_string(cfg.scenario),
            blockcorr::BlockSpec(cfg.blocks),
            cfg.n_values,
            cfg.alpha,
            cfg.reps,
            cfg.seed,
            blockcorr::alternative_from_string(cfg.alternative),
            cfg.fresh_population});
    }

    std::cout << "# blockcorr simulate\n";
    for (const auto& config : configs)
        std::cout << "# scenario: " << blockcorr::to_string(config.scenario)
                  << "  blocks: " << config.spec.to_string() << "  reps: " << config.reps
                  << "  alpha: " << blockcorr::format_significant(config.alpha)
                  << "  seed: " << config.seed << "\n";

    const std::string out_path = cfg.output.empty() ? "simulate.csv" : cfg.output;
    const blockcorr::ExperimentReport report = blockcorr::run_table(configs, out_path);
    std::cout << "# wrote " << out_path << " and " << blockcorr::json_mirror_path(out_path)
              << "\n"
              << (cfg.format == "json" ? blockcorr::report_to_json(report)
                                       : blockcorr::report_to_csv(report));
    return kExitOk;
}

int run_freeness(const CliConfig& cfg) {
    std::cout << "# blockcorr freeness\n"
              << "# N: " << cfg.dimension << "  reps: " << cfg.reps << "  seed: " << cfg.seed
              << "\n";
    const blockcorr::RngStream rng{cfg.seed, 0};

    if (!cfg.pattern.empty()) {
        const auto pattern = blockcorr::weingarten_pattern_from_string(cfg.pattern);
        const double exact = blockcorr::weingarten_moment(pattern, cfg.dimension);
        const auto mc = blockcorr::mc_weingarten(pattern, cfg.dimension,
                                                 static_cast<std::size_t>(cfg.reps), rng);
        std::cout << "pattern    " << cfg.pattern << "\n"
                  << "exact      " << blockcorr::format_significant(exact, 10) << "\n"
                  << "mc_mean    " << blockcorr::format_significant(mc.mean, 10) << "\n"
                  << "mc_se      " << blockcorr::format_significant(mc.se, 10) << "\n"
                  << "abs_error  " << blockcorr::format_significant(std::abs(mc.mean - exact), 10)
                  << "\n";
        return kExitOk;
    }

    if (cfg.ranks.empty())
        throw CLI::ValidationError("freeness", "either --pattern or --ranks is required");
    const blockcorr::ProjectionSumModel model{cfg.dimension, cfg.ranks};
    const auto report =
        blockcorr::mc_moments(model, static_cast<std::size_t>(cfg.reps), rng);
    std::cout << "ranks        ";
    for (std::size_t i = 0; i < cfg.ranks.size(); ++i)
        std::cout << (i ? "," : "") << cfg.ranks[i];
    std::cout << "\n"
              << "exact_mean   " << blockcorr::format_significant(report.exact_mean, 10) << "\n"
              << "mc_mean      " << blockcorr::format_significant(report.mc_mean, 10) << " (se "
              << blockcorr::format_significant(report.se_mean) << ")\n"
              << "leading_var  " << blockcorr::format_significant(report.leading_var, 10) << "\n"
              << "mc_var       " << blockcorr::format_significant(report.mc_var, 10) << " (se "
              << blockcorr::format_significant(report.se_var) << ")\n"
              << "mc_k3        " << blockcorr::format_significant(report.mc_k3, 10) << " (se "
              << blockcorr::format_significant(report.se_k3) << ")\n";
    return kExitOk;
}

int run_pipeline(const CliConfig& cfg) {
    const blockcorr::PricePanel panel =
        blockcorr::load_price_panel(cfg.input, cfg.sectors_path);
    const blockcorr::IndependenceReport report =
        blockcorr::independence_report(panel, cfg.subset_sizes, cfg.alpha);

    std::cout << "# blockcorr pipeline\n"
              << "# input: " << cfg.input << "  series: " << panel.labels.size()
              << "  sectors: " << report.sector_names.size() << "  n: " << report.sample_count
              << "  alpha: " << blockcorr::format_significant(cfg.alpha) << "\n";

    if (!cfg.output.empty()) {
        const std::string csv_path = cfg.output + ".csv";
        const std::string json_path = cfg.output + ".json";
        blockcorr::write_report_csv(report, csv_path);
        blockcorr::write_report_json(report, json_path);
        std::cout << "# wrote " << csv_path << " and " << json_path << "\n";
    }
    std::cout << (cfg.format == "json" ? blockcorr::report_to_json(report)
                                       : blockcorr::report_to_csv(report));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-correlation independence testing toolkit"};
    app.require_subcommand(1);
    CliConfig cfg;

    auto* test = app.add_subcommand("test", "Independence test on an observation CSV");
    test->add_option("input", cfg.input, "CSV of observations (n rows x p columns)")
        ->required();
    test->add_option("--blocks", cfg.blocks, "Block sizes p1,p2,...")
        ->required()
        ->delimiter(',');
    test->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    test->add_option("--alternative", cfg.alternative, "upper or two-sided")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo size/power tables");
    std::string sim_config_path;
    sim->add_option("--config", sim_config_path,
                    "JSON experiment file (object or array; keys scenario, blocks, n, alpha, "
                    "reps, seed, alternative, fresh_population)");
    sim->add_option("--scenario", cfg.scenario, "I, II, III or IV")->capture_default_str();
    sim->add_option("--blocks", cfg.blocks, "Block sizes p1,p2,...")->delimiter(',');
    sim->add_option("--n", cfg.n_values, "Sample sizes n1,n2,...")->delimiter(',');
    sim->add_option("--reps", cfg.reps, "Replications per cell")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sim->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    sim->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sim->add_option("--alternative", cfg.alternative, "upper or two-sided")->capture_default_str();
    sim->add_flag("--fresh-population,!--no-fresh-population", cfg.fresh_population,
                  "Redraw the scenario-II population each replicate (default on)");
    sim->add_option("--out", cfg.output, "Output CSV path (JSON mirror written next to it)");
    sim->add_option("--format", cfg.format, "Stdout echo format: csv or json")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    auto* freeness = app.add_subcommand("freeness", "Haar projection model checks");
    freeness->add_option("--N", cfg.dimension, "Ambient dimension")->required();
    freeness->add_option("--ranks", cfg.ranks, "Projection ranks p1,p2,...")->delimiter(',');
    freeness->add_option("--pattern", cfg.pattern,
                         "Entry-moment pattern: m2, m4_i, m4_ii, m4_iii, m4_iv");
    freeness->add_option("--reps", cfg.reps, "Monte Carlo draws")->capture_default_str()
        ->check(CLI::PositiveNumber);
    freeness->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

    auto* pipeline = app.add_subcommand("pipeline", "Price panel independence scans");
    pipeline->add_option("input", cfg.input, "Price CSV (header row, optional sector row)")
        ->required();
    pipeline->add_option("--sectors", cfg.sectors_path, "Sidecar CSV of label,sector rows");
    pipeline->add_option("--subset-sizes", cfg.subset_sizes, "Subset sizes to scan")->capture_default_str()
        ->delimiter(',');
    pipeline->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    pipeline->add_option("--out", cfg.output, "Report base path (.csv/.json appended)");
    pipeline->add_option("--format", cfg.format, "Stdout echo format: csv or json")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (app.got_subcommand(test)) return run_test(cfg);
        if (app.got_subcommand(sim)) return run_simulate(cfg, sim_config_path);
        if (app.got_subcommand(freeness)) return run_freeness(cfg);
        if (app.got_subcommand(pipeline)) return run_pipeline(cfg);
        std::cerr << "error: no subcommand\n";
        return kExitInput;
    } catch (const blockcorr::SingularBlockError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const blockcorr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const blockcorr::DegenerateTestError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const blockcorr::InvalidInputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
