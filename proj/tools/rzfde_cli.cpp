// SPDX-License-Identifier: Apache-2.0
//
// rzfde — multi-user MISO downlink simulator with deterministic equivalents
// Copyright (C) 2026 the rzfde authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Exit codes: 0 success, 1 comparison failure, 2 config/validation error,
// 3 numerical failure.

#include "rzfde/errors.hpp"
#include "rzfde/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompareFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
};

rzfde::harness::ExperimentConfig load_config(const std::string &path, const Overrides &ov) {
    auto config = rzfde::harness::parse_config_file(path);
    if (ov.seed) {
        config.seed = *ov.seed;
        config.seed_set = true;
    }
    if (ov.trials) {
        config.trials = *ov.trials;
    }
    if (ov.out) {
        config.out_dir = *ov.out;
    }
    config.validate();
    return config;
}

int cmd_run(const std::string &config_path, const Overrides &ov, int workers) {
    namespace fs = std::filesystem;
    const auto config = load_config(config_path, ov);
    if (config.out_dir.empty()) {
        throw rzfde::config_error("no output directory: set out_dir in the config or pass --out");
    }
    fs::create_directories(config.out_dir);

    const auto outcome = rzfde::harness::run_experiment(config, workers);

    const fs::path results_path = fs::path(config.out_dir) / "results.csv";
    rzfde::harness::write_rows(results_path.string(), outcome.rows, outcome.diagnostics);

    const fs::path echo_path = fs::path(config.out_dir) / "config_resolved.txt";
    {
        std::ofstream echo(echo_path, std::ios::out | std::ios::app);
        if (!echo) {
            throw rzfde::config_error("cannot write '" + echo_path.string() + "'");
        }
        // Echo the experiment parameters only; the output location is the
        // directory this file sits in, and omitting it keeps runs of the
        // same sweep byte-comparable.
        auto echoed = config;
        echoed.out_dir.clear();
        echo << rzfde::harness::render_config(echoed);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "# resolved lambda = %.17g\n",
                      outcome.regularizer.lambda);
        echo << buf;
        if (outcome.regularizer.samples > 0) {
            std::snprintf(buf, sizeof(buf), "# lambda standard error = %.17g (%d samples)\n",
                          outcome.regularizer.std_error, outcome.regularizer.samples);
            echo << buf;
        }
    }

    std::printf("lambda = %.17g", outcome.regularizer.lambda);
    if (outcome.regularizer.samples > 0) {
        std::printf(" (std error %.3g, %d samples)", outcome.regularizer.std_error,
                    outcome.regularizer.samples);
    }
    std::printf("\nwrote %zu rows to %s\n", outcome.rows.size(), results_path.string().c_str());
    if (!outcome.diagnostics.empty()) {
        for (const auto &diag : outcome.diagnostics) {
            std::fprintf(stderr, "%s\n", diag.c_str());
        }
        std::fprintf(stderr, "%zu cell(s) failed numerically\n", outcome.diagnostics.size());
        return kExitNumericalError;
    }
    return kExitOk;
}

int cmd_compare(const std::vector<std::string> &result_files, std::optional<double> threshold_pct) {
    std::vector<rzfde::harness::ResultRow> rows;
    for (const auto &file : result_files) {
        auto part = rzfde::harness::read_rows(file);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::optional<double> threshold;
    if (threshold_pct) {
        if (!(*threshold_pct > 0.0)) {
            throw rzfde::config_error("--threshold must be > 0 (percent)");
        }
        threshold = *threshold_pct / 100.0;
    }
    const auto report = rzfde::harness::compare_report(rows, threshold);
    std::cout << rzfde::harness::render_compare(report);
    return report.all_pass ? kExitOk : kExitCompareFailed;
}

int cmd_plotdata(const std::string &result_file, const std::string &out_dir) {
    const auto rows = rzfde::harness::read_rows(result_file);
    const auto written = rzfde::harness::emit_plotdata(rows, out_dir);
    for (const auto &path : written) {
        std::printf("wrote %s\n", path.c_str());
    }
    return kExitOk;
}

int cmd_validate(const std::string &config_path, const Overrides &ov) {
    const auto config = load_config(config_path, ov);

    // Dry-run the sweep's scenario construction so invariant violations
    // surface here instead of mid-run.
    double lambda = config.lambda_value;
    if (config.lambda_mode == rzfde::harness::ExperimentConfig::LambdaMode::rule) {
        rzfde::RngStream reg_stream(config.seed, rzfde::StreamTag::regularizer);
        lambda = rzfde::harness::estimate_regularizer(config.pathloss, config.geometry,
                                                      config.lambda_samples, config.sigma2_watt,
                                                      config.P_T_watt, reg_stream)
                     .lambda;
    }
    int cells = 0;
    for (int N : config.N_list) {
        for (int K : config.K_list) {
            rzfde::RngStream geo_stream(config.seed, rzfde::StreamTag::geometry,
                                        static_cast<std::uint64_t>(K));
            const auto users =
                rzfde::channel::sample_positions(K, config.pathloss, config.geometry, geo_stream);
            for (double rho : config.rho_list) {
                for (double nu : config.nu_list) {
                    rzfde::Scenario scenario;
                    scenario.N = N;
                    scenario.K = K;
                    scenario.rho = rho;
                    scenario.nu = nu;
                    scenario.Theta = rzfde::channel::exponential_correlation(nu, N);
                    scenario.users = users;
                    scenario.P_T = config.P_T_watt;
                    scenario.sigma2 = config.sigma2_watt;
                    scenario.lambda = lambda;
                    scenario.validate();
                    ++cells;
                }
            }
        }
    }
    std::printf("config OK: %d cells, %d trials each, lambda = %.17g\n", cells, config.trials,
                lambda);
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"rzfde — RZF multi-user MISO downlink simulator with deterministic equivalents"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 1;
    double threshold_pct = 0.0;
    std::vector<std::string> result_files;
    std::string result_file;

    auto *run = app.add_subcommand("run", "execute the sweep described by a config file");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides out_dir in the config)");
    auto *run_seed = run->add_option("--seed", seed, "override the config seed");
    auto *run_trials = run->add_option("--trials", trials, "override the per-cell trial count");
    run->add_option("--workers", workers, "worker threads for Monte Carlo trials")
        ->check(CLI::PositiveNumber);

    auto *compare = app.add_subcommand("compare", "MC-vs-DE gap report from result files");
    compare->add_option("results", result_files, "result file(s) produced by run")
        ->required()
        ->expected(-1);
    auto *compare_thr =
        compare->add_option("--threshold", threshold_pct,
                            "pass/fail threshold in percent, applied to every cell "
                            "(default: 10% for N < 64, 5% for N < 128, 3% above)");

    auto *plotdata = app.add_subcommand("plotdata", "emit per-curve rate-vs-N data files");
    plotdata->add_option("results", result_file, "result file produced by run")->required();
    plotdata->add_option("--out", out_dir, "directory for the curve files")->required();

    auto *validate = app.add_subcommand("validate", "lint a config and its scenario invariants");
    validate->add_option("--config", config_path, "experiment config file")->required();
    auto *val_seed = validate->add_option("--seed", seed, "override the config seed");
    auto *val_trials = validate->add_option("--trials", trials, "override the per-cell trial count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfigError;
    }

    Overrides ov;
    if (run_seed->count() > 0 || val_seed->count() > 0) {
        ov.seed = seed;
    }
    if (run_trials->count() > 0 || val_trials->count() > 0) {
        ov.trials = trials;
    }
    if (!out_dir.empty()) {
        ov.out = out_dir;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, ov, workers);
        }
        if (compare->parsed()) {
            std::optional<double> thr;
            if (compare_thr->count() > 0) {
                thr = threshold_pct;
            }
            return cmd_compare(result_files, thr);
        }
        if (plotdata->parsed()) {
            return cmd_plotdata(result_file, out_dir);
        }
        if (validate->parsed()) {
            return cmd_validate(config_path, ov);
        }
    } catch (const rzfde::config_error &err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return kExitConfigError;
    } catch (const rzfde::numerical_error &err) {
        std::fprintf(stderr, "numerical failure: %s\n", err.what());
        return kExitNumericalError;
    } catch (const std::exception &err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitNumericalError;
    }
    return kExitOk;
}
