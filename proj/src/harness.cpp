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

#include "rzfde/harness.hpp"

#include "rzfde/deterministic.hpp"
#include "rzfde/errors.hpp"
#include "rzfde/precoding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

namespace rzfde::harness {

namespace {

std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(s);
    while (std::getline(stream, item, sep)) {
        out.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string &key, const std::string &value) {
    const std::string v = trim(value);
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &consumed);
    } catch (const std::exception &) {
        throw config_error("key '" + key + "': cannot parse '" + v + "' as a number");
    }
    if (consumed != v.size()) {
        throw config_error("key '" + key + "': trailing characters in '" + v + "'");
    }
    return out;
}

long long parse_integer(const std::string &key, const std::string &value) {
    const std::string v = trim(value);
    std::size_t consumed = 0;
    long long out = 0;
    try {
        out = std::stoll(v, &consumed);
    } catch (const std::exception &) {
        throw config_error("key '" + key + "': cannot parse '" + v + "' as an integer");
    }
    if (consumed != v.size()) {
        throw config_error("key '" + key + "': trailing characters in '" + v + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string &key, const std::string &value) {
    const std::string v = trim(value);
    std::size_t consumed = 0;
    unsigned long long out = 0;
    try {
        out = std::stoull(v, &consumed);
    } catch (const std::exception &) {
        throw config_error("key '" + key + "': cannot parse '" + v + "' as an unsigned integer");
    }
    if (consumed != v.size() || v.front() == '-') {
        throw config_error("key '" + key + "': cannot parse '" + v + "' as an unsigned integer");
    }
    return static_cast<std::uint64_t>(out);
}

std::vector<int> parse_int_list(const std::string &key, const std::string &value) {
    std::vector<int> out;
    for (const auto &item : split(value, ',')) {
        const long long v = parse_integer(key, item);
        if (v < 1 || v > std::numeric_limits<int>::max()) {
            throw config_error("key '" + key + "': entry " + std::to_string(v) + " out of range");
        }
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) {
        throw config_error("key '" + key + "': empty list");
    }
    return out;
}

std::vector<double> parse_double_list(const std::string &key, const std::string &value) {
    std::vector<double> out;
    for (const auto &item : split(value, ',')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw config_error("key '" + key + "': empty list");
    }
    return out;
}

std::uint64_t cell_key(int N, int K, double rho, double nu) {
    std::uint64_t h = detail::mix64(0x727a66646500ull); // stream namespace
    h = detail::combine(h, static_cast<std::uint64_t>(N));
    h = detail::combine(h, static_cast<std::uint64_t>(K));
    h = detail::combine(h, std::bit_cast<std::uint64_t>(rho));
    h = detail::combine(h, std::bit_cast<std::uint64_t>(nu));
    return h;
}

ResultRow base_row(const Scenario &scenario, std::uint64_t seed, int trials,
                   const std::string &method) {
    ResultRow row;
    row.scenario_id = scenario_id(scenario.N, scenario.K, scenario.rho, scenario.nu);
    row.N = scenario.N;
    row.K = scenario.K;
    row.rho = scenario.rho;
    row.nu = scenario.nu;
    row.seed = seed;
    row.trials = trials;
    row.method = method;
    return row;
}

std::string render_row(const ResultRow &row) {
    std::ostringstream out;
    out << row.scenario_id << ',' << row.N << ',' << row.K << ',' << fmt_g17(row.rho) << ','
        << fmt_g17(row.nu) << ',' << row.seed << ',' << row.trials << ',' << row.method << ','
        << row.user_k << ',' << fmt_g17(row.sinr) << ',' << fmt_g17(row.rate_bits) << ','
        << fmt_g17(row.sum_rate_bits) << ',' << fmt_g17(row.std_error);
    return out.str();
}

ResultRow parse_row(const std::string &line, std::size_t line_no) {
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 13) {
        throw config_error("results line " + std::to_string(line_no) + ": expected 13 fields, got " +
                           std::to_string(fields.size()));
    }
    ResultRow row;
    row.scenario_id = trim(fields[0]);
    row.N = static_cast<int>(parse_integer("N", fields[1]));
    row.K = static_cast<int>(parse_integer("K", fields[2]));
    row.rho = parse_double("rho", fields[3]);
    row.nu = parse_double("nu", fields[4]);
    row.seed = parse_u64("seed", fields[5]);
    row.trials = static_cast<int>(parse_integer("trials", fields[6]));
    row.method = trim(fields[7]);
    row.user_k = static_cast<int>(parse_integer("user_k", fields[8]));
    row.sinr = parse_double("sinr", fields[9]);
    row.rate_bits = parse_double("rate_bits", fields[10]);
    row.sum_rate_bits = parse_double("sum_rate_bits", fields[11]);
    row.std_error = parse_double("stderr", fields[12]);
    if (row.method != "mc" && row.method != "de") {
        throw config_error("results line " + std::to_string(line_no) + ": unknown method '" +
                           row.method + "'");
    }
    return row;
}

} // namespace

void ExperimentConfig::validate() const {
    if (N_list.empty() || K_list.empty() || rho_list.empty() || nu_list.empty()) {
        throw config_error("all four sweep lists (N_list, K_list, rho_list, nu_list) are required");
    }
    if (!seed_set) {
        throw config_error("'seed' is mandatory; there is no wall-clock default");
    }
    if (trials < 1) {
        throw config_error("'trials' must be >= 1");
    }
    const int max_K = *std::max_element(K_list.begin(), K_list.end());
    const int min_N = *std::min_element(N_list.begin(), N_list.end());
    if (min_N < max_K) {
        throw config_error("every sweep cell must satisfy N >= K; N = " + std::to_string(min_N) +
                           " with K = " + std::to_string(max_K) + " does not");
    }
    for (double rho : rho_list) {
        if (rho < 0.0) {
            throw config_error("'rho_list' entries must be >= 0");
        }
    }
    for (double nu : nu_list) {
        if (nu < 0.0 || nu >= 1.0) {
            throw config_error("'nu_list' entries must lie in [0, 1)");
        }
    }
    pathloss.validate();
    if (!(P_T_watt > 0.0) || !(sigma2_watt > 0.0)) {
        throw config_error("'P_T_watt' and 'sigma2_watt' must be > 0");
    }
    if (lambda_mode == LambdaMode::explicit_value && !(lambda_value > 0.0)) {
        throw config_error("lambda_mode = explicit requires lambda_value > 0");
    }
    if (lambda_samples < 1) {
        throw config_error("'lambda_samples' must be >= 1");
    }
}

ExperimentConfig parse_config_text(const std::string &text) {
    ExperimentConfig config;
    config.pathloss.L_linear = std::pow(10.0, -86.5 / 10.0);

    std::set<std::string> seen;
    bool lambda_value_set = false;
    std::istringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected key = value, got '" +
                               line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw config_error("line " + std::to_string(line_no) + ": empty key");
        }
        if (!seen.insert(key).second) {
            throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }

        if (key == "N_list") {
            config.N_list = parse_int_list(key, value);
        } else if (key == "K_list") {
            config.K_list = parse_int_list(key, value);
        } else if (key == "rho_list") {
            config.rho_list = parse_double_list(key, value);
        } else if (key == "nu_list") {
            config.nu_list = parse_double_list(key, value);
        } else if (key == "trials") {
            config.trials = static_cast<int>(parse_integer(key, value));
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
            config.seed_set = true;
        } else if (key == "geometry") {
            if (value == "uniform_disk") {
                config.geometry = channel::GeometryMode::uniform_disk;
            } else if (value == "fixed_ring") {
                config.geometry = channel::GeometryMode::fixed_ring;
            } else {
                throw config_error("key 'geometry': expected uniform_disk or fixed_ring, got '" +
                                   value + "'");
            }
        } else if (key == "kappa") {
            config.pathloss.kappa = parse_double(key, value);
        } else if (key == "xbar_m") {
            config.pathloss.xbar_m = parse_double(key, value);
        } else if (key == "L_xbar_dB") {
            config.pathloss.L_linear = std::pow(10.0, parse_double(key, value) / 10.0);
        } else if (key == "R_m") {
            config.pathloss.R_m = parse_double(key, value);
        } else if (key == "P_T_watt") {
            config.P_T_watt = parse_double(key, value);
        } else if (key == "sigma2_watt") {
            config.sigma2_watt = parse_double(key, value);
        } else if (key == "lambda_mode") {
            if (value == "rule") {
                config.lambda_mode = ExperimentConfig::LambdaMode::rule;
            } else if (value == "explicit") {
                config.lambda_mode = ExperimentConfig::LambdaMode::explicit_value;
            } else {
                throw config_error("key 'lambda_mode': expected rule or explicit, got '" + value +
                                   "'");
            }
        } else if (key == "lambda_value") {
            config.lambda_value = parse_double(key, value);
            lambda_value_set = true;
        } else if (key == "lambda_samples") {
            config.lambda_samples = static_cast<int>(parse_integer(key, value));
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (config.lambda_mode == ExperimentConfig::LambdaMode::explicit_value && !lambda_value_set) {
        throw config_error("lambda_mode = explicit requires a lambda_value key");
    }
    if (lambda_value_set && config.lambda_mode == ExperimentConfig::LambdaMode::rule) {
        throw config_error("lambda_value is set but lambda_mode is rule; remove one");
    }
    config.validate();
    return config;
}

ExperimentConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string render_config(const ExperimentConfig &config) {
    const auto join_int = [](const std::vector<int> &v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += (i ? "," : "") + std::to_string(v[i]);
        }
        return out;
    };
    const auto join_double = [](const std::vector<double> &v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += (i ? "," : "") + fmt_g17(v[i]);
        }
        return out;
    };
    std::ostringstream out;
    out << "N_list = " << join_int(config.N_list) << '\n';
    out << "K_list = " << join_int(config.K_list) << '\n';
    out << "rho_list = " << join_double(config.rho_list) << '\n';
    out << "nu_list = " << join_double(config.nu_list) << '\n';
    out << "trials = " << config.trials << '\n';
    out << "seed = " << config.seed << '\n';
    out << "geometry = "
        << (config.geometry == channel::GeometryMode::uniform_disk ? "uniform_disk" : "fixed_ring")
        << '\n';
    out << "kappa = " << fmt_g17(config.pathloss.kappa) << '\n';
    out << "xbar_m = " << fmt_g17(config.pathloss.xbar_m) << '\n';
    out << "L_xbar_dB = " << fmt_g17(10.0 * std::log10(config.pathloss.L_linear)) << '\n';
    out << "R_m = " << fmt_g17(config.pathloss.R_m) << '\n';
    out << "P_T_watt = " << fmt_g17(config.P_T_watt) << '\n';
    out << "sigma2_watt = " << fmt_g17(config.sigma2_watt) << '\n';
    if (config.lambda_mode == ExperimentConfig::LambdaMode::rule) {
        out << "lambda_mode = rule" << '\n';
        out << "lambda_samples = " << config.lambda_samples << '\n';
    } else {
        out << "lambda_mode = explicit" << '\n';
        out << "lambda_value = " << fmt_g17(config.lambda_value) << '\n';
    }
    if (!config.out_dir.empty()) {
        out << "out_dir = " << config.out_dir << '\n';
    }
    return out.str();
}

RegularizerEstimate estimate_regularizer(const PathlossParams &pathloss,
                                         channel::GeometryMode geometry, int samples,
                                         double sigma2, double P_T, RngStream &stream) {
    if (samples < 1) {
        throw config_error("estimate_regularizer requires samples >= 1");
    }
    // sigma2 and P_T enter through their quotient alone; dividing first
    // keeps lambda bit-identical under joint power rescaling.
    const double nsr = sigma2 / P_T;
    RegularizerEstimate est;
    if (geometry == channel::GeometryMode::fixed_ring) {
        // Degenerate position distribution: the expectation is exact.
        const double beta = channel::pathloss(2.0 * pathloss.R_m / 3.0, pathloss);
        est.lambda = nsr * (1.0 / beta);
        est.std_error = 0.0;
        est.samples = 0;
        return est;
    }
    const std::vector<UserGeometry> positions =
        channel::sample_positions(samples, pathloss, geometry, stream);
    double mean = 0.0;
    for (const auto &p : positions) {
        mean += 1.0 / p.beta;
    }
    mean /= samples;
    double var = 0.0;
    for (const auto &p : positions) {
        const double dev = 1.0 / p.beta - mean;
        var += dev * dev;
    }
    var = samples > 1 ? var / (samples - 1) : 0.0;
    est.lambda = nsr * mean;
    est.std_error = nsr * std::sqrt(var / samples);
    est.samples = samples;
    return est;
}

std::string scenario_id(int N, int K, double rho, double nu) {
    return "N" + std::to_string(N) + "_K" + std::to_string(K) + "_rho" + fmt_g(rho) + "_nu" +
           fmt_g(nu);
}

RunOutcome run_experiment(const ExperimentConfig &config, int workers) {
    config.validate();
    if (workers < 1) {
        throw config_error("workers must be >= 1");
    }

    RunOutcome outcome;
    if (config.lambda_mode == ExperimentConfig::LambdaMode::rule) {
        RngStream reg_stream(config.seed, StreamTag::regularizer);
        outcome.regularizer =
            estimate_regularizer(config.pathloss, config.geometry, config.lambda_samples,
                                 config.sigma2_watt, config.P_T_watt, reg_stream);
    } else {
        outcome.regularizer.lambda = config.lambda_value;
    }
    const double lambda = outcome.regularizer.lambda;

    for (int N : config.N_list) {
        for (int K : config.K_list) {
            // Geometry depends on (seed, K) only: every cell with the same
            // user count sees the same drop, and mc/de share it below.
            RngStream geo_stream(config.seed, StreamTag::geometry, static_cast<std::uint64_t>(K));
            const std::vector<UserGeometry> users =
                channel::sample_positions(K, config.pathloss, config.geometry, geo_stream);
            for (double rho : config.rho_list) {
                for (double nu : config.nu_list) {
                    Scenario scenario;
                    scenario.N = N;
                    scenario.K = K;
                    scenario.rho = rho;
                    scenario.nu = nu;
                    scenario.Theta = channel::exponential_correlation(nu, N);
                    scenario.users = users;
                    scenario.P_T = config.P_T_watt;
                    scenario.sigma2 = config.sigma2_watt;
                    scenario.lambda = lambda;

                    const std::string id = scenario_id(N, K, rho, nu);
                    try {
                        scenario.validate();
                        const McPerformance mc = precoding::ergodic_performance(
                            scenario, config.trials, config.seed, workers,
                            cell_key(N, K, rho, nu));
                        const DeterministicSINR de = de::theorem1_sinr(scenario);

                        ResultRow mc_row = base_row(scenario, config.seed, config.trials, "mc");
                        for (int k = 0; k < K; ++k) {
                            ResultRow row = mc_row;
                            row.user_k = k;
                            row.sinr = mc.mean_sinr(k);
                            row.rate_bits = mc.mean_rate_bits(k);
                            row.sum_rate_bits = mc.mean_sum_rate_bits;
                            row.std_error = mc.stderr_rate_bits(k);
                            outcome.rows.push_back(std::move(row));
                        }
                        mc_row.user_k = -1;
                        mc_row.sinr = mc.mean_sinr.mean();
                        mc_row.rate_bits = mc.mean_sum_rate_bits / K;
                        mc_row.sum_rate_bits = mc.mean_sum_rate_bits;
                        mc_row.std_error = mc.stderr_sum_rate_bits / K;
                        outcome.rows.push_back(std::move(mc_row));

                        ResultRow de_row = base_row(scenario, config.seed, config.trials, "de");
                        for (int k = 0; k < K; ++k) {
                            ResultRow row = de_row;
                            row.user_k = k;
                            row.sinr = de.gammabar(k);
                            row.rate_bits = de.rbar_bits(k);
                            row.sum_rate_bits = de.sum_rate_bits;
                            row.std_error = 0.0;
                            outcome.rows.push_back(std::move(row));
                        }
                        de_row.user_k = -1;
                        de_row.sinr = de.gammabar.mean();
                        de_row.rate_bits = de.sum_rate_bits / K;
                        de_row.sum_rate_bits = de.sum_rate_bits;
                        de_row.std_error = 0.0;
                        outcome.rows.push_back(std::move(de_row));
                    } catch (const numerical_error &err) {
                        outcome.diagnostics.push_back("# ERROR cell " + id + ": " + err.what());
                    }
                }
            }
        }
    }
    return outcome;
}

void write_rows(const std::string &path, const std::vector<ResultRow> &rows,
                const std::vector<std::string> &diagnostics) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::exists(path, ec) && fs::file_size(path, ec) > 0) {
        throw config_error("refusing to overwrite existing results file '" + path + "'");
    }
    std::ofstream out(path, std::ios::out | std::ios::app);
    if (!out) {
        throw config_error("cannot open results file '" + path + "' for writing");
    }
    out << kResultHeader << '\n';
    for (const auto &row : rows) {
        out << render_row(row) << '\n';
    }
    for (const auto &diag : diagnostics) {
        out << diag << '\n';
    }
    out.flush();
    if (!out) {
        throw config_error("write to results file '" + path + "' failed");
    }
}

std::vector<ResultRow> read_rows(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open results file '" + path + "'");
    }
    std::vector<ResultRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (trimmed != kResultHeader) {
                throw config_error("results file '" + path + "': unexpected header '" + trimmed +
                                   "'");
            }
            header_seen = true;
            continue;
        }
        rows.push_back(parse_row(trimmed, line_no));
    }
    if (!header_seen) {
        throw config_error("results file '" + path + "': missing header");
    }
    return rows;
}

double default_threshold(int N) {
    if (N >= 128) {
        return 0.03;
    }
    if (N >= 64) {
        return 0.05;
    }
    return 0.10;
}

CompareReport compare_report(const std::vector<ResultRow> &rows, std::optional<double> threshold) {
    struct CellData {
        int N = 0, K = 0;
        double rho = 0.0, nu = 0.0;
        std::map<int, double> mc_rate, de_rate; // user_k >= 0
        std::optional<double> mc_sum, de_sum;   // from aggregate rows
    };
    std::map<std::string, CellData> cells;
    for (const auto &row : rows) {
        CellData &cell = cells[row.scenario_id];
        cell.N = row.N;
        cell.K = row.K;
        cell.rho = row.rho;
        cell.nu = row.nu;
        auto &rate = row.method == "mc" ? cell.mc_rate : cell.de_rate;
        auto &sum = row.method == "mc" ? cell.mc_sum : cell.de_sum;
        if (row.user_k < 0) {
            sum = row.sum_rate_bits;
        } else {
            rate[row.user_k] = row.rate_bits;
        }
    }

    std::vector<std::pair<std::tuple<int, int, double, double>, std::string>> order;
    order.reserve(cells.size());
    for (const auto &[id, cell] : cells) {
        order.emplace_back(std::make_tuple(cell.N, cell.K, cell.rho, cell.nu), id);
    }
    std::sort(order.begin(), order.end());

    CompareReport report;
    for (const auto &[key, id] : order) {
        const CellData &cell = cells.at(id);
        if (!cell.mc_sum || !cell.de_sum || cell.mc_rate.size() != cell.de_rate.size() ||
            cell.mc_rate.empty()) {
            throw config_error("cell " + id + " is missing rows for one method; cannot compare");
        }
        CellComparison cmp;
        cmp.scenario_id = id;
        cmp.N = cell.N;
        for (const auto &[k, de_rate] : cell.de_rate) {
            const auto mc_it = cell.mc_rate.find(k);
            if (mc_it == cell.mc_rate.end()) {
                throw config_error("cell " + id + ": user " + std::to_string(k) +
                                   " present for de but not mc");
            }
            const double gap = de_rate != 0.0
                                   ? std::abs(mc_it->second - de_rate) / std::abs(de_rate)
                                   : (mc_it->second == 0.0 ? 0.0
                                                           : std::numeric_limits<double>::infinity());
            cmp.per_ue_gap = std::max(cmp.per_ue_gap, gap);
        }
        cmp.sum_gap = *cell.de_sum != 0.0
                          ? std::abs(*cell.mc_sum - *cell.de_sum) / std::abs(*cell.de_sum)
                          : (*cell.mc_sum == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        cmp.threshold = threshold.value_or(default_threshold(cell.N));
        cmp.pass = cmp.per_ue_gap < cmp.threshold && cmp.sum_gap < cmp.threshold;
        report.all_pass = report.all_pass && cmp.pass;
        report.cells.push_back(std::move(cmp));
    }
    return report;
}

std::string render_compare(const CompareReport &report) {
    std::ostringstream out;
    out << "scenario_id                  per_ue_gap   sum_gap      threshold  verdict\n";
    for (const auto &cell : report.cells) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-28s %-12.4g %-12.4g %-10.4g %s\n",
                      cell.scenario_id.c_str(), cell.per_ue_gap, cell.sum_gap, cell.threshold,
                      cell.pass ? "PASS" : "FAIL");
        out << line;
    }
    out << (report.all_pass ? "all cells within thresholds\n" : "one or more cells FAILED\n");
    return out.str();
}

std::vector<std::string> emit_plotdata(const std::vector<ResultRow> &rows,
                                       const std::string &out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    struct Point {
        double mc_rate = 0.0, mc_stderr = 0.0, de_rate = 0.0;
        bool has_mc = false, has_de = false;
    };
    // Key curves by formatted (K, rho, nu) so float identity is textual.
    std::map<std::string, std::map<int, Point>> curves;
    std::map<std::string, std::string> labels;
    for (const auto &row : rows) {
        if (row.user_k >= 0) {
            continue; // curves are built from aggregate rows
        }
        const std::string key =
            "K" + std::to_string(row.K) + "_rho" + fmt_g(row.rho) + "_nu" + fmt_g(row.nu);
        labels[key] = "K = " + std::to_string(row.K) + ", rho = " + fmt_g(row.rho) +
                      ", nu = " + fmt_g(row.nu);
        Point &pt = curves[key][row.N];
        if (row.method == "mc") {
            pt.mc_rate = row.rate_bits;
            pt.mc_stderr = row.std_error;
            pt.has_mc = true;
        } else {
            pt.de_rate = row.rate_bits;
            pt.has_de = true;
        }
    }

    std::vector<std::string> written;
    if (curves.empty()) {
        const fs::path path = fs::path(out_dir) / "rate_vs_N.dat";
        std::ofstream out(path);
        out << "# average rate per UE vs number of antennas (no rows)\n";
        out << "# N  mc_rate  mc_stderr  de_rate\n";
        written.push_back(path.string());
        return written;
    }
    for (const auto &[key, points] : curves) {
        const fs::path path = fs::path(out_dir) / ("rate_vs_N_" + key + ".dat");
        std::ofstream out(path);
        if (!out) {
            throw config_error("cannot open plot file '" + path.string() + "' for writing");
        }
        out << "# average rate per UE vs number of antennas; " << labels[key] << '\n';
        out << "# N  mc_rate  mc_stderr  de_rate\n";
        for (const auto &[N, pt] : points) {
            if (!pt.has_mc || !pt.has_de) {
                throw config_error("plotdata: cell with N = " + std::to_string(N) + " in curve " +
                                   key + " is missing one method");
            }
            out << N << "  " << fmt_g17(pt.mc_rate) << "  " << fmt_g17(pt.mc_stderr) << "  "
                << fmt_g17(pt.de_rate) << '\n';
        }
        written.push_back(path.string());
    }
    return written;
}

} // namespace rzfde::harness
