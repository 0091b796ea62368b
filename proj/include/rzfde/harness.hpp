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

#ifndef RZFDE_HARNESS_HPP
#define RZFDE_HARNESS_HPP

#include "rzfde/channel.hpp"
#include "rzfde/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rzfde::harness {

// Flat key=value experiment description.  Every key is explicit; unknown
// keys are rejected so a typo cannot silently skew a sweep.
//
//   N_list        = 32,64,128        antennas per cell of the sweep
//   K_list        = 16               users
//   rho_list      = 0,0.5,1          Rician factors
//   nu_list       = 0.9              correlation coefficients
//   trials        = 1000             Monte Carlo channel draws per cell
//   seed          = 1                mandatory; there is no wall-clock default
//   geometry      = uniform_disk     or fixed_ring (all users at 2R/3)
//   kappa         = 3.5              pathloss exponent
//   xbar_m        = 25               pathloss cutoff distance, meters
//   L_xbar_dB     = -86.5            attenuation at the cutoff, dB
//   R_m           = 250              cell radius, meters
//   P_T_watt      = 10               total transmit power
//   sigma2_watt   = 1e-13            noise power; absolute rates depend on
//                                    it, MC-vs-DE gaps do not
//   lambda_mode   = rule             'rule' = sigma2 E[1/beta] / P_T,
//                                    'explicit' = use lambda_value
//   lambda_value  =                  required iff lambda_mode = explicit
//   lambda_samples= 100000           sample count for the rule's E[1/beta]
//   out_dir       =                  output directory (CLI --out overrides)
struct ExperimentConfig {
    std::vector<int> N_list;
    std::vector<int> K_list;
    std::vector<double> rho_list;
    std::vector<double> nu_list;
    int trials = 1000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    channel::GeometryMode geometry = channel::GeometryMode::uniform_disk;
    PathlossParams pathloss; // L_linear filled from L_xbar_dB
    double P_T_watt = 10.0;
    double sigma2_watt = 1e-13;
    enum class LambdaMode { rule, explicit_value };
    LambdaMode lambda_mode = LambdaMode::rule;
    double lambda_value = 0.0;
    int lambda_samples = 100000;
    std::string out_dir;

    void validate() const;
};

ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig parse_config_file(const std::string &path);

// The resolved configuration echoed next to the results, one key per
// line, every default made explicit.
std::string render_config(const ExperimentConfig &config);

struct RegularizerEstimate {
    double lambda = 0.0;
    double std_error = 0.0; // of the lambda estimate; 0 when exact
    int samples = 0;        // 0 when exact
};

// lambda = sigma2 * E[1/beta] / P_T with the expectation over the user
// position distribution: a sample mean for the disk, exact for the ring.
RegularizerEstimate estimate_regularizer(const PathlossParams &pathloss,
                                         channel::GeometryMode geometry, int samples,
                                         double sigma2, double P_T, RngStream &stream);

// One line of the results table.  user_k == -1 marks the per-cell
// aggregate: rate_bits then holds the mean per-UE rate, sinr the mean
// per-UE SINR, std_error the standard error of the per-UE mean.
struct ResultRow {
    std::string scenario_id;
    int N = 0;
    int K = 0;
    double rho = 0.0;
    double nu = 0.0;
    std::uint64_t seed = 0;
    int trials = 0;
    std::string method; // "mc" | "de"
    int user_k = -1;
    double sinr = 0.0;
    double rate_bits = 0.0;
    double sum_rate_bits = 0.0;
    double std_error = 0.0; // 0 on de rows
};

inline constexpr const char *kResultHeader =
    "scenario_id,N,K,rho,nu,seed,trials,method,user_k,sinr,rate_bits,sum_rate_bits,stderr";

std::string scenario_id(int N, int K, double rho, double nu);

struct RunOutcome {
    std::vector<ResultRow> rows;
    std::vector<std::string> diagnostics; // one entry per failed cell
    RegularizerEstimate regularizer;      // as used (explicit mode: std_error 0)
};

// Execute the full sweep.  Cells run in a fixed nested order
// (N, K, rho, nu); geometry is drawn once per (seed, K) so every cell
// with the same user count sees the same drop; mc and de share it.
// A failing cell contributes a diagnostic instead of rows and never a
// partial result.
RunOutcome run_experiment(const ExperimentConfig &config, int workers = 1);

// Serialize rows (plus "# ..." diagnostic comment lines) to path.
// Creation only: an existing non-empty file is refused, results are
// never silently rewritten.
void write_rows(const std::string &path, const std::vector<ResultRow> &rows,
                const std::vector<std::string> &diagnostics = {});
std::vector<ResultRow> read_rows(const std::string &path);

struct CellComparison {
    std::string scenario_id;
    int N = 0;
    double per_ue_gap = 0.0;  // max over users of |mc - de| / de on mean rate
    double sum_gap = 0.0;     // |mc - de| / de on the sum rate
    double threshold = 0.0;   // relative
    bool pass = false;
};

struct CompareReport {
    std::vector<CellComparison> cells;
    bool all_pass = true;
};

// Default thresholds loosen as N shrinks: 3% for N >= 128, 5% for
// N >= 64, 10% below; a caller-supplied threshold applies everywhere.
double default_threshold(int N);
CompareReport compare_report(const std::vector<ResultRow> &rows,
                             std::optional<double> threshold = std::nullopt);
std::string render_compare(const CompareReport &report);

// One file per (K, rho, nu) curve, columns: N mc_rate mc_stderr de_rate
// (aggregate per-UE values), rows ordered by N.  Returns written paths.
std::vector<std::string> emit_plotdata(const std::vector<ResultRow> &rows,
                                       const std::string &out_dir);

} // namespace rzfde::harness

#endif // RZFDE_HARNESS_HPP
