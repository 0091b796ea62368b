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

#ifndef RZFDE_PRECODING_HPP
#define RZFDE_PRECODING_HPP

#include "rzfde/rng.hpp"
#include "rzfde/types.hpp"

#include <cstdint>

namespace rzfde::precoding {

// G = xi (H H^H + lambda K I)^{-1} H with xi chosen so Tr G^H G = P_T.
// Uses a Cholesky solve rather than an explicit inverse.
PrecodingResult rzf_precoder(const MatrixXcd &H, double lambda, double P_T);

// Per-user SINR of a fixed realization:
//   gamma_k = |h_k^H g_k|^2 / (sum_{i != k} |h_k^H g_i|^2 + sigma2).
// The interference term is accumulated as a sum of squared magnitudes over
// i != k, which keeps it nonnegative by construction.
VectorXd exact_sinr(const MatrixXcd &H, const PrecodingResult &precoder, double sigma2);

// Scale-free single-realization evaluation used by the Monte Carlo loop.
// Writing F = (H H^H + lambda K I)^{-1} H and tau = ||F||_F^2, the SINR is
//   gamma_k = |h_k^H f_k|^2 / (sum_{i != k} |h_k^H f_i|^2 + nsr * tau),
// algebraically identical to exact_sinr with the normalized precoder but
// dependent on (sigma2, P_T) only through nsr = sigma2 / P_T, so jointly
// rescaled powers give bit-identical results.
ExactPerformance evaluate_realization(const MatrixXcd &H, double lambda, double nsr);

// Ergodic (Monte Carlo) averages over `trials` independent channel draws.
// Trials are distributed over `workers` threads; every trial derives its
// own stream from (seed, channel-tag, cell_key, trial) and per-trial
// results are reduced in trial order, so the output is identical for any
// worker count.
McPerformance ergodic_performance(const Scenario &scenario, int trials, std::uint64_t seed,
                                  int workers = 1, std::uint64_t cell_key = 0);

} // namespace rzfde::precoding

#endif // RZFDE_PRECODING_HPP
