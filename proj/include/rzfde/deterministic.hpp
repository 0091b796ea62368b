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

#ifndef RZFDE_DETERMINISTIC_HPP
#define RZFDE_DETERMINISTIC_HPP

#include "rzfde/rng.hpp"
#include "rzfde/types.hpp"

#include <cstdint>

namespace rzfde::de {

struct FixedPointOptions {
    double tol = 1e-12;    // max relative defining-equation gap
    int max_iter = 10000;
    double omega = 0.5;    // damping of the Picard update
    double init = -1.0;    // initial delta = deltat; < 0 means 1/lambda
};

// Build the deterministic triple (D, Dtilde, A) the asymptotics operate
// on, from the scenario's correlation eigenstructure, gains and steering:
//   d      = eig(Theta) descending,
//   dtilde = beta_k / (1 + rho),
//   A      = U * Ztilde with column k of Ztilde equal to
//            sqrt((1/K) (rho/(1+rho)) beta_k) * steering(theta_k).
// With Sigma = (1/sqrt(K)) D^{1/2} (U Z) Dtilde^{1/2} + A, the sampled
// channel satisfies H = sqrt(K) U^H Sigma exactly for the same Z.
LiftedModel lift_scenario(const Scenario &scenario);

// Damped Picard iteration for the coupled scalar system
//   delta  = (1/K) Tr D  (lambda (I_N + deltat D) + A (I_K + delta Dtilde)^{-1} A^H)^{-1}
//   deltat = (1/K) Tr Dt (lambda (I_K + delta Dtilde) + A^H (I_N + deltat D)^{-1} A)^{-1}
// returning the matrices T, Ttilde (the two inverses above) evaluated at
// the accepted point.  The residual is the maximum of the two gaps,
// relative above unit magnitude: |f(x) - x| / max(1, |x|).
FixedPointSolution solve_fixed_point(const LiftedModel &model, double lambda,
                                     const FixedPointOptions &options = {});

// The six scalar traces; all are provably real and are checked to carry
// no spurious imaginary residue before the real part is kept.
AuxQuantities aux_quantities(const FixedPointSolution &fp, const LiftedModel &model, double lambda);

// Full asymptotic per-user SINR/rate set for a general scenario.
DeterministicSINR theorem1_sinr(const Scenario &scenario);
DeterministicSINR theorem1_sinr(const LiftedModel &model, double lambda, double nsr);

// Specialized form valid when Theta = I (asserted); shares the fixed
// point and ubar machinery but evaluates its own sbar / psibar formulas.
DeterministicSINR corollary1_sinr(const Scenario &scenario);
DeterministicSINR corollary1_sinr(const LiftedModel &model, double lambda, double nsr);

// Scalar asymptotic SINR of user k when Theta = I and every other user
// has no deterministic component: a standalone path with its own scalar
// fixed point, solved by bisection (the right-hand side is increasing and
// bounded, so the root brackets in [0, N/(K lambda)]).
double corollary2_sinr(const VectorXd &betas, int k, double lambda, int N, int K, double sigma2,
                       double P_T);

// r = log2(1 + gamma) per user plus the sum.
std::pair<VectorXd, double> rates_from_sinr(const VectorXd &gammabar);

// Monte Carlo estimate of (1/K) Tr (Sigma Sigma^H + lambda I)^{-1} over
// sampled Sigma; validation oracle for (1/K) Tr T.
double mc_resolvent_trace(const Scenario &scenario, int trials, std::uint64_t seed,
                          std::uint64_t cell_key = 0);

} // namespace rzfde::de

#endif // RZFDE_DETERMINISTIC_HPP
