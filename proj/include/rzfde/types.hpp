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

#ifndef RZFDE_TYPES_HPP
#define RZFDE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace rzfde {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

// Distance-based large-scale gain law beta(x) = 2 L / (1 + (x/xbar)^kappa).
struct PathlossParams {
    double kappa = 3.5;      // path loss exponent, > 2
    double xbar_m = 25.0;    // cutoff distance, meters
    double L_linear = 0.0;   // attenuation at the cutoff distance, linear power gain
    double R_m = 250.0;      // cell radius, meters

    void validate() const;
};

struct UserGeometry {
    double x_m = 0.0;       // distance from the base station, meters
    double theta_rad = 0.0; // arrival angle, radians, in [-pi, pi)
    double beta = 0.0;      // large-scale power gain, linear
};

// A fully specified experiment cell: dimensions, fading statistics,
// user geometry and powers.  Theta is stored explicitly so tests can use
// correlation structures that no generator parameter produces.
struct Scenario {
    int N = 0;          // base-station antennas
    int K = 0;          // single-antenna users
    double rho = 0.0;   // Rician factor, >= 0
    double nu = 0.0;    // correlation coefficient used to build Theta (bookkeeping)
    MatrixXcd Theta;    // N x N Hermitian PSD antenna correlation, unit diagonal
    std::vector<UserGeometry> users; // length K
    double P_T = 10.0;  // total transmit power, Watt
    double sigma2 = 1e-13; // noise power, Watt
    double lambda = 0.0;   // regularization parameter, > 0

    // Noise-to-power ratio: every SINR depends on (sigma2, P_T) only
    // through this quotient, computed with a single division so jointly
    // rescaled powers reproduce results exactly.
    double nsr() const { return sigma2 / P_T; }

    VectorXd betas() const;
    VectorXd angles() const;
    void validate() const;
};

// One sampled channel: H plus the ingredients it was assembled from.
struct ChannelRealization {
    MatrixXcd H;      // N x K
    MatrixXcd Z;      // N x K i.i.d. CN(0,1) scattered components
    MatrixXcd Ztilde; // N x K deterministic steering columns
};

struct PrecodingResult {
    MatrixXcd G;       // N x K precoding matrix
    double xi = 0.0;   // power normalization scalar, > 0
    double lambda = 0.0;
};

struct ExactPerformance {
    VectorXd sinr;      // per-user, dimensionless
    VectorXd rate_bits; // per-user, bits/s/Hz
    double sum_rate_bits = 0.0;
};

// Monte Carlo averages of ExactPerformance over channel draws.
struct McPerformance {
    VectorXd mean_sinr;
    VectorXd mean_rate_bits;
    VectorXd stderr_rate_bits;
    double mean_sum_rate_bits = 0.0;
    double stderr_sum_rate_bits = 0.0;
    int trials = 0;
};

// Deterministic data (D, Dtilde, A) the asymptotic machinery operates on,
// together with the unitary U that ties it back to the sampled channel.
struct LiftedModel {
    VectorXd d;       // eigenvalues of Theta, descending
    VectorXd dtilde;  // beta_k / (1 + rho)
    MatrixXcd A;      // N x K deterministic component, A = U * Ztilde_scaled
    MatrixXcd U;      // unitary with Theta = U^H diag(d) U
};

struct FixedPointSolution {
    double delta = 0.0;
    double deltat = 0.0;
    MatrixXcd T;      // N x N Hermitian PD
    MatrixXcd Ttilde; // K x K Hermitian PD
    double residual = 0.0; // max relative defining-equation gap at (delta, deltat)
    int iterations = 0;
};

// The six scalar traces feeding the asymptotic SINR expressions.
struct AuxQuantities {
    double vartheta = 0.0;
    double vartheta_tilde = 0.0;
    double F = 0.0;
    double Delta = 0.0; // (1 - F)^2 - lambda^2 * vartheta * vartheta_tilde
    double alpha = 0.0;
    double V = 0.0;
};

struct DeterministicSINR {
    VectorXd ubar;
    VectorXd sbar;
    double psibar = 0.0;
    VectorXd gammabar;  // per-user asymptotic SINR
    VectorXd rbar_bits; // log2(1 + gammabar)
    double sum_rate_bits = 0.0;
};

} // namespace rzfde

#endif // RZFDE_TYPES_HPP
