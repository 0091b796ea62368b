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

#ifndef RZFDE_CHANNEL_HPP
#define RZFDE_CHANNEL_HPP

#include "rzfde/rng.hpp"
#include "rzfde/types.hpp"

namespace rzfde::channel {

enum class GeometryMode { uniform_disk, fixed_ring };

// [Theta]_{ij} = nu^|i-j|, unit diagonal, Hermitian PSD for nu in [0, 1).
MatrixXcd exponential_correlation(double nu, int N);

// Eigendecomposition Theta = U^H diag(d) U with d sorted descending and
// ties broken by original index, so e.g. Theta = I yields U = I exactly.
// Eigenvalues are clamped at zero after an indefiniteness check.
struct HermitianSqrt {
    MatrixXcd U; // unitary, N x N
    VectorXd d;  // eigenvalues, descending, >= 0

    // U^H diag(sqrt(d)) U — the Hermitian square root itself.
    MatrixXcd sqrt_matrix() const;
};
HermitianSqrt hermitian_sqrt(const MatrixXcd &Theta);

// Uniform-linear-array steering: entry n (0-based) is exp(-i n pi sin(theta)).
VectorXcd steering_vector(double theta_rad, int N);

// beta(x) = 2 L / (1 + (x/xbar)^kappa); strictly decreasing in x.
double pathloss(double x_m, const PathlossParams &params);

// Draw K user positions.  uniform_disk: uniform over the annulus between
// the pathloss cutoff xbar and the cell radius R (area-weighted radius);
// fixed_ring: all users at distance 2R/3.  Angles uniform on [-pi, pi).
std::vector<UserGeometry> sample_positions(int K, const PathlossParams &params, GeometryMode mode,
                                           RngStream &stream);

// Samples h_k = sqrt(beta_k) (sqrt(1/(1+rho)) Theta^{1/2} z_k
//                             + sqrt(rho/(1+rho)) ztilde_k)
// using the Hermitian square root of Theta.  The precomputed form is the
// one to use inside Monte Carlo loops; sample_channel is a convenience
// wrapper for single draws.
class ChannelSampler {
  public:
    explicit ChannelSampler(const Scenario &scenario);

    ChannelRealization sample(RngStream &stream) const;

    const MatrixXcd &sqrt_theta() const { return sqrt_theta_; }

  private:
    int N_;
    int K_;
    double scatter_scale_; // sqrt(1/(1+rho))
    double los_scale_;     // sqrt(rho/(1+rho))
    VectorXd sqrt_beta_;
    MatrixXcd sqrt_theta_;
    MatrixXcd Ztilde_;
};

ChannelRealization sample_channel(const Scenario &scenario, RngStream &stream);

} // namespace rzfde::channel

#endif // RZFDE_CHANNEL_HPP
