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

#include "rzfde/channel.hpp"

#include "rzfde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rzfde {

void PathlossParams::validate() const {
    if (!(kappa > 2.0))
        throw config_error("pathloss: exponent kappa must be > 2");
    if (!(xbar_m > 0.0))
        throw config_error("pathloss: cutoff distance xbar must be > 0");
    if (!(R_m > xbar_m))
        throw config_error("pathloss: cell radius R must exceed the cutoff xbar");
    if (!(L_linear > 0.0))
        throw config_error("pathloss: reference attenuation must be positive in linear scale");
}

VectorXd Scenario::betas() const {
    VectorXd b(static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k)
        b[static_cast<Eigen::Index>(k)] = users[k].beta;
    return b;
}

VectorXd Scenario::angles() const {
    VectorXd a(static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k)
        a[static_cast<Eigen::Index>(k)] = users[k].theta_rad;
    return a;
}

void Scenario::validate() const {
    if (N < 1 || K < 1)
        throw config_error("scenario: N and K must be >= 1");
    if (N < K)
        throw config_error("scenario: N < K is outside the supported regime");
    if (!(rho >= 0.0))
        throw config_error("scenario: Rician factor rho must be >= 0");
    if (static_cast<int>(users.size()) != K)
        throw config_error("scenario: user list length must equal K");
    if (Theta.rows() != N || Theta.cols() != N)
        throw config_error("scenario: Theta must be N x N");
    if (!(lambda > 0.0))
        throw config_error("scenario: regularization parameter lambda must be > 0");
    if (!(P_T > 0.0))
        throw config_error("scenario: transmit power P_T must be > 0");
    if (!(sigma2 > 0.0))
        throw config_error("scenario: noise power sigma2 must be > 0");
    const double scale = std::max(1.0, Theta.cwiseAbs().maxCoeff());
    if ((Theta - Theta.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw config_error("scenario: Theta is not Hermitian");
    for (int i = 0; i < N; ++i)
        if (std::abs(Theta(i, i) - Complex(1.0, 0.0)) > 1e-12)
            throw config_error("scenario: Theta must have unit diagonal");
    for (const auto &u : users)
        if (!(u.beta >= 0.0) || !(u.x_m > 0.0))
            throw config_error("scenario: user gains must be >= 0 at positive distances");
}

namespace channel {

MatrixXcd exponential_correlation(double nu, int N) {
    if (!(nu >= 0.0 && nu < 1.0))
        throw config_error("exponential_correlation: nu must lie in [0, 1)");
    if (N < 1)
        throw config_error("exponential_correlation: N must be >= 1");
    MatrixXcd Theta(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            Theta(i, j) = Complex(std::pow(nu, std::abs(i - j)), 0.0);
    return Theta;
}

HermitianSqrt hermitian_sqrt(const MatrixXcd &Theta) {
    const Eigen::Index N = Theta.rows();
    if (Theta.cols() != N)
        throw config_error("hermitian_sqrt: input must be square");
    const double scale = std::max(1.0, Theta.cwiseAbs().maxCoeff());
    if ((Theta - Theta.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw numerical_error("hermitian_sqrt: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(Theta);
    if (eig.info() != Eigen::Success)
        throw numerical_error("hermitian_sqrt: eigendecomposition failed");

    const VectorXd w = eig.eigenvalues();
    const double norm = std::max(1e-300, w.cwiseAbs().maxCoeff());
    if (w.minCoeff() < -1e-10 * norm)
        throw numerical_error("hermitian_sqrt: input is indefinite");

    // Canonical ordering: descending eigenvalues, ties broken by the
    // original (ascending-eigenvalue) position so that repeated spectra
    // yield a reproducible U; for Theta = I this gives U = I.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&w](Eigen::Index a, Eigen::Index b) { return w[a] > w[b]; });

    HermitianSqrt out;
    out.d.resize(N);
    MatrixXcd V(N, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        out.d[j] = std::max(0.0, w[order[static_cast<std::size_t>(j)]]);
        V.col(j) = eig.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
    out.U = V.adjoint(); // Theta = U^H diag(d) U
    return out;
}

MatrixXcd HermitianSqrt::sqrt_matrix() const {
    return U.adjoint() * d.cwiseSqrt().asDiagonal() * U;
}

VectorXcd steering_vector(double theta_rad, int N) {
    if (N < 1)
        throw config_error("steering_vector: N must be >= 1");
    VectorXcd z(N);
    const double s = std::sin(theta_rad);
    for (int n = 0; n < N; ++n) {
        const double phase = -static_cast<double>(n) * std::numbers::pi * s;
        z[n] = Complex(std::cos(phase), std::sin(phase));
    }
    return z;
}

double pathloss(double x_m, const PathlossParams &params) {
    if (!(x_m > 0.0))
        throw config_error("pathloss: distance must be > 0");
    return 2.0 * params.L_linear / (1.0 + std::pow(x_m / params.xbar_m, params.kappa));
}

std::vector<UserGeometry> sample_positions(int K, const PathlossParams &params, GeometryMode mode,
                                           RngStream &stream) {
    params.validate();
    std::vector<UserGeometry> users(static_cast<std::size_t>(std::max(K, 0)));
    const double r2lo = params.xbar_m * params.xbar_m;
    const double r2hi = params.R_m * params.R_m;
    for (auto &u : users) {
        if (mode == GeometryMode::uniform_disk) {
            u.x_m = std::sqrt(r2lo + (r2hi - r2lo) * stream.next_unit());
        } else {
            u.x_m = 2.0 * params.R_m / 3.0;
        }
        u.theta_rad = std::numbers::pi - 2.0 * std::numbers::pi * stream.next_unit();
        u.beta = pathloss(u.x_m, params);
    }
    return users;
}

ChannelSampler::ChannelSampler(const Scenario &scenario)
    : N_(scenario.N), K_(scenario.K), scatter_scale_(std::sqrt(1.0 / (1.0 + scenario.rho))),
      los_scale_(std::sqrt(scenario.rho / (1.0 + scenario.rho))) {
    scenario.validate();
    sqrt_beta_ = scenario.betas().cwiseSqrt();
    sqrt_theta_ = hermitian_sqrt(scenario.Theta).sqrt_matrix();
    Ztilde_.resize(N_, K_);
    for (int k = 0; k < K_; ++k)
        Ztilde_.col(k) = steering_vector(scenario.users[static_cast<std::size_t>(k)].theta_rad, N_);
}

ChannelRealization ChannelSampler::sample(RngStream &stream) const {
    ChannelRealization out;
    out.Z.resize(N_, K_);
    for (int k = 0; k < K_; ++k)
        for (int n = 0; n < N_; ++n)
            out.Z(n, k) = stream.next_cnormal();
    out.Ztilde = Ztilde_;
    out.H = sqrt_theta_ * out.Z;
    out.H *= scatter_scale_;
    out.H.noalias() += los_scale_ * Ztilde_;
    out.H = out.H * sqrt_beta_.asDiagonal();
    return out;
}

ChannelRealization sample_channel(const Scenario &scenario, RngStream &stream) {
    return ChannelSampler(scenario).sample(stream);
}

} // namespace channel
} // namespace rzfde
