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

#include "rzfde/precoding.hpp"

#include "rzfde/channel.hpp"
#include "rzfde/errors.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rzfde::precoding {

namespace {

// (H H^H + lambda K I)^{-1} H by Cholesky factorization.
MatrixXcd regularized_solve(const MatrixXcd &H, double lambda) {
    const Eigen::Index N = H.rows();
    const Eigen::Index K = H.cols();
    MatrixXcd M = H * H.adjoint();
    M.diagonal().array() += lambda * static_cast<double>(K);
    Eigen::LLT<MatrixXcd> llt(M);
    if (llt.info() != Eigen::Success)
        throw numerical_error("rzf_precoder: regularized Gram matrix is not positive definite");
    return llt.solve(H);
}

} // namespace

PrecodingResult rzf_precoder(const MatrixXcd &H, double lambda, double P_T) {
    if (!(lambda > 0.0))
        throw config_error("rzf_precoder: lambda must be > 0");
    if (!(P_T > 0.0))
        throw config_error("rzf_precoder: P_T must be > 0");
    const MatrixXcd F = regularized_solve(H, lambda);
    const double tau = F.squaredNorm(); // Tr H^H (HH^H + lambda K I)^{-2} H
    if (!(tau > 0.0))
        throw numerical_error("rzf_precoder: degenerate channel, power normalization undefined");
    PrecodingResult out;
    out.xi = std::sqrt(P_T / tau);
    out.G = out.xi * F;
    out.lambda = lambda;
    return out;
}

VectorXd exact_sinr(const MatrixXcd &H, const PrecodingResult &precoder, double sigma2) {
    if (H.rows() != precoder.G.rows() || H.cols() != precoder.G.cols())
        throw config_error("exact_sinr: H and G dimensions disagree");
    if (!(sigma2 > 0.0))
        throw config_error("exact_sinr: sigma2 must be > 0");
    const Eigen::Index K = H.cols();
    const MatrixXcd HG = H.adjoint() * precoder.G; // (k, i) = h_k^H g_i
    VectorXd gamma(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double signal = std::norm(HG(k, k));
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k)
                interference += std::norm(HG(k, i));
        if (interference < -1e-12)
            throw numerical_error("exact_sinr: negative interference term");
        gamma[k] = signal / (std::max(interference, 0.0) + sigma2);
    }
    return gamma;
}

ExactPerformance evaluate_realization(const MatrixXcd &H, double lambda, double nsr) {
    const Eigen::Index K = H.cols();
    const MatrixXcd F = regularized_solve(H, lambda);
    const double tau = F.squaredNorm();
    if (!(tau > 0.0))
        throw numerical_error("evaluate_realization: degenerate channel");
    const MatrixXcd HF = H.adjoint() * F;

    ExactPerformance out;
    out.sinr.resize(K);
    out.rate_bits.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double signal = std::norm(HF(k, k));
        double interference = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k)
                interference += std::norm(HF(k, i));
        out.sinr[k] = signal / (interference + nsr * tau);
        out.rate_bits[k] = std::log2(1.0 + out.sinr[k]);
    }
    out.sum_rate_bits = out.rate_bits.sum();
    return out;
}

McPerformance ergodic_performance(const Scenario &scenario, int trials, std::uint64_t seed,
                                  int workers, std::uint64_t cell_key) {
    if (trials < 1)
        throw config_error("ergodic_performance: trials must be >= 1");
    scenario.validate();
    const channel::ChannelSampler sampler(scenario);
    const int K = scenario.K;
    const double lambda = scenario.lambda;
    const double nsr = scenario.nsr();

    // Per-trial storage indexed by trial number: reduction order is fixed
    // no matter which worker produced which trial.
    std::vector<VectorXd> rates(static_cast<std::size_t>(trials));
    std::vector<VectorXd> sinrs(static_cast<std::size_t>(trials));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto body = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials || failed.load())
                return;
            try {
                RngStream stream(seed, StreamTag::channel, cell_key, static_cast<std::uint64_t>(t));
                const ChannelRealization realization = sampler.sample(stream);
                const ExactPerformance perf = evaluate_realization(realization.H, lambda, nsr);
                rates[static_cast<std::size_t>(t)] = perf.rate_bits;
                sinrs[static_cast<std::size_t>(t)] = perf.sinr;
            } catch (const std::exception &e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty())
                    failure = e.what();
            }
        }
    };

    const int nthreads = std::max(1, workers);
    if (nthreads == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i)
            pool.emplace_back(body);
        for (auto &th : pool)
            th.join();
    }
    if (failed.load())
        throw numerical_error("ergodic_performance: " + failure);

    McPerformance out;
    out.trials = trials;
    out.mean_sinr = VectorXd::Zero(K);
    out.mean_rate_bits = VectorXd::Zero(K);
    out.stderr_rate_bits = VectorXd::Zero(K);
    for (int t = 0; t < trials; ++t) {
        out.mean_sinr += sinrs[static_cast<std::size_t>(t)];
        out.mean_rate_bits += rates[static_cast<std::size_t>(t)];
    }
    out.mean_sinr /= static_cast<double>(trials);
    out.mean_rate_bits /= static_cast<double>(trials);
    out.mean_sum_rate_bits = out.mean_rate_bits.sum();

    if (trials > 1) {
        VectorXd var = VectorXd::Zero(K);
        double var_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            const VectorXd dev = rates[static_cast<std::size_t>(t)] - out.mean_rate_bits;
            var += dev.cwiseProduct(dev);
            const double sdev = rates[static_cast<std::size_t>(t)].sum() - out.mean_sum_rate_bits;
            var_sum += sdev * sdev;
        }
        var /= static_cast<double>(trials - 1);
        var_sum /= static_cast<double>(trials - 1);
        out.stderr_rate_bits = (var / static_cast<double>(trials)).cwiseSqrt();
        out.stderr_sum_rate_bits = std::sqrt(var_sum / static_cast<double>(trials));
    }
    return out;
}

} // namespace rzfde::precoding
