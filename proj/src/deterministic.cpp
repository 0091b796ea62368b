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

#include "rzfde/deterministic.hpp"

#include "rzfde/channel.hpp"
#include "rzfde/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace rzfde::de {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// tr(X Y) for same-size square matrices without forming the product.
std::complex<double> trace_product(const MatrixXcd &X, const MatrixXcd &Y) {
    return (X.array() * Y.transpose().array()).sum();
}

// Keep the real part of a trace that is real by construction; a visible
// imaginary residue means the inputs lost Hermitian structure somewhere.
double real_trace(std::complex<double> value, const char *label) {
    if (std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value.real()))) {
        throw numerical_error(std::string(label) + " carries imaginary residue " +
                              fmt_double(value.imag()) + " against real part " +
                              fmt_double(value.real()));
    }
    return value.real();
}

// Solve B X = I for Hermitian positive definite B.
MatrixXcd hpd_inverse(const MatrixXcd &B, const char *label) {
    Eigen::LLT<MatrixXcd> llt(B);
    if (llt.info() != Eigen::Success) {
        throw numerical_error(std::string(label) + ": Cholesky factorization failed");
    }
    return llt.solve(MatrixXcd::Identity(B.rows(), B.cols()));
}

struct ResolventPair {
    MatrixXcd T;      // N x N
    MatrixXcd Ttilde; // K x K
};

// T and Ttilde evaluated at a given (delta, deltat).
ResolventPair resolvents_at(const LiftedModel &model, double lambda, double delta,
                            double deltat) {
    const auto N = model.d.size();
    const auto K = model.dtilde.size();
    const bool no_los = model.A.size() == 0 || model.A.squaredNorm() == 0.0;

    ResolventPair out;
    if (no_los) {
        // Both resolvents are diagonal when the deterministic component
        // vanishes; skip the dense factorizations.
        out.T = MatrixXcd::Zero(N, N);
        out.Ttilde = MatrixXcd::Zero(K, K);
        for (Eigen::Index i = 0; i < N; ++i) {
            out.T(i, i) = 1.0 / (lambda * (1.0 + deltat * model.d(i)));
        }
        for (Eigen::Index k = 0; k < K; ++k) {
            out.Ttilde(k, k) = 1.0 / (lambda * (1.0 + delta * model.dtilde(k)));
        }
        return out;
    }

    const VectorXd inv_user = (1.0 + delta * model.dtilde.array()).inverse();
    const VectorXd inv_ant = (1.0 + deltat * model.d.array()).inverse();

    MatrixXcd B = model.A * inv_user.asDiagonal() * model.A.adjoint();
    B.diagonal() += (lambda * (1.0 + deltat * model.d.array())).matrix().cast<std::complex<double>>();
    out.T = hpd_inverse(B, "resolvent T");

    MatrixXcd Bt = model.A.adjoint() * inv_ant.asDiagonal() * model.A;
    Bt.diagonal() += (lambda * (1.0 + delta * model.dtilde.array())).matrix().cast<std::complex<double>>();
    out.Ttilde = hpd_inverse(Bt, "resolvent Ttilde");
    return out;
}

// Shared assembly: everything in Theorem-form and Corollary-form SINRs
// except the sbar / psibar expressions themselves.
struct SinrWorkspace {
    FixedPointSolution fp;
    AuxQuantities aux;
    VectorXd ttkk;   // Re diag(Ttilde)
    MatrixXcd G1;    // (k,i) = a_k^H T a_i
    MatrixXcd G2;    // (k,i) = a_k^H T^2 a_i
    MatrixXcd GD;    // (k,i) = a_k^H T D T a_i
    double trT = 0.0;   // (1/K) Re Tr T
    double trT2 = 0.0;  // (1/K) Re Tr T^2
};

SinrWorkspace build_workspace(const LiftedModel &model, double lambda) {
    SinrWorkspace w;
    w.fp = solve_fixed_point(model, lambda);
    w.aux = aux_quantities(w.fp, model, lambda);

    const auto K = model.dtilde.size();
    w.ttkk = w.fp.Ttilde.diagonal().real();
    for (Eigen::Index k = 0; k < K; ++k) {
        if (!(w.ttkk(k) > 0.0)) {
            throw numerical_error("Ttilde diagonal entry " + std::to_string(k) +
                                  " is not positive: " + fmt_double(w.ttkk(k)));
        }
    }

    const MatrixXcd W = model.A.adjoint() * w.fp.T; // K x N
    w.G1 = W * model.A;
    w.G2 = W * W.adjoint();
    w.GD = W * model.d.asDiagonal() * W.adjoint();

    w.trT = real_trace(w.fp.T.trace(), "Tr T") / static_cast<double>(K);
    w.trT2 = real_trace(trace_product(w.fp.T, w.fp.T), "Tr T^2") / static_cast<double>(K);
    return w;
}

// ubar_k and the (k,i) interference kernel are common to both forms.
double ubar_entry(const SinrWorkspace &w, const LiftedModel &model, double lambda,
                  Eigen::Index k) {
    const double dk = model.dtilde(k);
    const double delta = w.fp.delta;
    return delta * dk +
           (1.0 / (lambda * w.ttkk(k))) * w.G1(k, k).real() / (1.0 + delta * dk);
}

double cross_entry(const SinrWorkspace &w, const LiftedModel &model, double lambda,
                   Eigen::Index k) {
    const double delta = w.fp.delta;
    const double denom_k = (1.0 + delta * model.dtilde(k)) * (1.0 + delta * model.dtilde(k));
    double cross = 0.0;
    for (Eigen::Index i = 0; i < model.dtilde.size(); ++i) {
        if (i == k) {
            continue;
        }
        const double denom_i = (1.0 + delta * model.dtilde(i)) * (1.0 + delta * model.dtilde(i));
        cross += model.dtilde(i) / (lambda * w.ttkk(k) * w.ttkk(k)) *
                 std::norm(w.G1(k, i)) / (denom_i * denom_k);
    }
    return cross;
}

DeterministicSINR finalize(VectorXd ubar, VectorXd sbar, double psibar, double nsr) {
    const auto K = ubar.size();
    if (!(psibar > 0.0)) {
        throw numerical_error("deterministic power normalization is not positive: psibar = " +
                              fmt_double(psibar));
    }
    DeterministicSINR out;
    out.ubar = std::move(ubar);
    out.sbar = std::move(sbar);
    out.psibar = psibar;
    out.gammabar.resize(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        if (!(out.sbar(k) > 0.0)) {
            throw numerical_error("deterministic interference power for user " +
                                  std::to_string(k) +
                                  " is not positive: sbar = " + fmt_double(out.sbar(k)) +
                                  " (asymptotic expression outside its validity range)");
        }
        const double denom = out.sbar(k) + psibar * (1.0 + out.ubar(k)) * (1.0 + out.ubar(k)) * nsr;
        out.gammabar(k) = out.ubar(k) * out.ubar(k) / denom;
    }
    auto [rates, sum] = rates_from_sinr(out.gammabar);
    out.rbar_bits = std::move(rates);
    out.sum_rate_bits = sum;
    return out;
}

} // namespace

LiftedModel lift_scenario(const Scenario &scenario) {
    scenario.validate();
    const int N = scenario.N;
    const int K = scenario.K;

    const channel::HermitianSqrt eig = channel::hermitian_sqrt(scenario.Theta);

    LiftedModel model;
    model.d = eig.d;
    model.U = eig.U;
    model.dtilde.resize(K);
    MatrixXcd Zt(N, K);
    for (int k = 0; k < K; ++k) {
        const UserGeometry &user = scenario.users[static_cast<std::size_t>(k)];
        model.dtilde(k) = user.beta / (1.0 + scenario.rho);
        const double scale = std::sqrt((1.0 / K) * (scenario.rho / (1.0 + scenario.rho)) * user.beta);
        Zt.col(k) = scale * channel::steering_vector(user.theta_rad, N);
    }
    model.A = model.U * Zt;
    return model;
}

FixedPointSolution solve_fixed_point(const LiftedModel &model, double lambda,
                                     const FixedPointOptions &options) {
    if (!(lambda > 0.0)) {
        throw config_error("fixed point requires lambda > 0, got " + fmt_double(lambda));
    }
    if (model.d.size() == 0 || model.dtilde.size() == 0) {
        throw config_error("fixed point requires nonempty D and Dtilde");
    }
    if (model.d.minCoeff() < 0.0 || model.dtilde.minCoeff() < 0.0) {
        throw config_error("fixed point requires nonnegative D and Dtilde");
    }

    const auto K = model.dtilde.size();
    const double start = options.init < 0.0 ? 1.0 / lambda : options.init;

    FixedPointSolution sol;
    sol.delta = start;
    sol.deltat = start;

    for (int it = 0; it < options.max_iter; ++it) {
        const ResolventPair rp = resolvents_at(model, lambda, sol.delta, sol.deltat);
        const double f = (model.d.array() * rp.T.diagonal().array().real()).sum() /
                         static_cast<double>(K);
        const double g = (model.dtilde.array() * rp.Ttilde.diagonal().array().real()).sum() /
                         static_cast<double>(K);
        if (!std::isfinite(f) || !std::isfinite(g) || f < 0.0 || g < 0.0) {
            throw numerical_error("fixed point left the admissible region: f = " + fmt_double(f) +
                                  ", g = " + fmt_double(g) + " at iteration " + std::to_string(it));
        }
        sol.residual = std::max(std::abs(f - sol.delta) / std::max(1.0, std::abs(sol.delta)),
                                std::abs(g - sol.deltat) / std::max(1.0, std::abs(sol.deltat)));
        sol.iterations = it + 1;
        if (sol.residual < options.tol) {
            // Accept (delta, deltat) as-is so the returned matrices are the
            // ones the residual was measured at.
            sol.T = rp.T;
            sol.Ttilde = rp.Ttilde;
            return sol;
        }
        sol.delta = (1.0 - options.omega) * sol.delta + options.omega * f;
        sol.deltat = (1.0 - options.omega) * sol.deltat + options.omega * g;
    }
    throw numerical_error("fixed point did not reach tolerance " + fmt_double(options.tol) +
                          " within " + std::to_string(options.max_iter) +
                          " iterations (last residual " + fmt_double(sol.residual) + ")");
}

AuxQuantities aux_quantities(const FixedPointSolution &fp, const LiftedModel &model,
                             double lambda) {
    const auto K = model.dtilde.size();
    const double Kd = static_cast<double>(K);

    const MatrixXcd DT = model.d.asDiagonal() * fp.T;
    const MatrixXcd DtTt = model.dtilde.asDiagonal() * fp.Ttilde;

    AuxQuantities aux;
    aux.vartheta = real_trace(trace_product(DT, DT), "Tr D T D T") / Kd;
    aux.vartheta_tilde = real_trace(trace_product(DtTt, DtTt), "Tr Dt Tt Dt Tt") / Kd;
    aux.alpha = real_trace(trace_product(DT, fp.T), "Tr D T T") / Kd;

    // M = Dtilde (I + delta Dtilde)^{-2}; the two LOS-coupled traces reduce
    // to K x K forms through W = A^H T.
    const VectorXd M =
        (model.dtilde.array() / (1.0 + fp.delta * model.dtilde.array()).square()).matrix();
    const MatrixXcd W = model.A.adjoint() * fp.T; // K x N
    const MatrixXcd WD = W * model.d.asDiagonal() * W.adjoint();
    const MatrixXcd WW = W * W.adjoint();
    aux.F = (M.array() * WD.diagonal().array().real()).sum() / Kd;
    aux.V = (M.array() * WW.diagonal().array().real()).sum() / Kd;

    aux.Delta = (1.0 - aux.F) * (1.0 - aux.F) - lambda * lambda * aux.vartheta * aux.vartheta_tilde;
    if (!(aux.Delta > 0.0)) {
        throw numerical_error("interference recursion is singular: Delta = " +
                              fmt_double(aux.Delta) + " (F = " + fmt_double(aux.F) + ")");
    }
    return aux;
}

DeterministicSINR theorem1_sinr(const Scenario &scenario) {
    return theorem1_sinr(lift_scenario(scenario), scenario.lambda, scenario.nsr());
}

DeterministicSINR theorem1_sinr(const LiftedModel &model, double lambda, double nsr) {
    const SinrWorkspace w = build_workspace(model, lambda);
    const auto K = model.dtilde.size();
    const double delta = w.fp.delta;
    const AuxQuantities &aux = w.aux;

    VectorXd ubar(K), sbar(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double dk = model.dtilde(k);
        const double one_dk = 1.0 + delta * dk;
        const double tt = w.ttkk(k);

        ubar(k) = ubar_entry(w, model, lambda, k);
        const double term1 =
            (1.0 / (lambda * tt * tt)) * w.G2(k, k).real() / (one_dk * one_dk);
        const double cross = cross_entry(w, model, lambda, k);
        const double term2 = ((1.0 - aux.F) / aux.Delta * aux.alpha +
                              aux.vartheta / aux.Delta * aux.V) *
                             (lambda * dk + cross);
        const double term3 = ((1.0 - aux.F) / aux.Delta * aux.V +
                              lambda * lambda * aux.vartheta_tilde * aux.alpha / aux.Delta) *
                             (1.0 / (lambda * tt * tt)) * w.GD(k, k).real() / (one_dk * one_dk);
        sbar(k) = ubar(k) - (term1 + term2 + term3);
    }

    const double psibar =
        w.trT - lambda * (w.trT2 + 2.0 * (1.0 - aux.F) / aux.Delta * aux.alpha * aux.V +
                          aux.vartheta / aux.Delta * aux.V * aux.V +
                          lambda * lambda * aux.vartheta_tilde * aux.alpha * aux.alpha / aux.Delta);
    return finalize(std::move(ubar), std::move(sbar), psibar, nsr);
}

DeterministicSINR corollary1_sinr(const Scenario &scenario) {
    return corollary1_sinr(lift_scenario(scenario), scenario.lambda, scenario.nsr());
}

DeterministicSINR corollary1_sinr(const LiftedModel &model, double lambda, double nsr) {
    if ((model.d.array() - 1.0).abs().maxCoeff() > 1e-12) {
        throw config_error("corollary1_sinr requires Theta = I (all eigenvalues 1)");
    }
    const SinrWorkspace w = build_workspace(model, lambda);
    const auto K = model.dtilde.size();
    const double delta = w.fp.delta;
    const AuxQuantities &aux = w.aux;

    VectorXd ubar(K), sbar(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double dk = model.dtilde(k);
        const double one_dk = 1.0 + delta * dk;
        const double tt = w.ttkk(k);

        ubar(k) = ubar_entry(w, model, lambda, k);
        const double term1 =
            (1.0 / (lambda * tt * tt)) * w.G2(k, k).real() / (one_dk * one_dk);
        const double cross = cross_entry(w, model, lambda, k);
        sbar(k) = ubar(k) - ((1.0 - aux.F) / aux.Delta * term1 +
                             aux.vartheta / aux.Delta * (lambda * dk + cross));
    }

    const double psibar = w.trT - lambda / aux.Delta * w.trT2;
    return finalize(std::move(ubar), std::move(sbar), psibar, nsr);
}

double corollary2_sinr(const VectorXd &betas, int k, double lambda, int N, int K, double sigma2,
                       double P_T) {
    if (K < 1 || N < K) {
        throw config_error("corollary2_sinr requires N >= K >= 1");
    }
    if (betas.size() != K) {
        throw config_error("corollary2_sinr: betas must have K entries");
    }
    if (k < 0 || k >= K) {
        throw config_error("corollary2_sinr: user index out of range");
    }
    if (!(lambda > 0.0) || !(sigma2 > 0.0) || !(P_T > 0.0)) {
        throw config_error("corollary2_sinr requires lambda, sigma2, P_T > 0");
    }
    if (betas.minCoeff() <= 0.0) {
        throw config_error("corollary2_sinr requires positive channel gains");
    }

    const double Nd = static_cast<double>(N);
    const double ratio = static_cast<double>(K) / Nd;
    const auto rhs = [&](double dl) {
        return 1.0 / (ratio * lambda + (betas.array() / (1.0 + dl * betas.array())).sum() / Nd);
    };
    // dl - rhs(dl) is increasing, negative at 0 and positive at the
    // supremum of rhs plus one, so bisection converges unconditionally.
    double lo = 0.0;
    double hi = 1.0 / (ratio * lambda) + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - rhs(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double dl = 0.5 * (lo + hi);

    const double S = ((dl * betas.array()).square() / (1.0 + dl * betas.array()).square()).sum() / Nd;
    if (!(1.0 - S > 0.0)) {
        throw numerical_error("corollary2_sinr: power series term 1 - S is not positive: " +
                              fmt_double(1.0 - S));
    }
    const double pref = 1.0 / (1.0 - lambda * ratio * dl / (1.0 - S));
    if (!(pref > 0.0) || !std::isfinite(pref)) {
        throw numerical_error("corollary2_sinr: normalization prefactor is not positive: " +
                              fmt_double(pref));
    }
    const double nsr = sigma2 / P_T;
    const double bk = betas(k);
    return pref * (dl * bk) * (dl * bk) / (dl * bk + dl * (1.0 + dl * bk) * (1.0 + dl * bk) * nsr);
}

std::pair<VectorXd, double> rates_from_sinr(const VectorXd &gammabar) {
    VectorXd rates(gammabar.size());
    double sum = 0.0;
    for (Eigen::Index k = 0; k < gammabar.size(); ++k) {
        if (!(gammabar(k) >= 0.0) || !std::isfinite(gammabar(k))) {
            throw numerical_error("SINR for user " + std::to_string(k) +
                                  " is negative or non-finite: " + fmt_double(gammabar(k)));
        }
        rates(k) = std::log2(1.0 + gammabar(k));
        sum += rates(k);
    }
    return {std::move(rates), sum};
}

double mc_resolvent_trace(const Scenario &scenario, int trials, std::uint64_t seed,
                          std::uint64_t cell_key) {
    if (trials < 1) {
        throw config_error("mc_resolvent_trace requires trials >= 1");
    }
    const LiftedModel model = lift_scenario(scenario);
    const int N = scenario.N;
    const int K = scenario.K;

    const VectorXd sqrt_d = model.d.array().sqrt();
    const VectorXd sqrt_dt = model.dtilde.array().sqrt();
    const double inv_sqrt_K = 1.0 / std::sqrt(static_cast<double>(K));

    double acc = 0.0;
    MatrixXcd Z(N, K);
    for (int t = 0; t < trials; ++t) {
        RngStream stream(seed, StreamTag::resolvent, cell_key, static_cast<std::uint64_t>(t));
        for (int k = 0; k < K; ++k) {
            for (int n = 0; n < N; ++n) {
                Z(n, k) = stream.next_cnormal();
            }
        }
        MatrixXcd Sigma =
            inv_sqrt_K * (sqrt_d.asDiagonal() * (model.U * Z) * sqrt_dt.asDiagonal());
        Sigma += model.A;
        MatrixXcd B = Sigma * Sigma.adjoint();
        B.diagonal().array() += scenario.lambda;
        const MatrixXcd R = hpd_inverse(B, "mc resolvent");
        acc += real_trace(R.trace(), "Tr resolvent") / static_cast<double>(K);
    }
    return acc / trials;
}

} // namespace rzfde::de
