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
#include "rzfde/deterministic.hpp"
#include "rzfde/errors.hpp"
#include "rzfde/precoding.hpp"
#include "rzfde/types.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>

namespace py = pybind11;
using namespace rzfde;

namespace {

Scenario make_scenario(int N, int K, double rho, double nu, const VectorXd &betas,
                       const VectorXd &thetas, double lambda, double P_T, double sigma2,
                       const std::optional<MatrixXcd> &Theta) {
    if (betas.size() != K || thetas.size() != K) {
        throw config_error("betas and thetas must both have K entries");
    }
    Scenario s;
    s.N = N;
    s.K = K;
    s.rho = rho;
    s.nu = nu;
    s.Theta = Theta ? *Theta : channel::exponential_correlation(nu, N);
    s.users.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        auto &u = s.users[static_cast<std::size_t>(k)];
        u.beta = betas(k);
        u.theta_rad = thetas(k);
        u.x_m = 1.0; // bookkeeping only: beta is supplied directly here
    }
    s.P_T = P_T;
    s.sigma2 = sigma2;
    s.lambda = lambda;
    s.validate();
    return s;
}

MatrixXcd sample_channel_py(const Scenario &scenario, std::uint64_t seed, std::uint64_t trial,
                            std::uint64_t cell_key) {
    RngStream stream(seed, StreamTag::channel, cell_key, trial);
    return channel::sample_channel(scenario, stream).H;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RZF multi-user MISO downlink: exact Monte Carlo performance and "
              "deterministic equivalents over correlated Rician fading";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<Scenario>(m, "Scenario", "One experiment cell: dimensions, fading and powers")
        .def_readonly("N", &Scenario::N)
        .def_readonly("K", &Scenario::K)
        .def_readonly("rho", &Scenario::rho)
        .def_readonly("nu", &Scenario::nu)
        .def_readonly("Theta", &Scenario::Theta)
        .def_readonly("P_T", &Scenario::P_T)
        .def_readonly("sigma2", &Scenario::sigma2)
        .def_readonly("lambda_", &Scenario::lambda)
        .def_property_readonly("betas", &Scenario::betas)
        .def_property_readonly("thetas", &Scenario::angles);

    py::class_<McPerformance>(m, "McPerformance", "Monte Carlo averages over channel draws")
        .def_readonly("mean_sinr", &McPerformance::mean_sinr)
        .def_readonly("mean_rate_bits", &McPerformance::mean_rate_bits)
        .def_readonly("stderr_rate_bits", &McPerformance::stderr_rate_bits)
        .def_readonly("mean_sum_rate_bits", &McPerformance::mean_sum_rate_bits)
        .def_readonly("stderr_sum_rate_bits", &McPerformance::stderr_sum_rate_bits)
        .def_readonly("trials", &McPerformance::trials);

    py::class_<DeterministicSINR>(m, "DeterministicSINR",
                                  "Asymptotic per-user SINRs and rates")
        .def_readonly("ubar", &DeterministicSINR::ubar)
        .def_readonly("sbar", &DeterministicSINR::sbar)
        .def_readonly("psibar", &DeterministicSINR::psibar)
        .def_readonly("gammabar", &DeterministicSINR::gammabar)
        .def_readonly("rbar_bits", &DeterministicSINR::rbar_bits)
        .def_readonly("sum_rate_bits", &DeterministicSINR::sum_rate_bits);

    m.def("make_scenario", &make_scenario, py::arg("N"), py::arg("K"), py::arg("rho"),
          py::arg("nu"), py::arg("betas"), py::arg("thetas"), py::kw_only(), py::arg("lambda_"),
          py::arg("P_T") = 10.0, py::arg("sigma2") = 1e-13, py::arg("Theta") = std::nullopt,
          "Build a validated Scenario; Theta defaults to the exponential model nu^|i-j|");

    m.def("exponential_correlation", &channel::exponential_correlation, py::arg("nu"),
          py::arg("N"), "Antenna correlation [Theta]_ij = nu^|i-j|");
    m.def("steering_vector", &channel::steering_vector, py::arg("theta_rad"), py::arg("N"),
          "ULA steering vector, entry n = exp(-i n pi sin(theta))");
    m.def(
        "pathloss",
        [](double x_m, double kappa, double xbar_m, double L_dB, double R_m) {
            PathlossParams p;
            p.kappa = kappa;
            p.xbar_m = xbar_m;
            p.L_linear = std::pow(10.0, L_dB / 10.0);
            p.R_m = R_m;
            p.validate();
            return channel::pathloss(x_m, p);
        },
        py::arg("x_m"), py::arg("kappa") = 3.5, py::arg("xbar_m") = 25.0,
        py::arg("L_dB") = -86.5, py::arg("R_m") = 250.0,
        "Distance-based gain beta(x) = 2 L / (1 + (x/xbar)^kappa)");

    m.def("sample_channel", &sample_channel_py, py::arg("scenario"), py::arg("seed"),
          py::arg("trial") = 0, py::arg("cell_key") = 0,
          "One channel draw H (N x K) from the stream keyed (seed, trial, cell_key); "
          "matches the draws ergodic_performance uses for the same keys");

    m.def(
        "rzf_precoder",
        [](const MatrixXcd &H, double lambda, double P_T) {
            const PrecodingResult r = precoding::rzf_precoder(H, lambda, P_T);
            return py::make_tuple(r.G, r.xi);
        },
        py::arg("H"), py::arg("lambda_"), py::arg("P_T"),
        "Regularized zero-forcing precoder (G, xi) with Tr(G^H G) = P_T");

    m.def(
        "evaluate_realization",
        [](const MatrixXcd &H, double lambda, double sigma2, double P_T) {
            const ExactPerformance perf =
                precoding::evaluate_realization(H, lambda, sigma2 / P_T);
            return py::make_tuple(perf.sinr, perf.rate_bits, perf.sum_rate_bits);
        },
        py::arg("H"), py::arg("lambda_"), py::arg("sigma2"), py::arg("P_T"),
        "Exact (sinr, rate_bits, sum_rate_bits) of the RZF downlink for one H");

    m.def("ergodic_performance", &precoding::ergodic_performance, py::arg("scenario"),
          py::arg("trials"), py::arg("seed"), py::arg("workers") = 1, py::arg("cell_key") = 0,
          "Monte Carlo averages over seeded channel draws; worker count never "
          "changes the result");

    m.def("theorem1_sinr", py::overload_cast<const Scenario &>(&de::theorem1_sinr),
          py::arg("scenario"), "Deterministic equivalent of the per-user SINRs");
    m.def("corollary1_sinr", py::overload_cast<const Scenario &>(&de::corollary1_sinr),
          py::arg("scenario"), "Specialized deterministic equivalent for Theta = I");
    m.def("corollary2_sinr", &de::corollary2_sinr, py::arg("betas"), py::arg("k"),
          py::arg("lambda_"), py::arg("N"), py::arg("K"), py::arg("sigma2"), py::arg("P_T"),
          "Scalar deterministic equivalent for Theta = I and no deterministic "
          "component outside user k's gain");

    m.def(
        "solve_fixed_point",
        [](const Scenario &scenario) {
            const FixedPointSolution sol =
                de::solve_fixed_point(de::lift_scenario(scenario), scenario.lambda);
            return py::make_tuple(sol.delta, sol.deltat, sol.residual, sol.iterations);
        },
        py::arg("scenario"),
        "Solve the coupled (delta, deltat) system; returns (delta, deltat, "
        "residual, iterations)");

    m.def("mc_resolvent_trace", &de::mc_resolvent_trace, py::arg("scenario"), py::arg("trials"),
          py::arg("seed"), py::arg("cell_key") = 0,
          "Monte Carlo (1/K) Tr (Sigma Sigma^H + lambda I)^{-1}, the quantity "
          "(1/K) Tr T approximates");
}
