# SPDX-License-Identifier: Apache-2.0
#
# rzfde — multi-user MISO downlink simulator with deterministic equivalents
# Copyright (C) 2026 the rzfde authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# --------------------------------------------------------------------------
"""RZF multi-user MISO downlink: seeded Monte Carlo performance and
deterministic equivalents over spatially correlated Rician fading.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.  Everything is deterministic in (seed, scenario): repeated
calls with the same arguments reproduce results bit for bit.
"""

from rzfde._core import (
    ConfigError,
    DeterministicSINR,
    McPerformance,
    NumericalError,
    Scenario,
    corollary1_sinr,
    corollary2_sinr,
    ergodic_performance,
    evaluate_realization,
    exponential_correlation,
    make_scenario,
    mc_resolvent_trace,
    pathloss,
    rzf_precoder,
    sample_channel,
    solve_fixed_point,
    steering_vector,
    theorem1_sinr,
)

__all__ = [
    "ConfigError",
    "DeterministicSINR",
    "McPerformance",
    "NumericalError",
    "Scenario",
    "corollary1_sinr",
    "corollary2_sinr",
    "ergodic_performance",
    "evaluate_realization",
    "exponential_correlation",
    "make_scenario",
    "mc_resolvent_trace",
    "pathloss",
    "rzf_precoder",
    "sample_channel",
    "solve_fixed_point",
    "steering_vector",
    "theorem1_sinr",
]

__version__ = "1.0.0"
