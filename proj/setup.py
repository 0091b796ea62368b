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
"""Build the compiled extension for the rzfde package.

The extension compiles the C++ core directly, so a plain
``pip install -e . --no-build-isolation`` works anywhere Eigen and a C++20
compiler are present; the CMake tree remains the home of the CLI and the
test suites.
"""

import os

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("NPY_NUM_BUILD_JOBS").install()


def eigen_include() -> str:
    candidates = [
        os.environ.get("EIGEN3_INCLUDE_DIR", ""),
        "/usr/include/eigen3",
        "/usr/local/include/eigen3",
    ]
    for path in candidates:
        if path and os.path.isdir(path):
            return path
    raise RuntimeError(
        "Eigen headers not found; set EIGEN3_INCLUDE_DIR to the directory "
        "that contains Eigen/Dense"
    )


ext = Pybind11Extension(
    "rzfde._core",
    sources=[
        "bindings/pybind_module.cpp",
        "src/channel.cpp",
        "src/precoding.cpp",
        "src/deterministic.cpp",
        "src/harness.cpp",
    ],
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
