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

#ifndef RZFDE_ERRORS_HPP
#define RZFDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rzfde {

// Invalid configuration, parameters, or preconditions.  CLI exit code 2.
class config_error : public std::invalid_argument {
  public:
    explicit config_error(const std::string &what) : std::invalid_argument(what) {}
};

// Numerical failure: non-convergence, loss of positivity, degenerate
// regime, or an internal consistency check tripping.  CLI exit code 3.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace rzfde

#endif // RZFDE_ERRORS_HPP
