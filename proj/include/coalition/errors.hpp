// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALITION_ERRORS_HPP
#define COALITION_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coalition {

/// Malformed or inconsistent input: bad schema, overlapping allocation,
/// non-monotone valuation, wrong vector lengths.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on the valuation class failed (e.g. a non-submodular
/// project handed to the submodular solver).
struct class_error : std::runtime_error {
  explicit class_error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested operation would exceed its enumeration budget.
struct scale_error : std::runtime_error {
  explicit scale_error(const std::string& what) : std::runtime_error(what) {}
};

/// A proven internal invariant failed at runtime; signals a bug upstream,
/// not a user error.
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

/// Absolute tolerance used by all value comparators. Overridable once at
/// startup (CLI reads COALITION_CORE_TOL); algorithms treat it as constant.
inline double comparison_tolerance = 1e-9;

/// Residual bound for LP feasibility and complementary-slackness checks.
inline double lp_tolerance = 1e-6;

}  // namespace coalition

#endif  // COALITION_ERRORS_HPP
