// Copyright 2026 The aperlab Authors
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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "aperlab/core.hpp"

namespace aperlab {

struct DefectResult {
  double value = 0.0;
  std::size_t grid_points = 0;
  /// Accounts for evaluation error bounds and, when an integrand Lipschitz
  /// constant was supplied, for the gap between grid and continuum.
  double certified_slack = 0.0;
  /// True when the continuum part is not covered by the slack.
  bool grid_limited = true;

  double upper() const { return value + certified_slack; }
};

struct DefectOptions {
  /// Lipschitz constant of t -> weight(t) * nu(t) * phi(||F(t+tau) - rho(F(t))||).
  std::optional<double> integrand_lipschitz;
};

/// || weight * phi(||F(. + tau) - rho(F(.))||) || over the window grid.
DefectResult windowed_defect(const FunctionHandle& f, const Relation& rho, const Point& tau,
                             const CompactWindow& w, const MetricSpec& spec,
                             const DefectOptions& options = {});

/// The same functional applied to F - P. A real F is compared with a complex P
/// through the embedding x -> (x, 0). The grid covers w meeting both domains.
DefectResult approx_error(const FunctionHandle& f, const FunctionHandle& p, const CompactWindow& w,
                          const MetricSpec& spec, const DefectOptions& options = {});

struct LipschitzMap {
  std::function<Value(std::span<const double>)> map;
  double lipschitz = 1.0;
  std::size_t out_dim = 1;
  /// h(c y) = c h(y) for real c.
  bool homogeneous = false;
  /// h(0) = 0.
  bool fixes_zero = false;
};

struct ComposeCheck {
  DefectResult composed;  ///< defect of h o F
  DefectResult original;  ///< defect of F
  double lhs = 0.0;
  double rhs = 0.0;  ///< L * defect of F
};

/// Both sides of defect(h o F) <= L defect(F) under a plain sup metric.
/// Supported pairings: Identity; real Scale with homogeneous h; Zero with h(0) = 0.
ComposeCheck lipschitz_compose_check(const FunctionHandle& f, const LipschitzMap& h,
                                     const Relation& rho, const Point& tau, const CompactWindow& w,
                                     const MetricSpec& spec);

/// h o F as a handle; the error bound is L * sqrt(m) * err(F).
FunctionHandle compose(const FunctionHandle& f, const LipschitzMap& h);

}  // namespace aperlab
