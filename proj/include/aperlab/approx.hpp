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

#include <complex>
#include <vector>

#include "aperlab/core.hpp"
#include "aperlab/metric.hpp"

namespace aperlab {

struct FitResult {
  std::vector<Point> freqs;
  std::vector<std::complex<double>> coeffs;
  DefectResult residual;
  /// Ratio of extreme singular values of the design matrix.
  double condition = 0.0;

  FunctionHandle polynomial() const;
};

/// Condition numbers above this raise kConditioning.
inline constexpr double kMaxCondition = 1e12;

/// Least-squares fit of sum_j c_j exp(i lambda_j . t) to F on the window grid,
/// solved through an SVD of the design matrix. The residual is measured under
/// spec, which must use phi = identity, weight 1 and a sup or L1 norm.
FitResult fit_trig_poly(const FunctionHandle& f, const CompactWindow& w,
                        const std::vector<Point>& freqs, const MetricSpec& spec);

struct StrongApproxTable {
  /// errors[k][j]: polynomial k against F on window j.
  std::vector<std::vector<DefectResult>> errors;
  /// Per window: errors never increase along the sequence.
  std::vector<bool> monotone;
  /// Per window: the last error is at most the threshold.
  std::vector<bool> converged;
  bool pass = false;
};

StrongApproxTable levitan_strong_approx_check(const FunctionHandle& f,
                                              const std::vector<FunctionHandle>& poly_seq,
                                              const std::vector<CompactWindow>& windows,
                                              const MetricSpec& spec, double threshold);

}  // namespace aperlab
