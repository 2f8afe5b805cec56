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
#include <span>
#include <vector>

#include "aperlab/core.hpp"

namespace aperlab::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Cached; safe to call concurrently.
const Rule& gauss_legendre(std::size_t n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// computed by Golub-Welsch.
Rule gauss_jacobi(std::size_t n, double alpha, double beta);

/// Affine image of a rule on [-1, 1] onto [a, b].
Rule mapped(const Rule& rule, double a, double b);

struct Result {
  Value value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

using VectorIntegrand = std::function<Value(double)>;

/// Adaptive composite Gauss-Legendre with interval halving. Throws kBudget
/// when max_evaluations is exhausted before the tolerance is met.
Result integrate(const VectorIntegrand& f, std::size_t dim, double a, double b, double tol,
                 std::size_t max_evaluations = 4'000'000);

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* error_estimate = nullptr);

using BoxIntegrand = std::function<Value(std::span<const double>)>;

/// Tensor composite Gauss-Legendre on a box; the panel count per axis doubles
/// until two successive estimates agree to tol.
Result integrate_box(const BoxIntegrand& f, std::size_t dim, std::span<const Interval> box,
                     double tol, std::size_t max_evaluations = 20'000'000);

}  // namespace aperlab::quad
