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
#include <cstddef>
#include <string>
#include <vector>

#include "aperlab/core.hpp"

namespace aperlab::zoo {

struct SeriesTruncation {
  double tol = 1e-12;
  std::size_t term_cap = 4096;
};

/// Constant map R^n -> R^m.
FunctionHandle constant(double c, std::size_t n = 1, std::size_t m = 1);

/// x -> v.x + b on R^n. Unbounded unless v = 0.
FunctionHandle affine(std::vector<double> v, double b = 0.0);

/// f(t) = sum_{m>=1} (1/m) sin^2(t / 2^m).
FunctionHandle haraux_souplet(SeriesTruncation trunc = {});
/// First `terms` summands of the series above, exact.
FunctionHandle haraux_souplet_partial(std::size_t terms);
/// Upper bound on sum_{m>M} (1/m) min(1, (t/2^m)^2).
double haraux_souplet_tail(std::size_t terms, double t);

/// phi(t) = sum_{k>=1} sin^2(pi t / 2^k).
FunctionHandle ait_dads_phi(SeriesTruncation trunc = {});
FunctionHandle ait_dads_phi_partial(std::size_t terms);
/// pi^2 t^2 4^-M / 3.
double ait_dads_phi_tail(std::size_t terms, double t);
/// phi(t + 2^l) through the splitting
///   sum_{k<=l} sin^2(pi t/2^k) + sum_{k>=1} sin^2(pi t/2^{k+l} + pi/2^k).
Evaluation ait_dads_phi_split(double t, unsigned l, SeriesTruncation trunc = {});

/// 1 / (2 + cos t + cos(sqrt(2) t)).
FunctionHandle levitan_reciprocal();

/// n 3^{n+1} sin(2 pi x) on [3^n, 3^n + 1] + 2 3^{n+1} Z, zero elsewhere.
FunctionHandle nawrocki();

/// Scalar handle t -> ||f(t)||, the c0 norm of f(t) = (4 n^2 t^2 / (t^2 + n^2)^2)_n,
/// on [0, inf).
FunctionHandle kuchi_c0(std::size_t n_max);
/// ||f(t) - f(s)|| in c0: exhaustive over n < N, N = max(n_max, ceil(max(t, s)) + 1),
/// with the monotone tail beyond N folded into the error.
Evaluation kuchi_c0_distance(double t, double s, std::size_t n_max);
double kuchi_component(double n, double t);

/// P(t) = sum_j c_j exp(i lambda_j . t), complex valued.
FunctionHandle trig_poly(std::vector<Point> freqs, std::vector<std::complex<double>> coeffs);
/// Real part of trig_poly.
FunctionHandle real_trig_poly(std::vector<Point> freqs, std::vector<std::complex<double>> coeffs);

/// F(t_1, ..., t_n) = f_1(t_1) ... f_n(t_n) for 1-D scalar (real or complex) factors.
FunctionHandle tensor_product(const std::vector<FunctionHandle>& factors);

/// Identifiers accepted by the CLI.
const std::vector<std::string>& identifiers();

}  // namespace aperlab::zoo
