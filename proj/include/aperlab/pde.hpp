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
#include <vector>

#include "aperlab/conv.hpp"
#include "aperlab/core.hpp"
#include "aperlab/metric.hpp"

namespace aperlab {

/// Gaussian semigroup (4 pi t)^(-n/2) int exp(-|y|^2/4t) F(x - y) dy.
ConvolutionResult heat_apply(const FunctionHandle& f, double t, const Point& x, double tol);

/// u(x, t) = (f(x - at) + f(x + at)) / 2 + (1/2a) int_{x-at}^{x+at} g.
Evaluation dalembert(const FunctionHandle& f, const FunctionHandle& g, double a, double x,
                     double t, double quad_tol);

/// Gauss-Legendre in z = cos(theta) times the trapezoid rule in azimuth.
struct SphereRule {
  std::size_t polar = 32;
  std::size_t azimuthal = 64;
};

/// Gauss-Jacobi in u = r^2 absorbing 1/sqrt(1 - r^2), trapezoid in azimuth.
struct DiskRule {
  std::size_t radial = 32;
  std::size_t azimuthal = 64;
};

/// Compares grad_g with central differences of g at ten seeded points of the
/// box center +- radius. Throws kGradientConsistency on mismatch.
void check_gradient(const FunctionHandle& g, const FunctionHandle& grad_g, const Point& center,
                    double radius);

/// Kirchhoff formula for u_tt = d^2 Lap u on R^3 with u(0) = g, u_t(0) = h.
/// The error is the difference against a rule of half the size plus the
/// propagated data error.
Evaluation kirchhoff3d(const FunctionHandle& g, const FunctionHandle& grad_g,
                       const FunctionHandle& h, double d, const Point& x, double t,
                       const SphereRule& rule = {});

/// Poisson formula on R^2 with constants 1/2pi, so that g = c gives u = c.
Evaluation poisson2d(const FunctionHandle& g, const FunctionHandle& grad_g,
                     const FunctionHandle& h, double d, const Point& x, double t,
                     const DiskRule& rule = {});

/// Half-space biharmonic solution K0 * g0 + K1 * g1 at height y.
ConvolutionResult biharmonic_halfspace(const FunctionHandle& g0, const FunctionHandle& g1,
                                       const Point& x, double y, double tol);

struct PdeKind {
  enum class Kind { kWave, kHeat };
  Kind kind = Kind::kHeat;
  double speed = 1.0;

  static PdeKind wave(double a) { return {Kind::kWave, a}; }
  static PdeKind heat() { return {}; }
};

using SpaceTimeFunction = std::function<double(const Point& x, double t)>;

/// Central-difference residual u_tt - a^2 Lap u (wave) or u_t - Lap u (heat).
/// Throws kDomain when the time stencil reaches t < 0 (t <= 0 for heat).
double residual_check(const SpaceTimeFunction& u, const PdeKind& kind, const Point& x, double t,
                      double h);

enum class Formula { kHeat, kDalembert, kKirchhoff3d, kPoisson2d, kBiharmonic };

/// Data of one solution formula at a fixed time (or height).
///   heat:        first = F
///   d'Alembert:  first = f, second = g
///   Kirchhoff, Poisson: first = g, gradient = grad g, second = h
///   biharmonic:  first = g0, second = g1
struct PdeProblem {
  Formula formula = Formula::kHeat;
  std::optional<FunctionHandle> first;
  std::optional<FunctionHandle> gradient;
  std::optional<FunctionHandle> second;
  double speed = 1.0;  ///< a or d
  double time = 1.0;   ///< t0, or y0 for the biharmonic problem
  double tol = 1e-9;
  SphereRule sphere;
  DiskRule disk;

  /// x -> u(t0, x). Throws kConfiguration when required data are missing.
  FunctionHandle solution() const;
};

struct PdePropagation {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  /// Defect of each data term at tau on the enlarged window.
  std::vector<double> data_defects;
  /// Factor multiplying each data defect (kernel mass or formula weight).
  std::vector<double> mass_factors;
  double tail_term = 0.0;
  double grid_correction = 0.0;
  bool grid_limited = false;
  bool holds() const { return lhs <= rhs + slack; }
};

/// Both sides of the propagation inequality for x -> u(t0, x). The relation
/// acts on the first data term; the others use its linear part. Wave formulas
/// need the enlarged window to reach speed * t0 past the window.
PdePropagation pde_propagation_check(const PdeProblem& problem, const Relation& rho,
                                     const Point& tau, const CompactWindow& w,
                                     const CompactWindow& enlarged,
                                     const MetricSpec& spec = MetricSpec::sup());

}  // namespace aperlab
