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
#include <string>
#include <vector>

#include "aperlab/core.hpp"
#include "aperlab/metric.hpp"

namespace aperlab {

/// Which of the two half-space biharmonic kernels:
/// kValue is y^3 (|xi|^2 + y^2)^(-(n+3)/2) acting on g0,
/// kNormal is y^2 (|xi|^2 + y^2)^(-(n+1)/2) acting on g1.
enum class BiharmonicPart { kValue, kNormal };

class Kernel {
 public:
  enum class Kind { kExpMatrix, kGaussian, kPoissonBiharmonic, kTabulated };

  /// R(s) = exp(-omega s) M on s >= 0; M is m x m, row major.
  static Kernel exp_matrix(std::size_t m, std::vector<double> matrix, double omega);
  /// (4 pi t)^(-n/2) exp(-|y|^2 / 4t) on R^n.
  static Kernel gaussian(double t, std::size_t n);
  /// Biharmonic half-space kernel with its normalizing constant, on R^n.
  static Kernel poisson_biharmonic(BiharmonicPart part, double y, std::size_t n);

  struct Table {
    std::function<double(std::span<const double>)> density;
    std::size_t n = 1;
    bool one_sided = false;
    double l1_norm = 0.0;
    std::optional<double> mass;
    /// a -> integral of |h| over |s| > a.
    std::function<double(double)> tail;
    /// a -> integral of |h(s)| log2(1 + |s|) over |s| > a.
    std::function<double(double)> log_moment_tail;
  };
  static Kernel tabulated(Table table);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return n_; }
  bool one_sided() const { return kind_ == Kind::kExpMatrix || table_.one_sided; }
  /// Size of the matrix factor; 1 for scalar kernels.
  std::size_t matrix_dim() const { return m_; }
  const std::vector<double>& matrix() const { return matrix_; }
  double omega() const { return omega_; }
  double time() const { return t_; }
  double height() const { return y_; }
  BiharmonicPart part() const { return part_; }

  double l1_norm() const;
  double tail(double a) const;
  double log_moment_tail(double a) const;
  /// Integral of the kernel when it is a scalar multiple of the identity.
  std::optional<double> mass() const;
  /// Scalar factor of the kernel at s.
  double density(std::span<const double> s) const;

  std::string describe() const;

 private:
  Kernel(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::size_t n_ = 1;
  std::size_t m_ = 1;
  std::vector<double> matrix_{1.0};
  double omega_ = 1.0;
  double t_ = 0.0;
  double y_ = 0.0;
  BiharmonicPart part_ = BiharmonicPart::kValue;
  Table table_;
};

struct ConvolutionResult {
  Value value;
  /// Tail bound + quadrature estimate + propagated evaluation error.
  double error = 0.0;
  double truncation_radius = 0.0;
  double tail_bound = 0.0;
  std::size_t evaluations = 0;
};

/// Smallest radius a (to bisection accuracy) with
/// (A + B log2(1 + r0)) tail(a) + B log_moment_tail(a) <= target.
double truncation_radius(const Kernel& k, const GrowthBound& growth, double r0, double target);

/// int_0^inf R(s) f(t - s) ds for a one-sided kernel.
ConvolutionResult infinite_convolution(const Kernel& r, const FunctionHandle& f, double t,
                                       double tail_tol);

/// int h(s) f(t - s) ds over R^n. One-sided kernels defer to infinite_convolution.
ConvolutionResult l1_convolution(const Kernel& h, const FunctionHandle& f, const Point& t,
                                 double tail_tol);

/// x -> (k * f)(x) as a handle, with growth and Lipschitz metadata carried over.
FunctionHandle convolved(const Kernel& k, const FunctionHandle& f, double tail_tol);

struct PropagationOptions {
  MetricSpec spec = MetricSpec::sup();
  double tail_tol = 1e-9;
};

struct PropagationCheck {
  double lhs = 0.0;          ///< defect of k * f at tau on w
  double rhs = 0.0;          ///< l1 * defect of f on enlarged + tail + grid correction
  double slack = 0.0;        ///< evaluation slack on both sides
  double l1_norm = 0.0;
  double data_defect = 0.0;  ///< defect of f at tau on enlarged
  double tail_term = 0.0;
  double grid_correction = 0.0;
  double margin = 0.0;
  /// True when f has no Lipschitz constant, so the data sup is a grid value.
  bool grid_limited = false;
  bool holds() const { return lhs <= rhs + slack; }
};

/// Both sides of the convolution propagation inequality. The metric must be a
/// sup norm (optionally weighted by a bounded nu) with phi = identity and
/// weight 1. Shift relations need a unit-mass kernel; linear relations must
/// commute with the kernel matrix.
PropagationCheck propagation_check(const Kernel& k, const FunctionHandle& f, const Relation& rho,
                                   const Point& tau, const CompactWindow& w,
                                   const CompactWindow& enlarged,
                                   const PropagationOptions& options = {});

/// Tail contribution of the data outside the margin, shared with the PDE checks.
double propagation_tail(const Kernel& k, const GrowthBound& growth, const Relation& rho,
                        double reach, double margin);

}  // namespace aperlab
