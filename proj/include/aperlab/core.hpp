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
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aperlab {

using Point = std::vector<double>;
using Value = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  kDomain,
  kEmptyWindow,
  kShape,
  kInvalidShift,
  kConfiguration,
  kPrecondition,
  kBudget,
  kConditioning,
  kNoPeriods,
  kGradientConsistency,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool empty() const { return !(lo <= hi); }
  double length() const { return hi - lo; }
};

/// Product of intervals and half-lines. Every domain the zoo uses has this form.
class Region {
 public:
  explicit Region(std::vector<Interval> axes);

  static Region whole(std::size_t n);
  static Region half_line();

  std::size_t dimension() const { return axes_.size(); }
  const Interval& axis(std::size_t i) const { return axes_[i]; }
  const std::vector<Interval>& axes() const { return axes_; }

  bool contains(std::span<const double> p) const;

  /// True when tau + region is contained in region.
  bool admits_shift(std::span<const double> tau) const;

 private:
  std::vector<Interval> axes_;
};

struct Evaluation {
  Value value;
  /// Componentwise bound on |value - exact|.
  double error = 0.0;
};

/// Envelope ||F(t)|| <= constant + log_rate * log2(1 + |t|).
struct GrowthBound {
  double constant = 0.0;
  double log_rate = 0.0;

  bool bounded() const { return log_rate == 0.0; }
  double at_radius(double r) const;
};

struct FunctionTraits {
  /// Absent means no usable growth envelope (treated as unbounded).
  std::optional<GrowthBound> growth;
  /// Global Lipschitz constant of t -> F(t) in the Euclidean norms.
  std::optional<double> lipschitz;
};

/// Evaluable map from a region of R^n to R^m with a certified evaluation
/// error. Complex values are stored as (re, im) pairs. Immutable; copies
/// share the underlying procedure.
class FunctionHandle {
 public:
  using Procedure = std::function<Evaluation(std::span<const double>)>;

  FunctionHandle(std::string name, Region domain, std::size_t codomain_dim,
                 Procedure procedure, FunctionTraits traits = {});

  const std::string& name() const { return name_; }
  const Region& domain() const { return domain_; }
  std::size_t dimension() const { return domain_.dimension(); }
  std::size_t codomain_dim() const { return codomain_dim_; }
  const FunctionTraits& traits() const { return traits_; }

  /// Checked evaluation; throws kDomain outside the domain.
  Evaluation evaluate(std::span<const double> t) const;
  /// Skips the domain check. Callers guarantee t lies in the domain.
  Evaluation evaluate_unchecked(std::span<const double> t) const {
    return procedure_(t);
  }
  Value value(std::span<const double> t) const { return evaluate(t).value; }
  double err_bound(std::span<const double> t) const { return evaluate(t).error; }

  /// Scalar convenience for one-dimensional, real-valued handles.
  double operator()(double t) const;

  FunctionHandle with_traits(FunctionTraits traits) const;
  FunctionHandle renamed(std::string name) const;

 private:
  std::string name_;
  Region domain_;
  std::size_t codomain_dim_;
  Procedure procedure_;
  FunctionTraits traits_;
};

Evaluation eval_checked(const FunctionHandle& f, std::span<const double> t);

/// t -> F(t + shift), on the region of points whose shift lies in dom F.
FunctionHandle shifted(const FunctionHandle& f, const Point& shift);

/// Component `index` of a vector-valued handle as a real scalar handle.
FunctionHandle component(const FunctionHandle& f, std::size_t index);

/// Euclidean norm.
double norm2(std::span<const double> v);

class CompactWindow {
 public:
  CompactWindow(std::vector<Interval> box, std::vector<double> step);

  static CompactWindow interval(double a, double b, double step);
  static CompactWindow cube(std::size_t n, double a, double b, double step);
  static CompactWindow point(const Point& p);

  std::size_t dimension() const { return box_.size(); }
  const std::vector<Interval>& box() const { return box_; }
  const std::vector<double>& step() const { return step_; }
  const Interval& axis(std::size_t i) const { return box_[i]; }

  /// Largest |coordinate| magnitude reached on any axis.
  double max_abs_coordinate() const;
  /// Largest Euclidean norm of a box corner.
  double max_radius() const;
  bool contains(const CompactWindow& inner) const;

 private:
  std::vector<Interval> box_;
  std::vector<double> step_;
};

/// Tensor lattice on box intersected with a region. Points are ordered
/// lexicographically with the last axis varying fastest.
class Grid {
 public:
  explicit Grid(std::vector<std::vector<double>> axes);

  std::size_t dimension() const { return axes_.size(); }
  std::size_t size() const { return size_; }
  const std::vector<double>& axis(std::size_t i) const { return axes_[i]; }

  void point(std::size_t index, std::span<double> out) const;
  Point point(std::size_t index) const;
  std::vector<Point> points() const;

  /// Tensor trapezoid weight. Degenerate axes contribute a factor of one.
  double trapezoid_weight(std::size_t index) const;
  /// Product of the non-degenerate axis lengths.
  double volume() const;
  /// Half the diagonal of the coarsest grid cell.
  double covering_radius() const;

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<std::vector<double>> trap_;
  std::size_t size_ = 0;
};

Grid make_grid(const CompactWindow& w, const Region& domain);

class Relation {
 public:
  enum class Kind { kIdentity, kScale, kShift, kLinear, kZero };

  static Relation identity();
  static Relation scale(std::complex<double> c);
  static Relation shift(Value offset);
  static Relation linear(std::size_t m, std::vector<double> row_major);
  static Relation zero();

  Kind kind() const { return kind_; }
  std::complex<double> scale_factor() const { return scale_; }
  const Value& offset() const { return offset_; }
  const std::vector<double>& matrix() const { return matrix_; }
  std::size_t matrix_dim() const { return m_; }

  /// Lipschitz constant of the linear part y -> rho(y) - rho(0).
  double linear_norm() const;
  /// ||rho(0)||.
  double offset_norm() const;

  std::string describe() const;

 private:
  Relation(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::complex<double> scale_{1.0, 0.0};
  Value offset_;
  std::vector<double> matrix_;
  std::size_t m_ = 0;
};

Value apply_relation(const Relation& rho, std::span<const double> y);

struct Phi {
  enum class Kind { kIdentity, kPower, kArctan };

  Kind kind = Kind::kIdentity;
  double exponent = 1.0;

  static Phi identity() { return {}; }
  static Phi power(double p);
  static Phi arctan() { return {Kind::kArctan, 1.0}; }

  double operator()(double x) const;
  /// Bound on |phi(x) - phi(x_hat)| given |x - x_hat| <= dx.
  double perturbation(double x_hat, double dx) const;
};

struct Weight {
  enum class Kind { kConstOne, kConstPerWindow, kTabulated };

  Kind kind = Kind::kConstOne;
  std::function<double(const CompactWindow&)> per_window;
  std::function<double(std::span<const double>)> tabulated;
  std::string label = "one";

  static Weight one() { return {}; }
  static Weight per_window_rule(std::function<double(const CompactWindow&)> rule,
                                std::string label);
  /// N^(-2-eps0) where N is the largest |coordinate| of the window.
  static Weight levitan_power(double eps0);
  static Weight table(std::function<double(std::span<const double>)> f,
                      std::string label);
};

struct Norm {
  enum class Kind { kSup, kWeightedSup, kL1, kArctanSup };

  Kind kind = Kind::kSup;
  std::function<double(std::span<const double>)> nu;
  /// Upper bound of nu when known; absent means nu may be unbounded.
  std::optional<double> nu_sup;
  std::string label = "sup";

  static Norm sup() { return {}; }
  static Norm l1() { return {Kind::kL1, {}, {}, "l1"}; }
  static Norm arctan_sup() { return {Kind::kArctanSup, {}, {}, "arctan-sup"}; }
  static Norm weighted_sup(std::function<double(std::span<const double>)> nu,
                           std::optional<double> nu_sup, std::string label);
};

struct MetricSpec {
  Phi phi;
  Weight weight;
  Norm norm;

  static MetricSpec sup() { return {}; }
  static MetricSpec l1() { return {Phi{}, Weight{}, Norm::l1()}; }
  bool is_plain_sup() const;
  std::string describe() const;
};

}  // namespace aperlab
