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

#include "aperlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace aperlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kEmptyWindow: return "empty-window";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kInvalidShift: return "invalid-shift";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kBudget: return "budget";
    case ErrorCode::kConditioning: return "conditioning";
    case ErrorCode::kNoPeriods: return "no-periods";
    case ErrorCode::kGradientConsistency: return "gradient-consistency";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}

// ---------------------------------------------------------------- Region

Region::Region(std::vector<Interval> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw Error(ErrorCode::kShape, "region needs at least one axis");
  for (const auto& a : axes_) {
    if (a.empty()) throw Error(ErrorCode::kShape, "region axis is empty");
  }
}

Region Region::whole(std::size_t n) { return Region(std::vector<Interval>(n)); }

Region Region::half_line() { return Region({Interval{0.0, kInf}}); }

bool Region::contains(std::span<const double> p) const {
  if (p.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!axes_[i].contains(p[i])) return false;
  }
  return true;
}

bool Region::admits_shift(std::span<const double> tau) const {
  if (tau.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const auto& a = axes_[i];
    if (!std::isfinite(tau[i])) return false;
    if (std::isfinite(a.lo) && tau[i] < 0.0) return false;
    if (std::isfinite(a.hi) && tau[i] > 0.0) return false;
  }
  return true;
}

double GrowthBound::at_radius(double r) const {
  return constant + log_rate * std::log2(1.0 + std::abs(r));
}

// -------------------------------------------------------- FunctionHandle

FunctionHandle::FunctionHandle(std::string name, Region domain, std::size_t codomain_dim,
                               Procedure procedure, FunctionTraits traits)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      codomain_dim_(codomain_dim),
      procedure_(std::move(procedure)),
      traits_(std::move(traits)) {
  if (codomain_dim_ == 0) throw Error(ErrorCode::kShape, "codomain dimension must be positive");
  if (!procedure_) throw Error(ErrorCode::kShape, "function handle without procedure");
}

Evaluation FunctionHandle::evaluate(std::span<const double> t) const {
  if (t.size() != dimension()) {
    throw Error(ErrorCode::kShape, name_ + ": point has dimension " + std::to_string(t.size()) +
                                       ", expected " + std::to_string(dimension()));
  }
  if (!domain_.contains(t)) throw Error(ErrorCode::kDomain, name_ + ": point outside domain");
  return procedure_(t);
}

double FunctionHandle::operator()(double t) const {
  if (dimension() != 1 || codomain_dim_ != 1) {
    throw Error(ErrorCode::kShape, name_ + ": scalar call on non-scalar handle");
  }
  const double p[1] = {t};
  return evaluate(p).value[0];
}

FunctionHandle FunctionHandle::with_traits(FunctionTraits traits) const {
  FunctionHandle copy = *this;
  copy.traits_ = std::move(traits);
  return copy;
}

FunctionHandle FunctionHandle::renamed(std::string name) const {
  FunctionHandle copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Evaluation eval_checked(const FunctionHandle& f, std::span<const double> t) {
  return f.evaluate(t);
}

FunctionHandle shifted(const FunctionHandle& f, const Point& shift) {
  if (shift.size() != f.dimension()) throw Error(ErrorCode::kShape, "shift dimension mismatch");
  std::vector<Interval> axes = f.domain().axes();
  for (std::size_t i = 0; i < axes.size(); ++i) {
    axes[i].lo -= shift[i];
    axes[i].hi -= shift[i];
  }
  FunctionTraits traits = f.traits();
  if (traits.growth) {
    // |t + s| <= |t| + |s| and log2(1 + a + b) <= log2(1 + a) + log2(1 + b).
    traits.growth->constant += traits.growth->log_rate * std::log2(1.0 + norm2(shift));
  }
  return FunctionHandle(
      f.name() + "(.+tau)", Region(std::move(axes)), f.codomain_dim(),
      [f, shift](std::span<const double> t) {
        Point p(t.begin(), t.end());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
        return f.evaluate_unchecked(p);
      },
      std::move(traits));
}

FunctionHandle component(const FunctionHandle& f, std::size_t index) {
  if (index >= f.codomain_dim()) throw Error(ErrorCode::kShape, "component index out of range");
  return FunctionHandle(
      f.name() + "[" + std::to_string(index) + "]", f.domain(), 1,
      [f, index](std::span<const double> t) {
        Evaluation e = f.evaluate_unchecked(t);
        return Evaluation{{e.value[index]}, e.error};
      },
      f.traits());
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// --------------------------------------------------------- CompactWindow

CompactWindow::CompactWindow(std::vector<Interval> box, std::vector<double> step)
    : box_(std::move(box)), step_(std::move(step)) {
  if (box_.empty()) throw Error(ErrorCode::kShape, "window needs at least one axis");
  if (step_.size() == 1 && box_.size() > 1) step_.assign(box_.size(), step_[0]);
  if (step_.size() != box_.size()) throw Error(ErrorCode::kShape, "window step count mismatch");
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (!std::isfinite(box_[i].lo) || !std::isfinite(box_[i].hi) || box_[i].lo > box_[i].hi) {
      throw Error(ErrorCode::kConfiguration, "window axis must satisfy a <= b with finite ends");
    }
    if (!(step_[i] > 0.0) || !std::isfinite(step_[i])) {
      throw Error(ErrorCode::kConfiguration, "window grid step must be positive");
    }
  }
}

CompactWindow CompactWindow::interval(double a, double b, double step) {
  return CompactWindow({Interval{a, b}}, {step});
}

CompactWindow CompactWindow::cube(std::size_t n, double a, double b, double step) {
  return CompactWindow(std::vector<Interval>(n, Interval{a, b}), std::vector<double>(n, step));
}

CompactWindow CompactWindow::point(const Point& p) {
  std::vector<Interval> box;
  for (double x : p) box.push_back({x, x});
  return CompactWindow(std::move(box), std::vector<double>(p.size(), 1.0));
}

double CompactWindow::max_abs_coordinate() const {
  double m = 0.0;
  for (const auto& a : box_) m = std::max({m, std::abs(a.lo), std::abs(a.hi)});
  return m;
}

double CompactWindow::max_radius() const {
  double s = 0.0;
  for (const auto& a : box_) {
    const double c = std::max(std::abs(a.lo), std::abs(a.hi));
    s += c * c;
  }
  return std::sqrt(s);
}

bool CompactWindow::contains(const CompactWindow& inner) const {
  if (inner.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (inner.box_[i].lo < box_[i].lo || inner.box_[i].hi > box_[i].hi) return false;
  }
  return true;
}

// ------------------------------------------------------------------ Grid

Grid::Grid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  size_ = axes_.empty() ? 0 : 1;
  trap_.resize(axes_.size());
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto& x = axes_[d];
    size_ *= x.size();
    auto& w = trap_[d];
    w.assign(x.size(), 0.0);
    if (x.size() == 1) {
      w[0] = 1.0;
      continue;
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double h = 0.5 * (x[i + 1] - x[i]);
      w[i] += h;
      w[i + 1] += h;
    }
  }
}

void Grid::point(std::size_t index, std::span<double> out) const {
  for (std::size_t d = axes_.size(); d-- > 0;) {
    const std::size_t len = axes_[d].size();
    out[d] = axes_[d][index % len];
    index /= len;
  }
}

Point Grid::point(std::size_t index) const {
  Point p(axes_.size());
  point(index, p);
  return p;
}

std::vector<Point> Grid::points() const {
  std::vector<Point> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(point(i));
  return out;
}

double Grid::trapezoid_weight(std::size_t index) const {
  double w = 1.0;
  for (std::size_t d = axes_.size(); d-- > 0;) {
    const std::size_t len = axes_[d].size();
    w *= trap_[d][index % len];
    index /= len;
  }
  return w;
}

double Grid::volume() const {
  double v = 1.0;
  for (const auto& x : axes_) {
    if (x.size() > 1) v *= x.back() - x.front();
  }
  return v;
}

double Grid::covering_radius() const {
  double s = 0.0;
  for (const auto& x : axes_) {
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) gap = std::max(gap, x[i + 1] - x[i]);
    s += 0.25 * gap * gap;
  }
  return std::sqrt(s);
}

Grid make_grid(const CompactWindow& w, const Region& domain) {
  if (w.dimension() != domain.dimension()) {
    throw Error(ErrorCode::kShape, "window and domain dimensions differ");
  }
  std::vector<std::vector<double>> axes(w.dimension());
  for (std::size_t d = 0; d < w.dimension(); ++d) {
    const double lo = std::max(w.axis(d).lo, domain.axis(d).lo);
    const double hi = std::min(w.axis(d).hi, domain.axis(d).hi);
    if (lo > hi) throw Error(ErrorCode::kEmptyWindow, "window does not meet the domain");
    auto& x = axes[d];
    const double step = w.step()[d];
    const double span = hi - lo;
    const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    x.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k) x.push_back(lo + static_cast<double>(k) * step);
    if (hi - x.back() <= 1e-9 * step) {
      x.back() = hi;
    } else {
      x.push_back(hi);
    }
  }
  return Grid(std::move(axes));
}

// -------------------------------------------------------------- Relation

Relation Relation::identity() { return Relation(Kind::kIdentity); }

Relation Relation::scale(std::complex<double> c) {
  Relation r(Kind::kScale);
  r.scale_ = c;
  return r;
}

Relation Relation::shift(Value offset) {
  Relation r(Kind::kShift);
  r.offset_ = std::move(offset);
  return r;
}

Relation Relation::linear(std::size_t m, std::vector<double> row_major) {
  if (m == 0 || row_major.size() != m * m) {
    throw Error(ErrorCode::kShape, "linear relation needs an m x m matrix");
  }
  Relation r(Kind::kLinear);
  r.m_ = m;
  r.matrix_ = std::move(row_major);
  return r;
}

Relation Relation::zero() { return Relation(Kind::kZero); }

double Relation::linear_norm() const {
  switch (kind_) {
    case Kind::kIdentity:
    case Kind::kShift: return 1.0;
    case Kind::kScale: return std::abs(scale_);
    case Kind::kLinear: return norm2(matrix_);
    case Kind::kZero: return 0.0;
  }
  return 0.0;
}

double Relation::offset_norm() const { return kind_ == Kind::kShift ? norm2(offset_) : 0.0; }

std::string Relation::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::kIdentity: return "identity";
    case Kind::kScale: os << "scale(" << scale_.real() << "," << scale_.imag() << ")"; break;
    case Kind::kShift:
      os << "shift(";
      for (std::size_t i = 0; i < offset_.size(); ++i) os << (i ? "," : "") << offset_[i];
      os << ")";
      break;
    case Kind::kLinear: os << "linear(" << m_ << "x" << m_ << ")"; break;
    case Kind::kZero: return "zero";
  }
  return os.str();
}

Value apply_relation(const Relation& rho, std::span<const double> y) {
  Value out(y.begin(), y.end());
  switch (rho.kind()) {
    case Relation::Kind::kIdentity: return out;
    case Relation::Kind::kZero:
      std::fill(out.begin(), out.end(), 0.0);
      return out;
    case Relation::Kind::kScale: {
      const auto c = rho.scale_factor();
      if (c.imag() == 0.0) {
        for (double& v : out) v *= c.real();
        return out;
      }
      if (out.size() % 2 != 0) {
        throw Error(ErrorCode::kShape, "complex scale needs (re, im) paired values");
      }
      for (std::size_t i = 0; i < out.size(); i += 2) {
        const std::complex<double> z = c * std::complex<double>(y[i], y[i + 1]);
        out[i] = z.real();
        out[i + 1] = z.imag();
      }
      return out;
    }
    case Relation::Kind::kShift: {
      const auto& b = rho.offset();
      if (b.size() != out.size()) throw Error(ErrorCode::kShape, "shift relation dimension mismatch");
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
      return out;
    }
    case Relation::Kind::kLinear: {
      const std::size_t m = rho.matrix_dim();
      if (m != out.size()) throw Error(ErrorCode::kShape, "linear relation dimension mismatch");
      const auto& a = rho.matrix();
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += a[i * m + j] * y[j];
        out[i] = s;
      }
      return out;
    }
  }
  return out;
}

// ------------------------------------------------------------ MetricSpec

Phi Phi::power(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::kConfiguration, "phi power exponent must be >= 1");
  return {Kind::kPower, p};
}

double Phi::operator()(double x) const {
  switch (kind) {
    case Kind::kIdentity: return x;
    case Kind::kPower: return std::pow(x, exponent);
    case Kind::kArctan: return std::atan(x);
  }
  return x;
}

double Phi::perturbation(double x_hat, double dx) const {
  switch (kind) {
    case Kind::kIdentity: return dx;
    case Kind::kPower: return exponent * std::pow(x_hat + dx, exponent - 1.0) * dx;
    case Kind::kArctan: return std::min(dx, std::numbers::pi / 2);
  }
  return dx;
}

Weight Weight::per_window_rule(std::function<double(const CompactWindow&)> rule,
                               std::string label) {
  Weight w;
  w.kind = Kind::kConstPerWindow;
  w.per_window = std::move(rule);
  w.label = std::move(label);
  return w;
}

Weight Weight::levitan_power(double eps0) {
  return per_window_rule(
      [eps0](const CompactWindow& win) {
        const double n = win.max_abs_coordinate();
        if (!(n > 0.0)) {
          throw Error(ErrorCode::kConfiguration, "N^(-2-eps0) weight needs a window with N > 0");
        }
        return std::pow(n, -2.0 - eps0);
      },
      "levitan-power(" + std::to_string(eps0) + ")");
}

Weight Weight::table(std::function<double(std::span<const double>)> f, std::string label) {
  Weight w;
  w.kind = Kind::kTabulated;
  w.tabulated = std::move(f);
  w.label = std::move(label);
  return w;
}

Norm Norm::weighted_sup(std::function<double(std::span<const double>)> nu,
                        std::optional<double> nu_sup, std::string label) {
  return {Kind::kWeightedSup, std::move(nu), nu_sup, std::move(label)};
}

bool MetricSpec::is_plain_sup() const {
  return phi.kind == Phi::Kind::kIdentity && weight.kind == Weight::Kind::kConstOne &&
         norm.kind == Norm::Kind::kSup;
}

std::string MetricSpec::describe() const {
  std::string p = phi.kind == Phi::Kind::kIdentity ? "identity"
                  : phi.kind == Phi::Kind::kArctan ? "arctan"
                                                   : "power(" + std::to_string(phi.exponent) + ")";
  return "phi=" + p + ";weight=" + weight.label + ";norm=" + norm.label;
}

}  // namespace aperlab
