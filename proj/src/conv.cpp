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

#include "aperlab/conv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "aperlab/quadrature.hpp"

namespace aperlab {
namespace {

constexpr double kPi = std::numbers::pi;

// Regularized upper incomplete gamma Q(s, x) for s = two_s / 2.
double gamma_q_half(int two_s, double x) {
  if (x <= 0.0) return 1.0;
  double s;
  double q;
  if (two_s % 2 == 0) {
    s = 1.0;
    q = std::exp(-x);
  } else {
    s = 0.5;
    q = std::erfc(std::sqrt(x));
  }
  // Q(s + 1, x) = Q(s, x) + x^s e^-x / Gamma(s + 1).
  while (s < 0.5 * two_s) {
    q += std::exp(s * std::log(x) - x - std::lgamma(s + 1.0));
    s += 1.0;
  }
  return std::min(q, 1.0);
}

double sphere_area(std::size_t n) {
  const double h = 0.5 * static_cast<double>(n);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double biharmonic_constant(BiharmonicPart part, std::size_t n) {
  const double nd = static_cast<double>(n);
  if (part == BiharmonicPart::kValue) {
    return 2.0 * std::tgamma(0.5 * (nd + 3.0)) * std::pow(kPi, -0.5 * (nd + 1.0));
  }
  return std::tgamma(0.5 * (nd + 1.0)) * std::pow(kPi, -0.5 * (nd + 1.0));
}

// int_0^min(u,1) v^p log2(1/v) dv.
double log_singular_moment(double u, double p) {
  const double v = std::min(u, 1.0);
  if (v <= 0.0) return 0.0;
  return std::pow(v, p + 1.0) / (p + 1.0) *
         (std::log2(1.0 / v) + 1.0 / ((p + 1.0) * std::numbers::ln2));
}

bool is_scalar_identity(const std::vector<double>& m, std::size_t dim, double* scalar) {
  const double c = m[0];
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (m[i * dim + j] != (i == j ? c : 0.0)) return false;
    }
  }
  if (scalar) *scalar = c;
  return true;
}

GrowthBound require_growth(const FunctionHandle& f) {
  if (!f.traits().growth) {
    throw Error(ErrorCode::kPrecondition,
                f.name() + " has no growth envelope; convolution needs bounded or log-growth data");
  }
  return *f.traits().growth;
}

// Radial parametrization of a symmetric kernel:
// int K(xi) g(x - xi) dxi = int_0^{u_a} rho(u) S(r(u)) du with S the surface
// integral of g over the sphere of radius r around x.
struct Radial {
  double u_max;
  std::function<double(double)> radius;
  std::function<double(double)> density;
};

Radial radial_form(const Kernel& k, double a) {
  const std::size_t n = k.dimension();
  const double nd = static_cast<double>(n);
  if (k.kind() == Kernel::Kind::kGaussian) {
    const double scale = 2.0 * std::sqrt(k.time());
    const double norm = std::pow(kPi, -0.5 * nd);
    return {a / scale, [scale](double u) { return scale * u; },
            [norm, nd](double u) { return norm * std::pow(std::abs(u), nd - 1.0) * std::exp(-u * u); }};
  }
  const double y = k.height();
  const double c = biharmonic_constant(k.part(), n);
  auto radius = [y](double u) { return y * std::tan(u); };
  if (k.part() == BiharmonicPart::kValue) {
    return {std::atan2(a, y), radius, [c, nd](double u) {
              const double cu = std::cos(u);
              return c * std::pow(std::abs(std::sin(u)), nd - 1.0) * cu * cu;
            }};
  }
  return {std::atan2(a, y), radius,
          [c, nd, y](double u) { return c * y * std::pow(std::abs(std::sin(u)), nd - 1.0); }};
}

struct Accumulator {
  double max_error = 0.0;
  std::size_t evaluations = 0;
};

Value eval_at(const FunctionHandle& f, const Point& p, Accumulator& acc) {
  const Evaluation e = f.evaluate(p);
  acc.max_error = std::max(acc.max_error, e.error);
  ++acc.evaluations;
  return e.value;
}

// Unnormalized surface integral of f over the sphere of radius r around x.
Value sphere_integral(const FunctionHandle& f, const Point& x, double r, double tol,
                      Accumulator& acc) {
  const std::size_t n = x.size();
  const std::size_t m = f.codomain_dim();
  if (n == 2) {
    return quad::integrate(
               [&](double phi) {
                 return eval_at(f, {x[0] - r * std::cos(phi), x[1] - r * std::sin(phi)}, acc);
               },
               m, 0.0, 2.0 * kPi, tol)
        .value;
  }
  if (n == 3) {
    return quad::integrate(
               [&](double z) {
                 const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                 return quad::integrate(
                            [&](double phi) {
                              return eval_at(f,
                                             {x[0] - r * s * std::cos(phi),
                                              x[1] - r * s * std::sin(phi), x[2] - r * z},
                                             acc);
                            },
                            m, 0.0, 2.0 * kPi, tol / 4.0)
                     .value;
               },
               m, -1.0, 1.0, tol)
        .value;
  }
  throw Error(ErrorCode::kConfiguration, "radial kernels are supported for n <= 3");
}

ConvolutionResult symmetric_convolution(const Kernel& k, const FunctionHandle& f, const Point& x,
                                        double tail_tol) {
  const GrowthBound growth = require_growth(f);
  const std::size_t m = f.codomain_dim();
  ConvolutionResult out;
  out.truncation_radius = truncation_radius(k, growth, norm2(x), 0.5 * tail_tol);
  const double a = out.truncation_radius;
  out.tail_bound = (growth.constant + growth.log_rate * std::log2(1.0 + norm2(x))) * k.tail(a) +
                   growth.log_rate * k.log_moment_tail(a);
  const double qtol = 0.5 * tail_tol;
  Accumulator acc;
  quad::Result q;
  if (k.kind() == Kernel::Kind::kTabulated) {
    const std::size_t n = k.dimension();
    auto integrand = [&](std::span<const double> s) {
      Point p(x);
      for (std::size_t i = 0; i < n; ++i) p[i] -= s[i];
      Value v = f.evaluate(p).value;
      const double h = k.density(s);
      for (double& c : v) c *= h;
      return v;
    };
    if (n == 1) {
      q = quad::integrate([&](double s) { return integrand(std::span<const double>(&s, 1)); }, m,
                          -a, a, qtol);
    } else {
      std::vector<Interval> box(n, Interval{-a, a});
      q = quad::integrate_box(integrand, m, box, qtol);
    }
    // Evaluation error is not tracked through the box rule; take the worst at x.
    acc.max_error = f.evaluate(x).error;
  } else {
    const Radial rad = radial_form(k, a);
    if (x.size() == 1) {
      // Signed radial variable on [-u_a, u_a].
      q = quad::integrate(
          [&](double u) {
            Value v = eval_at(f, {x[0] - rad.radius(u)}, acc);
            const double w = rad.density(u);
            for (double& c : v) c *= w;
            return v;
          },
          m, -rad.u_max, rad.u_max, qtol);
    } else {
      const double inner_tol = 0.1 * qtol * sphere_area(x.size()) / std::max(k.l1_norm(), 1e-300);
      q = quad::integrate(
          [&](double u) {
            const double w = rad.density(u);
            if (w == 0.0) return Value(m, 0.0);
            Value v = sphere_integral(f, x, rad.radius(u), inner_tol, acc);
            for (double& c : v) c *= w;
            return v;
          },
          m, 0.0, rad.u_max, qtol);
    }
  }
  out.value = std::move(q.value);
  out.evaluations = acc.evaluations;
  out.error = out.tail_bound + q.error_estimate +
              k.l1_norm() * std::sqrt(static_cast<double>(m)) * acc.max_error;
  return out;
}

}  // namespace

// ------------------------------------------------------------------ Kernel

Kernel Kernel::exp_matrix(std::size_t m, std::vector<double> matrix, double omega) {
  if (m == 0 || matrix.size() != m * m) {
    throw Error(ErrorCode::kShape, "exponential kernel needs an m x m matrix");
  }
  if (!(omega > 0.0)) throw Error(ErrorCode::kConfiguration, "exponential kernel needs omega > 0");
  Kernel k(Kind::kExpMatrix);
  k.m_ = m;
  k.matrix_ = std::move(matrix);
  k.omega_ = omega;
  return k;
}

Kernel Kernel::gaussian(double t, std::size_t n) {
  if (!(t > 0.0)) throw Error(ErrorCode::kDomain, "Gaussian kernel needs t > 0");
  if (n == 0) throw Error(ErrorCode::kShape, "Gaussian kernel needs n >= 1");
  Kernel k(Kind::kGaussian);
  k.t_ = t;
  k.n_ = n;
  return k;
}

Kernel Kernel::poisson_biharmonic(BiharmonicPart part, double y, std::size_t n) {
  if (!(y > 0.0)) throw Error(ErrorCode::kDomain, "biharmonic kernel needs y > 0");
  if (n == 0) throw Error(ErrorCode::kShape, "biharmonic kernel needs n >= 1");
  Kernel k(Kind::kPoissonBiharmonic);
  k.part_ = part;
  k.y_ = y;
  k.n_ = n;
  return k;
}

Kernel Kernel::tabulated(Table table) {
  if (!table.density || !table.tail || !table.log_moment_tail) {
    throw Error(ErrorCode::kConfiguration, "tabulated kernel needs density and tail envelopes");
  }
  if (!(table.l1_norm >= 0.0) || !std::isfinite(table.l1_norm)) {
    throw Error(ErrorCode::kConfiguration, "tabulated kernel needs a finite L1 norm");
  }
  if (table.one_sided && table.n != 1) {
    throw Error(ErrorCode::kConfiguration, "one-sided kernels live on the half-line");
  }
  Kernel k(Kind::kTabulated);
  k.n_ = table.n;
  k.table_ = std::move(table);
  return k;
}

double Kernel::l1_norm() const {
  switch (kind_) {
    case Kind::kExpMatrix: return norm2(matrix_) / omega_;
    case Kind::kGaussian: return 1.0;
    case Kind::kPoissonBiharmonic: return part_ == BiharmonicPart::kValue ? 1.0 : y_;
    case Kind::kTabulated: return table_.l1_norm;
  }
  return 0.0;
}

double Kernel::tail(double a) const {
  if (a <= 0.0) return l1_norm();
  switch (kind_) {
    case Kind::kExpMatrix: return norm2(matrix_) * std::exp(-omega_ * a) / omega_;
    case Kind::kGaussian: return gamma_q_half(static_cast<int>(n_), a * a / (4.0 * t_));
    case Kind::kPoissonBiharmonic: {
      // r = y tan(theta); u = pi/2 - theta; sin^(n-1) <= 1.
      const double u = std::atan2(y_, a);
      const double c = biharmonic_constant(part_, n_) * sphere_area(n_);
      const double bound = part_ == BiharmonicPart::kValue
                               ? c * (0.5 * u - 0.25 * std::sin(2.0 * u))
                               : c * y_ * u;
      return std::min(bound, l1_norm());
    }
    case Kind::kTabulated: return table_.tail(a);
  }
  return 0.0;
}

double Kernel::log_moment_tail(double a) const {
  a = std::max(a, 0.0);
  switch (kind_) {
    case Kind::kExpMatrix: {
      // log2(1 + s) <= log2(1 + a) + (s - a) / ((1 + a) ln 2) for s >= a.
      const double e = norm2(matrix_) * std::exp(-omega_ * a);
      return e * (std::log2(1.0 + a) / omega_ +
                  1.0 / ((1.0 + a) * std::numbers::ln2 * omega_ * omega_));
    }
    case Kind::kGaussian: {
      const double x = a * a / (4.0 * t_);
      const double nd = static_cast<double>(n_);
      const double first_moment = 2.0 * std::sqrt(t_) *
                                  std::exp(std::lgamma(0.5 * (nd + 1.0)) - std::lgamma(0.5 * nd)) *
                                  gamma_q_half(static_cast<int>(n_) + 1, x);
      return std::log2(1.0 + a) * tail(a) + first_moment / ((1.0 + a) * std::numbers::ln2);
    }
    case Kind::kPoissonBiharmonic: {
      // |xi| = y cot(u) <= y / u, so log2(1 + |xi|) <= log2(1 + y) + max(0, log2(1/u)).
      const double u = a > 0.0 ? std::atan2(y_, a) : kPi / 2.0;
      const double l = std::log2(1.0 + y_);
      const double c = biharmonic_constant(part_, n_) * sphere_area(n_);
      if (part_ == BiharmonicPart::kValue) {
        return c * (l * (0.5 * u - 0.25 * std::sin(2.0 * u)) + log_singular_moment(u, 2.0));
      }
      return c * y_ * (l * u + log_singular_moment(u, 0.0));
    }
    case Kind::kTabulated: return table_.log_moment_tail(a);
  }
  return 0.0;
}

std::optional<double> Kernel::mass() const {
  switch (kind_) {
    case Kind::kExpMatrix: {
      double c = 0.0;
      if (is_scalar_identity(matrix_, m_, &c)) return c / omega_;
      return std::nullopt;
    }
    case Kind::kGaussian: return 1.0;
    case Kind::kPoissonBiharmonic: return part_ == BiharmonicPart::kValue ? 1.0 : y_;
    case Kind::kTabulated: return table_.mass;
  }
  return std::nullopt;
}

double Kernel::density(std::span<const double> s) const {
  switch (kind_) {
    case Kind::kExpMatrix: return s[0] >= 0.0 ? std::exp(-omega_ * s[0]) : 0.0;
    case Kind::kGaussian: {
      const double r2 = norm2(s) * norm2(s);
      return std::pow(4.0 * kPi * t_, -0.5 * static_cast<double>(n_)) * std::exp(-r2 / (4.0 * t_));
    }
    case Kind::kPoissonBiharmonic: {
      const double r2 = norm2(s) * norm2(s) + y_ * y_;
      const double nd = static_cast<double>(n_);
      const double c = biharmonic_constant(part_, n_);
      return part_ == BiharmonicPart::kValue ? c * y_ * y_ * y_ * std::pow(r2, -0.5 * (nd + 3.0))
                                             : c * y_ * y_ * std::pow(r2, -0.5 * (nd + 1.0));
    }
    case Kind::kTabulated: return table_.density(s);
  }
  return 0.0;
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::kExpMatrix: os << "exp-matrix(m=" << m_ << ",omega=" << omega_ << ")"; break;
    case Kind::kGaussian: os << "gaussian(t=" << t_ << ",n=" << n_ << ")"; break;
    case Kind::kPoissonBiharmonic:
      os << "biharmonic(" << (part_ == BiharmonicPart::kValue ? "value" : "normal") << ",y=" << y_
         << ",n=" << n_ << ")";
      break;
    case Kind::kTabulated: os << "tabulated(n=" << n_ << ")"; break;
  }
  return os.str();
}

// ------------------------------------------------------------- convolution

double truncation_radius(const Kernel& k, const GrowthBound& growth, double r0, double target) {
  if (!(target > 0.0)) throw Error(ErrorCode::kConfiguration, "tail tolerance must be positive");
  const double base = growth.constant + growth.log_rate * std::log2(1.0 + r0);
  auto bound = [&](double a) { return base * k.tail(a) + growth.log_rate * k.log_moment_tail(a); };
  if (bound(0.0) <= target) return 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (bound(hi) > target) {
    hi *= 2.0;
    if (++doublings > 200) {
      throw Error(ErrorCode::kBudget, "tail tolerance unreachable for " + k.describe());
    }
  }
  double lo = hi / 2.0;
  if (doublings == 0) lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ConvolutionResult infinite_convolution(const Kernel& r, const FunctionHandle& f, double t,
                                       double tail_tol) {
  if (!r.one_sided()) {
    throw Error(ErrorCode::kConfiguration, "infinite convolution needs a one-sided kernel");
  }
  if (f.dimension() != 1) throw Error(ErrorCode::kShape, "infinite convolution needs 1-D data");
  const std::size_t m = f.codomain_dim();
  const std::size_t km = r.matrix_dim();
  if (km != 1 && km != m) throw Error(ErrorCode::kShape, "kernel matrix does not match the data");
  const GrowthBound growth = require_growth(f);
  ConvolutionResult out;
  out.truncation_radius = truncation_radius(r, growth, std::abs(t), 0.5 * tail_tol);
  const double a = out.truncation_radius;
  out.tail_bound = (growth.constant + growth.log_rate * std::log2(1.0 + std::abs(t))) * r.tail(a) +
                   growth.log_rate * r.log_moment_tail(a);
  Accumulator acc;
  const auto& mat = r.matrix();
  const quad::Result q = quad::integrate(
      [&](double s) {
        const Value v = eval_at(f, {t - s}, acc);
        const double h = r.density(std::span<const double>(&s, 1));
        Value out_v(m, 0.0);
        if (km == 1) {
          for (std::size_t i = 0; i < m; ++i) out_v[i] = h * mat[0] * v[i];
        } else {
          for (std::size_t i = 0; i < m; ++i) {
            double acc_i = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc_i += mat[i * m + j] * v[j];
            out_v[i] = h * acc_i;
          }
        }
        return out_v;
      },
      m, 0.0, a, 0.5 * tail_tol);
  out.value = q.value;
  out.evaluations = acc.evaluations;
  out.error = out.tail_bound + q.error_estimate +
              r.l1_norm() * std::sqrt(static_cast<double>(m)) * acc.max_error;
  return out;
}

ConvolutionResult l1_convolution(const Kernel& h, const FunctionHandle& f, const Point& t,
                                 double tail_tol) {
  if (t.size() != f.dimension() || t.size() != h.dimension()) {
    throw Error(ErrorCode::kShape, "kernel, data and point dimensions differ");
  }
  if (h.one_sided()) return infinite_convolution(h, f, t[0], tail_tol);
  return symmetric_convolution(h, f, t, tail_tol);
}

FunctionHandle convolved(const Kernel& k, const FunctionHandle& f, double tail_tol) {
  const GrowthBound growth = require_growth(f);
  const double l1 = k.l1_norm();
  FunctionTraits traits;
  traits.growth = GrowthBound{l1 * growth.constant + growth.log_rate * k.log_moment_tail(0.0),
                              l1 * growth.log_rate};
  if (f.traits().lipschitz) traits.lipschitz = l1 * *f.traits().lipschitz;
  return FunctionHandle(
      k.describe() + "*" + f.name(), Region::whole(f.dimension()), f.codomain_dim(),
      [k, f, tail_tol](std::span<const double> x) {
        const ConvolutionResult r = l1_convolution(k, f, Point(x.begin(), x.end()), tail_tol);
        return Evaluation{r.value, r.error};
      },
      traits);
}

// ------------------------------------------------------------- propagation

double propagation_tail(const Kernel& k, const GrowthBound& growth, const Relation& rho,
                        double reach, double margin) {
  const double base = growth.constant + growth.log_rate * std::log2(1.0 + reach);
  const double tail = k.tail(margin);
  return (1.0 + rho.linear_norm()) * (base * tail + growth.log_rate * k.log_moment_tail(margin)) +
         rho.offset_norm() * tail;
}

PropagationCheck propagation_check(const Kernel& k, const FunctionHandle& f, const Relation& rho,
                                   const Point& tau, const CompactWindow& w,
                                   const CompactWindow& enlarged,
                                   const PropagationOptions& options) {
  const MetricSpec& spec = options.spec;
  if (spec.phi.kind != Phi::Kind::kIdentity || spec.weight.kind != Weight::Kind::kConstOne ||
      (spec.norm.kind != Norm::Kind::kSup && spec.norm.kind != Norm::Kind::kWeightedSup)) {
    throw Error(ErrorCode::kConfiguration,
                "propagation checks need phi = identity, weight 1 and a sup norm");
  }
  double nu_factor = 1.0;
  if (spec.norm.kind == Norm::Kind::kWeightedSup) {
    if (!spec.norm.nu_sup) {
      throw Error(ErrorCode::kConfiguration,
                  "weighted sup norm with an unbounded weight cannot propagate");
    }
    nu_factor = *spec.norm.nu_sup;
  }
  if (w.dimension() != k.dimension() || enlarged.dimension() != k.dimension()) {
    throw Error(ErrorCode::kShape, "window and kernel dimensions differ");
  }
  if (!enlarged.contains(w)) {
    throw Error(ErrorCode::kConfiguration, "enlarged window must contain the window");
  }
  double margin = kInf;
  for (std::size_t i = 0; i < w.dimension(); ++i) {
    margin = std::min(margin, w.axis(i).lo - enlarged.axis(i).lo);
    if (!k.one_sided()) margin = std::min(margin, enlarged.axis(i).hi - w.axis(i).hi);
  }
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "enlarged window must extend past the window");
  }

  switch (rho.kind()) {
    case Relation::Kind::kIdentity:
    case Relation::Kind::kZero: break;
    case Relation::Kind::kScale:
      if (rho.scale_factor().imag() != 0.0 && k.matrix_dim() > 1 &&
          !is_scalar_identity(k.matrix(), k.matrix_dim(), nullptr)) {
        throw Error(ErrorCode::kConfiguration, "complex scale does not commute with the kernel");
      }
      break;
    case Relation::Kind::kShift: {
      const auto mass = k.mass();
      if (!mass || std::abs(*mass - 1.0) > 1e-12) {
        throw Error(ErrorCode::kConfiguration, "shift relations need a unit-mass kernel");
      }
      break;
    }
    case Relation::Kind::kLinear: {
      const std::size_t km = k.matrix_dim();
      if (km > 1) {
        const std::size_t m = rho.matrix_dim();
        if (m != km) throw Error(ErrorCode::kShape, "relation and kernel matrix sizes differ");
        const auto& a = rho.matrix();
        const auto& b = k.matrix();
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < m; ++j) {
            double ab = 0.0;
            double ba = 0.0;
            for (std::size_t l = 0; l < m; ++l) {
              ab += a[i * m + l] * b[l * m + j];
              ba += b[i * m + l] * a[l * m + j];
            }
            worst = std::max(worst, std::abs(ab - ba));
          }
        }
        if (worst > 1e-12 * (1.0 + norm2(a) * norm2(b))) {
          throw Error(ErrorCode::kConfiguration, "linear relation does not commute with the kernel");
        }
      }
      break;
    }
  }

  const GrowthBound growth = require_growth(f);
  const FunctionHandle conv = convolved(k, f, options.tail_tol);
  const DefectResult lhs = windowed_defect(conv, rho, tau, w, spec);
  const DefectResult data = windowed_defect(f, rho, tau, enlarged, MetricSpec::sup());

  PropagationCheck out;
  out.l1_norm = k.l1_norm();
  out.margin = margin;
  out.lhs = lhs.value;
  out.data_defect = data.value;
  out.tail_term =
      nu_factor * propagation_tail(k, growth, rho, w.max_radius() + norm2(tau), margin);
  if (f.traits().lipschitz) {
    const double grid_radius = make_grid(enlarged, f.domain()).covering_radius();
    out.grid_correction = nu_factor * out.l1_norm * (1.0 + rho.linear_norm()) *
                          *f.traits().lipschitz * grid_radius;
  } else {
    out.grid_limited = true;
  }
  out.rhs = nu_factor * out.l1_norm * data.value + out.tail_term + out.grid_correction;
  out.slack = lhs.certified_slack + nu_factor * out.l1_norm * data.certified_slack;
  return out;
}

}  // namespace aperlab
