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

#include "aperlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "aperlab/parallel.hpp"
#include "aperlab/quadrature.hpp"

namespace aperlab {
namespace {

constexpr double kPi = std::numbers::pi;

double scalar(const FunctionHandle& f, const Point& p, double* err) {
  const Evaluation e = f.evaluate(p);
  if (err) *err = std::max(*err, e.error);
  return e.value[0];
}

void require_scalar(const FunctionHandle& f, std::size_t n, const char* what) {
  if (f.dimension() != n || f.codomain_dim() != 1) {
    std::ostringstream os;
    os << what << " must map R^" << n << " to R";
    throw Error(ErrorCode::kShape, os.str());
  }
}

void require_gradient(const FunctionHandle& grad, std::size_t n) {
  if (grad.dimension() != n || grad.codomain_dim() != n) {
    throw Error(ErrorCode::kShape, "gradient must map R^n to R^n");
  }
}

struct WaveSum {
  double value = 0.0;
  double data_error = 0.0;
};

// Spherical mean form of the Kirchhoff formula with a given product rule.
WaveSum kirchhoff_sum(const FunctionHandle& g, const FunctionHandle& grad_g,
                      const FunctionHandle& h, double d, const Point& x, double t,
                      std::size_t polar, std::size_t azimuthal) {
  const quad::Rule& gl = quad::gauss_legendre(polar);
  const double r = d * t;
  const double dphi = 2.0 * kPi / static_cast<double>(azimuthal);
  struct Row {
    double sum;
    double err;
  };
  const auto rows = parallel_map(polar, [&](std::size_t i) {
    const double z = gl.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    std::vector<double> terms(azimuthal);
    double eg = 0.0;
    double egrad = 0.0;
    double eh = 0.0;
    for (std::size_t j = 0; j < azimuthal; ++j) {
      const double phi = dphi * static_cast<double>(j);
      const double om[3] = {s * std::cos(phi), s * std::sin(phi), z};
      const Point p = {x[0] + r * om[0], x[1] + r * om[1], x[2] + r * om[2]};
      const Evaluation grad = grad_g.evaluate(p);
      egrad = std::max(egrad, grad.error);
      const double dot = grad.value[0] * om[0] + grad.value[1] * om[1] + grad.value[2] * om[2];
      terms[j] = scalar(g, p, &eg) + r * dot + t * scalar(h, p, &eh);
    }
    return Row{gl.weights[i] * pairwise_sum(terms),
               eg + r * std::sqrt(3.0) * egrad + std::abs(t) * eh};
  });
  std::vector<double> sums(polar);
  WaveSum out;
  for (std::size_t i = 0; i < polar; ++i) {
    sums[i] = rows[i].sum;
    out.data_error = std::max(out.data_error, rows[i].err);
  }
  out.value = pairwise_sum(sums) * dphi / (4.0 * kPi);
  return out;
}

// Poisson formula on the disk: u = (1/2pi) int_{B1} F(sigma) / sqrt(1 - |sigma|^2).
WaveSum poisson_sum(const FunctionHandle& g, const FunctionHandle& grad_g,
                    const FunctionHandle& h, double d, const Point& x, double t,
                    std::size_t radial, std::size_t azimuthal) {
  // u = r^2 on [0, 1]; r dr / sqrt(1 - r^2) = du / (2 sqrt(1 - u)).
  const quad::Rule gj = quad::gauss_jacobi(radial, -0.5, 0.0);
  const double r0 = d * t;
  const double dphi = 2.0 * kPi / static_cast<double>(azimuthal);
  struct Row {
    double sum;
    double err;
  };
  const auto rows = parallel_map(radial, [&](std::size_t i) {
    const double rho = std::sqrt(0.5 * (1.0 + gj.nodes[i]));
    std::vector<double> terms(azimuthal);
    double eg = 0.0;
    double egrad = 0.0;
    double eh = 0.0;
    for (std::size_t j = 0; j < azimuthal; ++j) {
      const double phi = dphi * static_cast<double>(j);
      const double sg[2] = {rho * std::cos(phi), rho * std::sin(phi)};
      const Point p = {x[0] + r0 * sg[0], x[1] + r0 * sg[1]};
      const Evaluation grad = grad_g.evaluate(p);
      egrad = std::max(egrad, grad.error);
      const double dot = grad.value[0] * sg[0] + grad.value[1] * sg[1];
      terms[j] = scalar(g, p, &eg) + r0 * dot + t * scalar(h, p, &eh);
    }
    return Row{gj.weights[i] * pairwise_sum(terms),
               eg + r0 * std::sqrt(2.0) * egrad + std::abs(t) * eh};
  });
  std::vector<double> sums(radial);
  WaveSum out;
  for (std::size_t i = 0; i < radial; ++i) {
    sums[i] = rows[i].sum;
    out.data_error = std::max(out.data_error, rows[i].err);
  }
  out.value = pairwise_sum(sums) * std::numbers::sqrt2 / 4.0 / static_cast<double>(azimuthal);
  return out;
}

Evaluation kirchhoff_unchecked(const FunctionHandle& g, const FunctionHandle& grad_g,
                               const FunctionHandle& h, double d, const Point& x, double t,
                               const SphereRule& rule) {
  const WaveSum full = kirchhoff_sum(g, grad_g, h, d, x, t, rule.polar, rule.azimuthal);
  const WaveSum half = kirchhoff_sum(g, grad_g, h, d, x, t, std::max<std::size_t>(rule.polar / 2, 2),
                                     std::max<std::size_t>(rule.azimuthal / 2, 4));
  return {{full.value}, std::abs(full.value - half.value) + full.data_error};
}

Evaluation poisson_unchecked(const FunctionHandle& g, const FunctionHandle& grad_g,
                             const FunctionHandle& h, double d, const Point& x, double t,
                             const DiskRule& rule) {
  const WaveSum full = poisson_sum(g, grad_g, h, d, x, t, rule.radial, rule.azimuthal);
  const WaveSum half = poisson_sum(g, grad_g, h, d, x, t, std::max<std::size_t>(rule.radial / 2, 2),
                                   std::max<std::size_t>(rule.azimuthal / 2, 4));
  return {{full.value}, std::abs(full.value - half.value) + full.data_error};
}

void check_rules(std::size_t a, std::size_t b) {
  if (a < 2 || b < 4) throw Error(ErrorCode::kConfiguration, "quadrature rule is too small");
}

void check_wave_inputs(double d, double t, const Point& x, std::size_t n) {
  if (!(d > 0.0)) throw Error(ErrorCode::kDomain, "wave speed must be positive");
  if (!(t > 0.0)) throw Error(ErrorCode::kDomain, "time must be positive");
  if (x.size() != n) throw Error(ErrorCode::kShape, "point dimension mismatch");
}

const FunctionHandle& need(const std::optional<FunctionHandle>& f, const char* what) {
  if (!f) throw Error(ErrorCode::kConfiguration, std::string("missing ") + what);
  return *f;
}

// The relation applied to the remaining data terms: rho without its offset.
Relation linear_part(const Relation& rho) {
  return rho.kind() == Relation::Kind::kShift ? Relation::identity() : rho;
}

// Scalar relation on real data, also applied componentwise to gradients.
Relation real_scalar_relation(const Relation& rho) {
  switch (rho.kind()) {
    case Relation::Kind::kIdentity:
    case Relation::Kind::kShift:
    case Relation::Kind::kZero: return rho;
    case Relation::Kind::kScale:
      if (rho.scale_factor().imag() != 0.0) break;
      return rho;
    case Relation::Kind::kLinear:
      if (rho.matrix_dim() != 1) break;
      return Relation::scale(rho.matrix()[0]);
  }
  throw Error(ErrorCode::kConfiguration,
              "wave formulas take real scalar data; relation " + rho.describe() + " does not apply");
}

}  // namespace

ConvolutionResult heat_apply(const FunctionHandle& f, double t, const Point& x, double tol) {
  if (!(t > 0.0)) throw Error(ErrorCode::kDomain, "heat semigroup needs t > 0");
  return l1_convolution(Kernel::gaussian(t, f.dimension()), f, x, tol);
}

Evaluation dalembert(const FunctionHandle& f, const FunctionHandle& g, double a, double x,
                     double t, double quad_tol) {
  if (!(a > 0.0)) throw Error(ErrorCode::kDomain, "wave speed must be positive");
  require_scalar(f, 1, "f");
  require_scalar(g, 1, "g");
  double ef = 0.0;
  const double avg = 0.5 * (scalar(f, {x - a * t}, &ef) + scalar(f, {x + a * t}, &ef));
  double eg = 0.0;
  double qerr = 0.0;
  const double integral = quad::integrate([&](double s) { return scalar(g, {s}, &eg); }, x - a * t,
                                          x + a * t, quad_tol, &qerr);
  return {{avg + integral / (2.0 * a)}, ef + (qerr + 2.0 * a * std::abs(t) * eg) / (2.0 * a)};
}

void check_gradient(const FunctionHandle& g, const FunctionHandle& grad_g, const Point& center,
                    double radius) {
  const std::size_t n = center.size();
  require_gradient(grad_g, n);
  constexpr double kStep = 1e-5;
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = center[i] + radius * unit(rng);
    const Value grad = grad_g.evaluate(p).value;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Point lo = p;
      Point hi = p;
      lo[i] -= kStep;
      hi[i] += kStep;
      const double fd = (g.evaluate(hi).value[0] - g.evaluate(lo).value[0]) / (2.0 * kStep);
      worst = std::max(worst, std::abs(fd - grad[i]));
    }
    if (worst > 1e-4 * std::max(1.0, norm2(grad))) {
      std::ostringstream os;
      os.precision(6);
      os << "gradient of " << g.name() << " disagrees with finite differences by " << worst
         << " at (";
      for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : "") << p[i];
      os << ")";
      throw Error(ErrorCode::kGradientConsistency, os.str());
    }
  }
}

Evaluation kirchhoff3d(const FunctionHandle& g, const FunctionHandle& grad_g,
                       const FunctionHandle& h, double d, const Point& x, double t,
                       const SphereRule& rule) {
  check_wave_inputs(d, t, x, 3);
  check_rules(rule.polar, rule.azimuthal);
  require_scalar(g, 3, "g");
  require_scalar(h, 3, "h");
  check_gradient(g, grad_g, x, d * t);
  return kirchhoff_unchecked(g, grad_g, h, d, x, t, rule);
}

Evaluation poisson2d(const FunctionHandle& g, const FunctionHandle& grad_g,
                     const FunctionHandle& h, double d, const Point& x, double t,
                     const DiskRule& rule) {
  check_wave_inputs(d, t, x, 2);
  check_rules(rule.radial, rule.azimuthal);
  require_scalar(g, 2, "g");
  require_scalar(h, 2, "h");
  check_gradient(g, grad_g, x, d * t);
  return poisson_unchecked(g, grad_g, h, d, x, t, rule);
}

ConvolutionResult biharmonic_halfspace(const FunctionHandle& g0, const FunctionHandle& g1,
                                       const Point& x, double y, double tol) {
  if (!(y > 0.0)) throw Error(ErrorCode::kDomain, "biharmonic problem needs y > 0");
  if (g0.dimension() != g1.dimension() || g0.codomain_dim() != g1.codomain_dim()) {
    throw Error(ErrorCode::kShape, "g0 and g1 must have the same shape");
  }
  const std::size_t n = x.size();
  const ConvolutionResult a =
      l1_convolution(Kernel::poisson_biharmonic(BiharmonicPart::kValue, y, n), g0, x, 0.5 * tol);
  const ConvolutionResult b =
      l1_convolution(Kernel::poisson_biharmonic(BiharmonicPart::kNormal, y, n), g1, x, 0.5 * tol);
  ConvolutionResult out = a;
  for (std::size_t i = 0; i < out.value.size(); ++i) out.value[i] += b.value[i];
  out.error = a.error + b.error;
  out.truncation_radius = std::max(a.truncation_radius, b.truncation_radius);
  out.tail_bound = a.tail_bound + b.tail_bound;
  out.evaluations = a.evaluations + b.evaluations;
  return out;
}

double residual_check(const SpaceTimeFunction& u, const PdeKind& kind, const Point& x, double t,
                      double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::kConfiguration, "step must be positive");
  const bool heat = kind.kind == PdeKind::Kind::kHeat;
  if (heat ? !(t - h > 0.0) : !(t - h >= 0.0)) {
    throw Error(ErrorCode::kDomain, "time stencil leaves the domain");
  }
  const double u0 = u(x, t);
  double lap = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Point lo = x;
    Point hi = x;
    lo[i] -= h;
    hi[i] += h;
    lap += (u(hi, t) - 2.0 * u0 + u(lo, t)) / (h * h);
  }
  if (heat) return (u(x, t + h) - u(x, t - h)) / (2.0 * h) - lap;
  const double utt = (u(x, t + h) - 2.0 * u0 + u(x, t - h)) / (h * h);
  return utt - kind.speed * kind.speed * lap;
}

FunctionHandle PdeProblem::solution() const {
  const FunctionHandle& f0 = need(first, "first data term");
  const double t0 = time;
  const double c = speed;
  switch (formula) {
    case Formula::kHeat: {
      if (!(t0 > 0.0)) throw Error(ErrorCode::kDomain, "heat semigroup needs t > 0");
      return convolved(Kernel::gaussian(t0, f0.dimension()), f0, tol).renamed("heat(" + f0.name() + ")");
    }
    case Formula::kDalembert: {
      const FunctionHandle& g = need(second, "g for the d'Alembert formula");
      if (!(c > 0.0)) throw Error(ErrorCode::kDomain, "wave speed must be positive");
      require_scalar(f0, 1, "f");
      require_scalar(g, 1, "g");
      const double qtol = tol;
      return FunctionHandle("dalembert(" + f0.name() + "," + g.name() + ")", Region::whole(1), 1,
                            [f0, g, c, t0, qtol](std::span<const double> x) {
                              return dalembert(f0, g, c, x[0], t0, qtol);
                            });
    }
    case Formula::kKirchhoff3d:
    case Formula::kPoisson2d: {
      const bool sphere = formula == Formula::kKirchhoff3d;
      const std::size_t n = sphere ? 3 : 2;
      const FunctionHandle& grad = need(gradient, "gradient data");
      const FunctionHandle& h = need(second, "h for the wave formula");
      check_wave_inputs(c, t0, Point(n, 0.0), n);
      require_scalar(f0, n, "g");
      require_scalar(h, n, "h");
      check_gradient(f0, grad, Point(n, 0.0), std::max(1.0, c * t0));
      if (sphere) {
        check_rules(this->sphere.polar, this->sphere.azimuthal);
        const SphereRule rule = this->sphere;
        return FunctionHandle("kirchhoff(" + f0.name() + ")", Region::whole(3), 1,
                              [f0, grad, h, c, t0, rule](std::span<const double> x) {
                                return kirchhoff_unchecked(f0, grad, h, c, Point(x.begin(), x.end()),
                                                           t0, rule);
                              });
      }
      check_rules(disk.radial, disk.azimuthal);
      const DiskRule rule = disk;
      return FunctionHandle("poisson(" + f0.name() + ")", Region::whole(2), 1,
                            [f0, grad, h, c, t0, rule](std::span<const double> x) {
                              return poisson_unchecked(f0, grad, h, c, Point(x.begin(), x.end()),
                                                       t0, rule);
                            });
    }
    case Formula::kBiharmonic: {
      const FunctionHandle& g1 = need(second, "g1 for the biharmonic problem");
      if (!(t0 > 0.0)) throw Error(ErrorCode::kDomain, "biharmonic problem needs y > 0");
      const double ctol = tol;
      return FunctionHandle("biharmonic(" + f0.name() + "," + g1.name() + ")",
                            Region::whole(f0.dimension()), f0.codomain_dim(),
                            [f0, g1, t0, ctol](std::span<const double> x) {
                              const ConvolutionResult r = biharmonic_halfspace(
                                  f0, g1, Point(x.begin(), x.end()), t0, ctol);
                              return Evaluation{r.value, r.error};
                            });
    }
  }
  throw Error(ErrorCode::kConfiguration, "unknown formula");
}

PdePropagation pde_propagation_check(const PdeProblem& problem, const Relation& rho,
                                     const Point& tau, const CompactWindow& w,
                                     const CompactWindow& enlarged, const MetricSpec& spec) {
  const FunctionHandle& f0 = need(problem.first, "first data term");
  if (problem.formula == Formula::kHeat) {
    if (!(problem.time > 0.0)) throw Error(ErrorCode::kDomain, "heat semigroup needs t > 0");
    const PropagationCheck c = propagation_check(Kernel::gaussian(problem.time, f0.dimension()), f0,
                                                 rho, tau, w, enlarged, {spec, problem.tol});
    PdePropagation out;
    out.lhs = c.lhs;
    out.rhs = c.rhs;
    out.slack = c.slack;
    out.data_defects = {c.data_defect};
    out.mass_factors = {c.l1_norm};
    out.tail_term = c.tail_term;
    out.grid_correction = c.grid_correction;
    out.grid_limited = c.grid_limited;
    return out;
  }

  if (spec.phi.kind != Phi::Kind::kIdentity || spec.weight.kind != Weight::Kind::kConstOne ||
      (spec.norm.kind != Norm::Kind::kSup && spec.norm.kind != Norm::Kind::kWeightedSup)) {
    throw Error(ErrorCode::kConfiguration,
                "propagation checks need phi = identity, weight 1 and a sup norm");
  }
  double nu = 1.0;
  if (spec.norm.kind == Norm::Kind::kWeightedSup) {
    if (!spec.norm.nu_sup) {
      throw Error(ErrorCode::kConfiguration,
                  "weighted sup norm with an unbounded weight cannot propagate");
    }
    nu = *spec.norm.nu_sup;
  }
  if (w.dimension() != enlarged.dimension()) {
    throw Error(ErrorCode::kShape, "window dimensions differ");
  }
  if (!enlarged.contains(w)) {
    throw Error(ErrorCode::kConfiguration, "enlarged window must contain the window");
  }

  struct Term {
    FunctionHandle data;
    Relation rel;
    double mass;
  };
  std::vector<Term> terms;
  double reach = 0.0;
  const double t0 = problem.time;
  switch (problem.formula) {
    case Formula::kDalembert: {
      const Relation r = real_scalar_relation(rho);
      terms.push_back({f0, r, 1.0});
      terms.push_back({need(problem.second, "g for the d'Alembert formula"), linear_part(r),
                       std::abs(t0)});
      reach = problem.speed * std::abs(t0);
      break;
    }
    case Formula::kKirchhoff3d:
    case Formula::kPoisson2d: {
      const Relation r = real_scalar_relation(rho);
      const double dt = problem.speed * t0;
      terms.push_back({f0, r, 1.0});
      // Mean of |omega . v| over the sphere, and the disk analogue, is |v| / 2.
      terms.push_back({need(problem.gradient, "gradient data"), linear_part(r), 0.5 * dt});
      terms.push_back({need(problem.second, "h for the wave formula"), linear_part(r), t0});
      reach = dt;
      break;
    }
    case Formula::kBiharmonic: {
      terms.push_back({f0, rho, 1.0});
      terms.push_back({need(problem.second, "g1 for the biharmonic problem"), linear_part(rho), t0});
      break;
    }
    case Formula::kHeat: break;
  }

  double margin = kInf;
  for (std::size_t i = 0; i < w.dimension(); ++i) {
    margin = std::min({margin, w.axis(i).lo - enlarged.axis(i).lo,
                       enlarged.axis(i).hi - w.axis(i).hi});
  }
  PdePropagation out;
  if (problem.formula == Formula::kBiharmonic) {
    if (!(margin > 0.0)) {
      throw Error(ErrorCode::kConfiguration, "enlarged window must extend past the window");
    }
    const Kernel k0 = Kernel::poisson_biharmonic(BiharmonicPart::kValue, t0, w.dimension());
    const Kernel k1 = Kernel::poisson_biharmonic(BiharmonicPart::kNormal, t0, w.dimension());
    const double r = w.max_radius() + norm2(tau);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& growth = terms[j].data.traits().growth;
      if (!growth) {
        throw Error(ErrorCode::kPrecondition,
                    terms[j].data.name() + " has no growth envelope; the kernel tail is unbounded");
      }
      out.tail_term += nu * propagation_tail(j == 0 ? k0 : k1, *growth, terms[j].rel, r, margin);
    }
  } else if (margin < reach * (1.0 - 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "enlarged window must reach " << reach << " past the window";
    throw Error(ErrorCode::kConfiguration, os.str());
  }

  const FunctionHandle u = problem.solution();
  const DefectResult lhs = windowed_defect(u, rho, tau, w, spec);
  out.lhs = lhs.value;
  out.slack = lhs.certified_slack;
  double data_sum = 0.0;
  for (const Term& term : terms) {
    const DefectResult d = windowed_defect(term.data, term.rel, tau, enlarged, MetricSpec::sup());
    out.data_defects.push_back(d.value);
    out.mass_factors.push_back(term.mass);
    data_sum += term.mass * d.value;
    out.slack += nu * term.mass * d.certified_slack;
    const auto& lip = term.data.traits().lipschitz;
    if (lip) {
      const double cover = make_grid(enlarged, term.data.domain()).covering_radius();
      out.grid_correction += nu * term.mass * (1.0 + term.rel.linear_norm()) * *lip * cover;
    } else {
      out.grid_limited = true;
    }
  }
  out.rhs = nu * data_sum + out.tail_term + out.grid_correction;
  return out;
}

}  // namespace aperlab
