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

#include "aperlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "aperlab/parallel.hpp"

namespace aperlab::quad {
namespace {

Rule compute_gauss_legendre(std::size_t n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

constexpr std::size_t kPanelOrder = 15;

Value panel(const VectorIntegrand& f, std::size_t dim, double a, double b) {
  const Rule& rule = gauss_legendre(kPanelOrder);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Value acc(dim, 0.0);
  for (std::size_t i = 0; i < kPanelOrder; ++i) {
    const Value v = f(mid + half * rule.nodes[i]);
    for (std::size_t d = 0; d < dim; ++d) acc[d] += rule.weights[i] * v[d];
  }
  for (double& x : acc) x *= half;
  return acc;
}

double max_abs_diff(const Value& a, const Value& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(compute_gauss_legendre(n));
  return *slot;
}

Rule gauss_jacobi(std::size_t n, double alpha, double beta) {
  if (n == 0 || alpha <= -1.0 || beta <= -1.0) {
    throw Error(ErrorCode::kConfiguration, "Gauss-Jacobi needs n >= 1 and alpha, beta > -1");
  }
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(n > 1 ? n - 1 : 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    if (k == 0) {
      diag(0) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (k + 1 < n) {
      const double j = kk + 1.0;
      const double t = 2.0 * j + ab;
      double b2;
      if (j == 1.0) {
        b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        b2 = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0));
      }
      off(k) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    const double v0 = solver.eigenvectors()(0, static_cast<Eigen::Index>(i));
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

Rule mapped(const Rule& rule, double a, double b) {
  Rule out = rule;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.nodes[i] = mid + half * rule.nodes[i];
    out.weights[i] = half * rule.weights[i];
  }
  return out;
}

Result integrate(const VectorIntegrand& f, std::size_t dim, double a, double b, double tol,
                 std::size_t max_evaluations) {
  Result result;
  result.value.assign(dim, 0.0);
  if (a == b) return result;
  struct Segment {
    double a, b;
    Value estimate;
  };
  const double total = std::abs(b - a);
  std::vector<Segment> stack;
  stack.push_back({a, b, panel(f, dim, a, b)});
  result.evaluations = kPanelOrder;
  // Accepted pieces are summed in left-to-right order at the end.
  std::vector<std::pair<double, Value>> accepted;
  while (!stack.empty()) {
    Segment seg = std::move(stack.back());
    stack.pop_back();
    const double mid = 0.5 * (seg.a + seg.b);
    Value left = panel(f, dim, seg.a, mid);
    Value right = panel(f, dim, mid, seg.b);
    result.evaluations += 2 * kPanelOrder;
    Value both(dim);
    for (std::size_t d = 0; d < dim; ++d) both[d] = left[d] + right[d];
    const double diff = max_abs_diff(both, seg.estimate);
    const double local_tol = tol * std::abs(seg.b - seg.a) / total;
    double scale = 0.0;
    for (double v : both) scale = std::max(scale, std::abs(v));
    if (diff <= local_tol || diff <= 4e-16 * scale || std::abs(seg.b - seg.a) < 1e-12 * total) {
      accepted.emplace_back(seg.a, std::move(both));
      result.error_estimate += diff;
      continue;
    }
    if (result.evaluations > max_evaluations) {
      throw Error(ErrorCode::kBudget, "adaptive quadrature exceeded its evaluation budget");
    }
    stack.push_back({mid, seg.b, std::move(right)});
    stack.push_back({seg.a, mid, std::move(left)});
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<double> parts(accepted.size());
    for (std::size_t i = 0; i < accepted.size(); ++i) parts[i] = accepted[i].second[d];
    result.value[d] = pairwise_sum(parts);
  }
  return result;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* error_estimate) {
  Result r = integrate([&f](double x) { return Value{f(x)}; }, 1, a, b, tol);
  if (error_estimate) *error_estimate = r.error_estimate;
  return r.value[0];
}

namespace {

Value box_estimate(const BoxIntegrand& f, std::size_t dim, std::span<const Interval> box,
                   std::size_t panels, std::size_t order) {
  const std::size_t n = box.size();
  std::vector<Rule> rules(n);
  for (std::size_t ax = 0; ax < n; ++ax) {
    const double lo = box[ax].lo;
    const double width = (box[ax].hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const Rule piece = mapped(gauss_legendre(order), lo + p * width, lo + (p + 1) * width);
      rules[ax].nodes.insert(rules[ax].nodes.end(), piece.nodes.begin(), piece.nodes.end());
      rules[ax].weights.insert(rules[ax].weights.end(), piece.weights.begin(),
                               piece.weights.end());
    }
  }
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();
  const auto values = parallel_map(total, [&](std::size_t idx) {
    Point p(n);
    double w = 1.0;
    std::size_t rest = idx;
    for (std::size_t ax = n; ax-- > 0;) {
      const std::size_t len = rules[ax].nodes.size();
      p[ax] = rules[ax].nodes[rest % len];
      w *= rules[ax].weights[rest % len];
      rest /= len;
    }
    Value v = f(p);
    for (double& x : v) x *= w;
    return v;
  });
  Value out(dim, 0.0);
  std::vector<double> parts(total);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < total; ++i) parts[i] = values[i][d];
    out[d] = pairwise_sum(parts);
  }
  return out;
}

}  // namespace

Result integrate_box(const BoxIntegrand& f, std::size_t dim, std::span<const Interval> box,
                     double tol, std::size_t max_evaluations) {
  constexpr std::size_t kOrder = 10;
  Result result;
  std::size_t panels = 2;
  Value previous = box_estimate(f, dim, box, panels, kOrder);
  auto cost = [&](std::size_t p) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < box.size(); ++i) c *= p * kOrder;
    return c;
  };
  result.evaluations = cost(panels);
  while (true) {
    panels *= 2;
    if (result.evaluations + cost(panels) > max_evaluations) {
      throw Error(ErrorCode::kBudget, "box quadrature exceeded its evaluation budget");
    }
    Value next = box_estimate(f, dim, box, panels, kOrder);
    result.evaluations += cost(panels);
    const double diff = max_abs_diff(next, previous);
    double scale = 0.0;
    for (double v : next) scale = std::max(scale, std::abs(v));
    if (diff <= tol || diff <= 1e-15 * scale) {
      result.value = std::move(next);
      result.error_estimate = diff;
      return result;
    }
    previous = std::move(next);
  }
}

}  // namespace aperlab::quad
