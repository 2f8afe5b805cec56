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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aperlab/pde.hpp"
#include "aperlab/zoo.hpp"
#include "oracles.hpp"

using namespace aperlab;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an aperlab::Error");
  return ErrorCode::kDomain;
}

FunctionHandle cosine() { return zoo::real_trig_poly({{1.0}}, {1.0}); }
FunctionHandle sine() { return zoo::real_trig_poly({{1.0}}, {{0.0, -1.0}}); }

FunctionHandle vector_constant(std::vector<double> v, std::size_t n) {
  FunctionTraits tr;
  tr.lipschitz = 0.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  tr.growth = GrowthBound{std::sqrt(norm), 0.0};
  const std::size_t m = v.size();
  return FunctionHandle("vector-constant", Region::whole(n), m,
                        [v](std::span<const double>) { return Evaluation{v, 0.0}; }, tr);
}

// g(x) = prod cos(x_i) and its gradient, in n dimensions.
FunctionHandle cos_product(std::size_t n) {
  return zoo::tensor_product(std::vector<FunctionHandle>(n, cosine()));
}

FunctionHandle cos_product_gradient(std::size_t n) {
  FunctionTraits tr;
  tr.growth = GrowthBound{std::sqrt(static_cast<double>(n)), 0.0};
  tr.lipschitz = static_cast<double>(n);
  return FunctionHandle("cos-product-gradient", Region::whole(n), n,
                        [n](std::span<const double> x) {
                          Value g(n, 1.0);
                          for (std::size_t i = 0; i < n; ++i) {
                            for (std::size_t j = 0; j < n; ++j) {
                              g[i] *= (i == j) ? -std::sin(x[j]) : std::cos(x[j]);
                            }
                          }
                          return Evaluation{g, 0.0};
                        },
                        tr);
}

}  // namespace

TEST_CASE("heat_apply examples") {
  const auto c = heat_apply(zoo::constant(3.5), 0.8, {1.0}, 1e-10);
  CHECK(std::abs(c.value[0] - 3.5) <= c.error + 1e-12);
  for (int i = 0; i < 50; ++i) {
    const double x = -5.0 + 0.2 * i;
    const auto v = heat_apply(cosine(), 1.0, {x}, 1e-10);
    CHECK(std::abs(v.value[0] - oracle::heat_cos(1.0, x)) <= 1e-6);
  }
  CHECK(code_of([] { heat_apply(zoo::affine({1.0}), 1.0, {0.0}, 1e-8); }) == ErrorCode::kPrecondition);
  CHECK(code_of([] { heat_apply(cosine(), 0.0, {0.0}, 1e-8); }) == ErrorCode::kDomain);
  CHECK(code_of([] { heat_apply(cosine(), -1.0, {0.0}, 1e-8); }) == ErrorCode::kDomain);
}

TEST_CASE("heat_apply composes as a semigroup on cos") {
  PdeProblem inner;
  inner.formula = Formula::kHeat;
  inner.first = cosine();
  inner.time = 0.3;
  inner.tol = 1e-10;
  const auto u = inner.solution();
  for (double x : {-1.0, 0.0, 2.0}) {
    const auto v = heat_apply(u, 0.5, {x}, 1e-8);
    CHECK(std::abs(v.value[0] - oracle::heat_cos(0.8, x)) <= 1e-5);
  }
}

TEST_CASE("dalembert examples") {
  const auto lin = dalembert(zoo::affine({1.0}), zoo::constant(0.0), 1.5, 0.7, 2.0, 1e-12);
  CHECK(lin.value[0] == doctest::Approx(0.7).epsilon(1e-14));
  const auto flat = dalembert(zoo::constant(0.0), zoo::constant(2.0), 1.5, 0.7, 2.0, 1e-12);
  CHECK(flat.value[0] == doctest::Approx(4.0).epsilon(1e-12));
  for (double x : {-1.0, 0.3, 2.0}) {
    for (double t : {0.0, 0.5, 3.0}) {
      const auto u = dalembert(cosine(), zoo::constant(0.0), 1.0, x, t, 1e-12);
      CHECK(std::abs(u.value[0] - std::cos(x) * std::cos(t)) <= 1e-12);
    }
  }
  // g = cos, a = 2: (1/4)(sin(x + 2t) - sin(x - 2t)) = cos(x) sin(2t) / 2.
  const auto s = dalembert(zoo::constant(0.0), cosine(), 2.0, 0.4, 0.9, 1e-12);
  CHECK(std::abs(s.value[0] - 0.5 * std::cos(0.4) * std::sin(1.8)) <= 1e-11);
}

TEST_CASE("dalembert residual is second order") {
  const double a = 2.0;
  const auto f = cosine();
  const auto g = sine();
  const SpaceTimeFunction u = [&](const Point& x, double t) {
    return dalembert(f, g, a, x[0], t, 1e-13).value[0];
  };
  std::vector<double> r;
  for (double h : {1e-1, 5e-2, 2.5e-2}) r.push_back(residual_check(u, PdeKind::wave(a), {0.3}, 1.0, h));
  for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(std::log2(r[i] / r[i + 1]) >= 1.9);
}

TEST_CASE("residual_check examples") {
  const SpaceTimeFunction standing = [](const Point& x, double t) { return std::cos(x[0]) * std::cos(t); };
  CHECK(residual_check(standing, PdeKind::wave(1.0), {0.4}, 1.0, 1e-2) <= 1e-4);

  const SpaceTimeFunction flat = [](const Point&, double) { return 2.0; };
  CHECK(residual_check(flat, PdeKind::wave(3.0), {0.0, 1.0}, 1.0, 1e-2) <= 1e-12);
  CHECK(residual_check(flat, PdeKind::heat(), {0.0}, 1.0, 1e-2) <= 1e-12);

  const SpaceTimeFunction heat = [](const Point& x, double t) {
    return heat_apply(cosine(), t, x, 1e-12).value[0];
  };
  CHECK(residual_check(heat, PdeKind::heat(), {0.5}, 1.0, 1e-2) <= 1e-4);

  CHECK(code_of([&] { residual_check(standing, PdeKind::wave(1.0), {0.0}, 0.0, 0.1); }) ==
        ErrorCode::kDomain);
  CHECK(code_of([&] { residual_check(heat, PdeKind::heat(), {0.0}, 0.05, 0.1); }) ==
        ErrorCode::kDomain);
}

TEST_CASE("kirchhoff3d calibrations") {
  const Point x{0.3, -0.2, 1.1};
  const auto zero3 = vector_constant({0.0, 0.0, 0.0}, 3);
  const auto c = kirchhoff3d(zoo::constant(2.0, 3), zero3, zoo::constant(0.0, 3), 1.0, x, 0.7);
  CHECK(std::abs(c.value[0] - 2.0) <= 1e-6);
  const auto h = kirchhoff3d(zoo::constant(0.0, 3), zero3, zoo::constant(3.0, 3), 1.0, x, 0.7);
  CHECK(std::abs(h.value[0] - 2.1) <= 1e-6);
  const std::vector<double> v{1.0, -2.0, 0.5};
  const auto l = kirchhoff3d(zoo::affine(v), vector_constant(v, 3), zoo::constant(0.0, 3), 1.3, x, 0.9);
  CHECK(std::abs(l.value[0] - (0.3 + 0.4 + 0.55)) <= 1e-6);
}

TEST_CASE("kirchhoff3d on a standing wave") {
  // g = prod cos(x_i) evolves as cos(sqrt 3 d t) g(x) when h = 0 and grad g enters with weight dt.
  const auto g = cos_product(3);
  const auto gg = cos_product_gradient(3);
  const Point x{0.2, 0.5, -0.4};
  const double t = 0.6;
  const auto u = kirchhoff3d(g, gg, zoo::constant(0.0, 3), 1.0, x, t, {48, 96});
  // Mean of g over the sphere of radius r: g(x) sin(sqrt3 r) / (sqrt3 r).
  const double r = t;
  const double s3 = std::sqrt(3.0);
  const double gx = std::cos(0.2) * std::cos(0.5) * std::cos(-0.4);
  const double mean = gx * std::sin(s3 * r) / (s3 * r);
  const double dmean = gx * (std::cos(s3 * r) / r - std::sin(s3 * r) / (s3 * r * r));
  CHECK(std::abs(u.value[0] - (mean + r * dmean)) <= 1e-8);
  CHECK(std::abs(u.value[0] - gx * std::cos(s3 * t)) <= 1e-8);
}

TEST_CASE("poisson2d calibrations") {
  const Point x{0.3, -0.2};
  const auto zero2 = vector_constant({0.0, 0.0}, 2);
  const auto c = poisson2d(zoo::constant(2.0, 2), zero2, zoo::constant(0.0, 2), 1.0, x, 0.7);
  CHECK(std::abs(c.value[0] - 2.0) <= 1e-6);
  const auto h = poisson2d(zoo::constant(0.0, 2), zero2, zoo::constant(3.0, 2), 1.0, x, 0.7);
  CHECK(std::abs(h.value[0] - 2.1) <= 1e-6);
  const std::vector<double> v{1.0, -2.0};
  const auto l = poisson2d(zoo::affine(v), vector_constant(v, 2), zoo::constant(0.0, 2), 1.3, x, 0.9);
  CHECK(std::abs(l.value[0] - 0.7) <= 1e-6);
}

TEST_CASE("poisson2d on a standing wave") {
  const auto g = cos_product(2);
  const auto gg = cos_product_gradient(2);
  const Point x{0.2, 0.5};
  const double t = 0.6;
  const auto u = poisson2d(g, gg, zoo::constant(0.0, 2), 1.0, x, t, {48, 96});
  const double gx = std::cos(0.2) * std::cos(0.5);
  CHECK(std::abs(u.value[0] - gx * std::cos(std::sqrt(2.0) * t)) <= 1e-8);
}

TEST_CASE("inconsistent gradients are rejected") {
  const auto g = cos_product(3);
  const auto wrong = vector_constant({0.0, 0.0, 0.0}, 3);
  CHECK(code_of([&] {
          kirchhoff3d(g, wrong, zoo::constant(0.0, 3), 1.0, {0.0, 0.0, 0.0}, 1.0);
        }) == ErrorCode::kGradientConsistency);
  CHECK(code_of([&] {
          poisson2d(cos_product(2), vector_constant({1.0, 0.0}, 2), zoo::constant(0.0, 2), 1.0,
                    {0.0, 0.0}, 1.0);
        }) == ErrorCode::kGradientConsistency);
  CHECK_NOTHROW(check_gradient(g, cos_product_gradient(3), {0.0, 0.0, 0.0}, 2.0));
}

TEST_CASE("biharmonic_halfspace examples") {
  for (double y : {0.3, 1.0, 2.5}) {
    const auto one = biharmonic_halfspace(zoo::constant(1.0), zoo::constant(0.0), {0.4}, y, 1e-8);
    CHECK(std::abs(one.value[0] - 1.0) <= 1e-6);
    const auto lift = biharmonic_halfspace(zoo::constant(0.0), zoo::constant(1.0), {0.4}, y, 1e-8);
    CHECK(std::abs(lift.value[0] - y) <= 1e-6 * std::max(1.0, y));
  }
  const auto odd = biharmonic_halfspace(sine(), zoo::constant(0.0), {0.0}, 0.8, 1e-8);
  CHECK(std::abs(odd.value[0]) <= odd.error + 1e-14);
  CHECK(code_of([] { biharmonic_halfspace(zoo::constant(1.0), zoo::constant(0.0), {0.0}, 0.0, 1e-6); }) ==
        ErrorCode::kDomain);
}

TEST_CASE("pde propagation for d'Alembert with a periodic datum") {
  PdeProblem p;
  p.formula = Formula::kDalembert;
  p.first = cosine();
  p.second = zoo::constant(0.0);
  p.time = 1.0;
  const auto r = pde_propagation_check(p, Relation::identity(), {2.0 * pi},
                                       CompactWindow::interval(0.0, 5.0, 0.05),
                                       CompactWindow::interval(-1.0, 6.0, 0.05));
  CHECK(r.holds());
  CHECK(r.lhs <= 1e-12);
}

TEST_CASE("pde propagation for heat with haraux_souplet") {
  PdeProblem p;
  p.formula = Formula::kHeat;
  p.first = zoo::haraux_souplet();
  p.time = 1.0;
  p.tol = 1e-8;
  const auto r = pde_propagation_check(p, Relation::identity(), {std::ldexp(pi, 8)},
                                       CompactWindow::interval(0.0, 10.0, 0.1),
                                       CompactWindow::interval(-15.0, 25.0, 0.05));
  CHECK(r.holds());
  REQUIRE(r.mass_factors.size() == 1);
  CHECK(r.mass_factors[0] == doctest::Approx(1.0));
  CHECK(r.lhs <= r.data_defects[0] + r.tail_term + r.grid_correction + r.slack);
}

TEST_CASE("pde propagation for kirchhoff3d with a periodic datum") {
  PdeProblem p;
  p.formula = Formula::kKirchhoff3d;
  p.first = cos_product(3);
  p.gradient = cos_product_gradient(3);
  p.second = zoo::constant(0.0, 3);
  p.time = 0.5;
  const Point tau{2.0 * pi, 2.0 * pi, -4.0 * pi};
  const auto r = pde_propagation_check(p, Relation::identity(), tau,
                                       CompactWindow::cube(3, 0.0, 1.0, 0.5),
                                       CompactWindow::cube(3, -1.0, 2.0, 0.25));
  CHECK(r.holds());
  CHECK(r.lhs <= r.slack + 1e-9);
}

TEST_CASE("pde propagation for poisson2d and biharmonic") {
  PdeProblem p;
  p.formula = Formula::kPoisson2d;
  p.first = cos_product(2);
  p.gradient = cos_product_gradient(2);
  p.second = zoo::constant(1.0, 2);
  p.time = 0.5;
  const auto r = pde_propagation_check(p, Relation::identity(), {2.0 * pi, 2.0 * pi},
                                       CompactWindow::cube(2, 0.0, 1.0, 0.25),
                                       CompactWindow::cube(2, -1.0, 2.0, 0.25));
  CHECK(r.holds());

  PdeProblem b;
  b.formula = Formula::kBiharmonic;
  b.first = zoo::haraux_souplet();
  b.second = zoo::constant(0.0);
  b.time = 0.5;
  b.tol = 1e-7;
  const auto rb = pde_propagation_check(b, Relation::identity(), {std::ldexp(pi, 8)},
                                        CompactWindow::interval(0.0, 4.0, 0.1),
                                        CompactWindow::interval(-20.0, 24.0, 0.1));
  CHECK(rb.holds());
}

TEST_CASE("pde propagation requires complete data") {
  PdeProblem p;
  p.formula = Formula::kKirchhoff3d;
  p.first = cos_product(3);
  p.second = zoo::constant(0.0, 3);
  CHECK(code_of([&] {
          pde_propagation_check(p, Relation::identity(), {0.0, 0.0, 0.0},
                                CompactWindow::cube(3, 0.0, 1.0, 0.5),
                                CompactWindow::cube(3, -2.0, 3.0, 0.5));
        }) == ErrorCode::kConfiguration);
  PdeProblem d;
  d.formula = Formula::kDalembert;
  d.first = cosine();
  CHECK(code_of([&] { d.solution(); }) == ErrorCode::kConfiguration);
}
