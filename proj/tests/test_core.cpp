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
#include <random>

#include "aperlab/core.hpp"
#include "aperlab/parallel.hpp"
#include "aperlab/quadrature.hpp"
#include "aperlab/zoo.hpp"
#include "oracles.hpp"

using namespace aperlab;

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

}  // namespace

TEST_CASE("eval_checked returns value and bound") {
  const auto c = eval_checked(zoo::constant(3.0), Point{1.5});
  CHECK(c.value == Value{3.0});
  CHECK(c.error == 0.0);

  const auto hs = eval_checked(zoo::haraux_souplet({1e-12, 4096}), Point{0.0});
  CHECK(hs.value[0] == 0.0);
  CHECK(hs.error <= 1e-12);

  const auto phi = eval_checked(zoo::ait_dads_phi({1e-10, 4096}), Point{1.0});
  CHECK(phi.error <= 1e-10);
  CHECK(std::abs(phi.value[0] - oracle::ait_dads_phi(1.0, 60)) <= 1e-10);
  CHECK(std::abs(phi.value[0] - 1.6973249010625828) <= 1e-10);
}

TEST_CASE("eval_checked rejects points outside the domain") {
  const auto k = zoo::kuchi_c0(100);
  CHECK(code_of([&] { eval_checked(k, Point{-1.0}); }) == ErrorCode::kDomain);
}

TEST_CASE("make_grid examples") {
  const Grid g1 = make_grid(CompactWindow::interval(0.0, 1.0, 0.5), Region::whole(1));
  REQUIRE(g1.size() == 3);
  CHECK(g1.point(0) == Point{0.0});
  CHECK(g1.point(1) == Point{0.5});
  CHECK(g1.point(2) == Point{1.0});

  const Grid g2 = make_grid(CompactWindow::interval(-1.0, 1.0, 1.0), Region::half_line());
  REQUIRE(g2.size() == 2);
  CHECK(g2.point(0) == Point{0.0});
  CHECK(g2.point(1) == Point{1.0});

  const Grid g3 = make_grid(CompactWindow::cube(2, 0.0, 1.0, 1.0), Region::whole(2));
  REQUIRE(g3.size() == 4);
  CHECK(g3.point(0) == Point{0.0, 0.0});
  CHECK(g3.point(3) == Point{1.0, 1.0});
}

TEST_CASE("make_grid rejects an empty intersection") {
  CHECK(code_of([] { make_grid(CompactWindow::interval(-3.0, -1.0, 0.5), Region::half_line()); }) ==
        ErrorCode::kEmptyWindow);
}

TEST_CASE("make_grid is sorted, duplicate free and inside the region") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    const double c = u(rng);
    const double d = c + 0.5 + std::abs(u(rng));
    const CompactWindow w({{a, b}, {c, d}}, {0.1 + std::abs(u(rng)) / 3.0, 0.2});
    const Region dom({{0.0, kInf}, {-kInf, kInf}});
    if (b < 0.0) continue;
    const Grid g = make_grid(w, dom);
    const auto pts = g.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(dom.contains(pts[i]));
      CHECK(pts[i][0] >= std::max(a, 0.0));
      CHECK(pts[i][0] <= b);
      if (i > 0) CHECK(pts[i - 1] < pts[i]);
    }
  }
}

TEST_CASE("apply_relation examples") {
  CHECK(apply_relation(Relation::identity(), Value{2.0, 3.0}) == Value{2.0, 3.0});
  const Value rotated = apply_relation(Relation::scale({0.0, 1.0}), Value{1.0, 0.0});
  CHECK(rotated[0] == doctest::Approx(0.0));
  CHECK(rotated[1] == 1.0);
  const double phi1 = oracle::ait_dads_phi(1.0, 60);
  CHECK(apply_relation(Relation::shift({phi1}), Value{0.0})[0] == phi1);
  CHECK(apply_relation(Relation::linear(2, {0.0, 1.0, 1.0, 0.0}), Value{2.0, 5.0}) ==
        Value{5.0, 2.0});
}

TEST_CASE("apply_relation unit scale and zero are exact") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 200; ++i) {
    const Value y = {n(rng), n(rng), n(rng)};
    CHECK(apply_relation(Relation::scale({1.0, 0.0}), y) == y);
    CHECK(apply_relation(Relation::zero(), y) == Value(3, 0.0));
  }
}

TEST_CASE("apply_relation shape errors") {
  CHECK(code_of([] { apply_relation(Relation::shift({1.0, 2.0}), Value{1.0}); }) ==
        ErrorCode::kShape);
  CHECK(code_of([] { apply_relation(Relation::linear(2, {1, 0, 0, 1}), Value{1.0}); }) ==
        ErrorCode::kShape);
  CHECK(code_of([] { apply_relation(Relation::scale({0.0, 1.0}), Value{1.0}); }) ==
        ErrorCode::kShape);
}

TEST_CASE("phi transforms are monotone with phi(0) = 0") {
  for (const Phi& p : {Phi::identity(), Phi::power(2.0), Phi::arctan()}) {
    CHECK(p(0.0) == 0.0);
    double prev = 0.0;
    for (double x = 0.01; x < 50.0; x *= 1.3) {
      CHECK(p(x) >= prev);
      prev = p(x);
    }
  }
}

TEST_CASE("shifted handle carries the growth envelope") {
  const auto hs = zoo::haraux_souplet();
  const auto s = shifted(hs, {100.0});
  CHECK(s(3.0) == doctest::Approx(hs(103.0)).epsilon(1e-14));
  REQUIRE(s.traits().growth);
  CHECK(s.traits().growth->log_rate == hs.traits().growth->log_rate);
  CHECK(s.traits().growth->constant >= hs.traits().growth->constant);
}

TEST_CASE("parallel_map is ordered and independent of worker count") {
  auto run = [](unsigned threads) {
    set_thread_count(threads);
    auto v = parallel_map(10'000, [](std::size_t i) { return std::sin(static_cast<double>(i)); });
    set_thread_count(0);
    return v;
  };
  const auto a = run(1);
  const auto b = run(7);
  CHECK(a == b);
  CHECK(pairwise_sum(a) == pairwise_sum(b));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto& r = quad::gauss_legendre(10);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 18);
  CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Jacobi absorbs the endpoint singularity") {
  const auto r = quad::gauss_jacobi(12, -0.5, 0.0);
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    mass += r.weights[i];
    first += r.weights[i] * r.nodes[i];
  }
  // int_{-1}^{1} (1-x)^{-1/2} dx = 2 sqrt 2; int x (1-x)^{-1/2} dx = 2 sqrt 2 / 3.
  CHECK(mass == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-13));
  CHECK(first == doctest::Approx(2.0 * std::numbers::sqrt2 / 3.0).epsilon(1e-13));
  CHECK(code_of([] { quad::gauss_jacobi(4, -1.0, 0.0); }) == ErrorCode::kConfiguration);
}

TEST_CASE("adaptive quadrature agrees with Simpson") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
  double err = 0.0;
  const double q = quad::integrate(f, -4.0, 5.0, 1e-12, &err);
  CHECK(std::abs(q - oracle::simpson(f, -4.0, 5.0, 20000)) <= 1e-11);
  CHECK(err <= 1e-11);
}

TEST_CASE("box quadrature integrates a separable Gaussian") {
  const std::vector<Interval> box{{-6.0, 6.0}, {-6.0, 6.0}};
  const auto r = quad::integrate_box(
      [](std::span<const double> x) { return Value{std::exp(-x[0] * x[0] - x[1] * x[1])}; }, 1,
      box, 1e-9);
  CHECK(r.value[0] == doctest::Approx(std::numbers::pi).epsilon(1e-9));
}
