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
#include <complex>
#include <numbers>
#include <random>

#include "aperlab/metric.hpp"
#include "aperlab/zoo.hpp"
#include "oracles.hpp"

using namespace aperlab;
using std::numbers::pi;

namespace {

MetricSpec arctan_sup() { return {Phi::identity(), Weight::one(), Norm::arctan_sup()}; }

std::vector<MetricSpec> all_specs() {
  return {MetricSpec::sup(),
          MetricSpec::l1(),
          arctan_sup(),
          {Phi::power(2.0), Weight::one(), Norm::sup()},
          {Phi::arctan(), Weight::levitan_power(0.5), Norm::l1()},
          {Phi::identity(), Weight::one(),
           Norm::weighted_sup([](std::span<const double> t) { return 1.0 / (1.0 + t[0] * t[0]); },
                              1.0, "inverse-square")}};
}

}  // namespace

TEST_CASE("windowed_defect vanishes at tau = 0 under the identity relation") {
  const std::vector<FunctionHandle> fs = {zoo::haraux_souplet(), zoo::ait_dads_phi(),
                                          zoo::levitan_reciprocal(), zoo::nawrocki(),
                                          zoo::trig_poly({{1.0}, {std::numbers::sqrt2}}, {1.0, 2.0})};
  for (const auto& f : fs) {
    for (const auto& spec : all_specs()) {
      const auto d = windowed_defect(f, Relation::identity(), {0.0},
                                     CompactWindow::interval(-7.0, 9.0, 0.05), spec);
      CHECK(d.value == 0.0);
    }
  }
}

TEST_CASE("windowed_defect at an exact period") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  const auto d = windowed_defect(p, Relation::identity(), {2.0 * pi},
                                 CompactWindow::interval(-10.0, 10.0, 0.01), MetricSpec::sup());
  CHECK(d.value <= 1e-14);
  CHECK(d.grid_points == 2001);
}

TEST_CASE("windowed_defect for the shifted ait_dads_phi relation") {
  const auto phi = zoo::ait_dads_phi();
  const auto d = windowed_defect(phi, Relation::shift({phi(1.0)}), {1024.0},
                                 CompactWindow::interval(0.0, 1.0, 1e-3), MetricSpec::sup());
  CHECK(d.value <= pi * pi * std::pow(4.0, -10) / 3.0 + pi * std::pow(2.0, -10) + d.certified_slack);
  CHECK(d.value <= 3.07e-3);
}

TEST_CASE("windowed_defect rejects shifts that leave a half-line domain") {
  try {
    windowed_defect(zoo::kuchi_c0(100), Relation::identity(), {-1.0},
                    CompactWindow::interval(0.0, 5.0, 0.5), MetricSpec::sup());
    FAIL("expected kInvalidShift");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidShift);
  }
}

TEST_CASE("windowed_defect with a Lipschitz integrand is not grid limited") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  DefectOptions opts;
  opts.integrand_lipschitz = 2.0;
  const auto d = windowed_defect(p, Relation::identity(), {1.0},
                                 CompactWindow::interval(0.0, 1.0, 0.1), MetricSpec::sup(), opts);
  CHECK_FALSE(d.grid_limited);
  CHECK(d.certified_slack >= 2.0 * 0.05 - 1e-15);
}

TEST_CASE("approx_error examples") {
  const auto p = zoo::trig_poly({{1.0}, {3.0}}, {1.0, {0.0, 2.0}});
  CHECK(approx_error(p, p, CompactWindow::interval(-3.0, 3.0, 0.01), MetricSpec::sup()).value == 0.0);

  const auto f = zoo::haraux_souplet();
  const auto d = approx_error(f, zoo::haraux_souplet_partial(5),
                              CompactWindow::interval(-1.0, 1.0, 1e-3), MetricSpec::sup());
  double tail = 0.0;
  for (int m = 6; m < 200; ++m) tail += std::pow(4.0, -m) / m;
  CHECK(d.value <= tail + d.certified_slack);
  CHECK(d.value >= 0.5 * tail);
}

TEST_CASE("per-window weight scales the sup result exactly") {
  const auto f = zoo::haraux_souplet();
  const auto p = zoo::haraux_souplet_partial(3);
  for (double n : {2.0, 7.0, 30.0}) {
    const auto w = CompactWindow::interval(-n, n, 0.01);
    const double plain = approx_error(f, p, w, MetricSpec::sup()).value;
    const MetricSpec weighted{Phi::identity(), Weight::levitan_power(0.25), Norm::sup()};
    const double scaled = approx_error(f, p, w, weighted).value;
    CHECK(scaled == doctest::Approx(plain * std::pow(n, -2.25)).epsilon(1e-14));
  }
}

TEST_CASE("lipschitz_compose_check examples") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  const auto w = CompactWindow::interval(0.0, 10.0, 0.01);

  LipschitzMap id{[](std::span<const double> y) { return Value(y.begin(), y.end()); }, 1.0, 2, true,
                  true};
  const auto c1 = lipschitz_compose_check(p, id, Relation::identity(), {1.0}, w, MetricSpec::sup());
  CHECK(c1.lhs == c1.rhs);

  LipschitzMap half{[](std::span<const double> y) {
                      Value v(y.begin(), y.end());
                      for (double& x : v) x *= 0.5;
                      return v;
                    },
                    0.5, 2, true, true};
  const auto c2 = lipschitz_compose_check(p, half, Relation::identity(), {1.0}, w, MetricSpec::sup());
  CHECK(c2.lhs == doctest::Approx(0.5 * c2.original.value).epsilon(1e-15));
  CHECK(c2.lhs <= c2.rhs * (1.0 + 1e-15));

  LipschitzMap abs_map{[](std::span<const double> y) { return Value{std::abs(y[0])}; }, 1.0, 1,
                       true, true};
  const auto c3 = lipschitz_compose_check(zoo::haraux_souplet(), abs_map, Relation::identity(),
                                          {std::ldexp(pi, 5)}, w, MetricSpec::sup());
  CHECK(c3.lhs <= c3.rhs + c3.composed.certified_slack + c3.original.certified_slack);

  try {
    lipschitz_compose_check(zoo::haraux_souplet(), abs_map, Relation::shift({1.0}), {1.0}, w,
                            MetricSpec::sup());
    FAIL("expected kConfiguration");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfiguration);
  }
}

TEST_CASE("L1 defect is at most volume times sup defect") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const auto f = zoo::levitan_reciprocal();
  for (int i = 0; i < 30; ++i) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    const auto w = CompactWindow::interval(a, b + 0.1, 0.05);
    const double tau = u(rng);
    const double l1 = windowed_defect(f, Relation::identity(), {tau}, w, MetricSpec::l1()).value;
    const double sup = windowed_defect(f, Relation::identity(), {tau}, w, MetricSpec::sup()).value;
    CHECK(l1 <= (b + 0.1 - a) * sup * (1.0 + 1e-12));
  }
}

TEST_CASE("arctan sup is below both sup and pi/2") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = zoo::trig_poly({{u(rng)}, {u(rng)}}, {{u(rng), u(rng)}, {u(rng) * 10.0, 0.0}});
    const double tau = u(rng);
    const auto w = CompactWindow::interval(0.0, 1.0, 0.25);
    const double s = windowed_defect(p, Relation::identity(), {tau}, w, MetricSpec::sup()).value;
    const double a = windowed_defect(p, Relation::identity(), {tau}, w, arctan_sup()).value;
    CHECK(a <= std::min(s, pi / 2.0));
  }
}

TEST_CASE("sup defect is monotone in the window") {
  const auto f = zoo::haraux_souplet();
  const auto big = CompactWindow::interval(-10.0, 10.0, 0.05);
  const auto small = CompactWindow::interval(-5.0, 5.0, 0.05);
  for (double tau : {1.0, 17.0, std::ldexp(pi, 6)}) {
    const double db = windowed_defect(f, Relation::identity(), {tau}, big, MetricSpec::sup()).value;
    const double ds = windowed_defect(f, Relation::identity(), {tau}, small, MetricSpec::sup()).value;
    CHECK(ds <= db);
  }
}

TEST_CASE("scale relation on a single exponential") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double lam = u(rng);
    const std::complex<double> coef(u(rng), u(rng));
    const std::complex<double> c(u(rng), u(rng));
    const double tau = 5.0 * u(rng);
    const auto p = zoo::trig_poly({{lam}}, {coef});
    const double d = windowed_defect(p, Relation::scale(c), {tau},
                                     CompactWindow::interval(-2.0, 2.0, 0.5), MetricSpec::sup())
                         .value;
    const double exact = std::abs(std::polar(1.0, lam * tau) - c) * std::abs(coef);
    CHECK(d == doctest::Approx(exact).epsilon(1e-12));
  }
}
