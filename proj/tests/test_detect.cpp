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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aperlab/detect.hpp"
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

ScanRange line(double a, double b, double step) { return {{{a, b}}, {step}}; }

bool contains_near(const std::vector<Point>& pts, double x, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const Point& p) { return std::abs(p[0] - x) <= tol; });
}

// sup_{|t| <= T} |phi(t + 2^l) - phi(t) - phi(1)| <= pi^2 T^2 4^{-l} / 3 + pi T 2^{-l}.
double phi_shift_bound(int l, double t_max) {
  return pi * pi * t_max * t_max * std::pow(4.0, -l) / 3.0 + pi * t_max * std::pow(2.0, -l);
}

}  // namespace

TEST_CASE("scan finds the periods of a single exponential") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  const auto r = scan_almost_periods(p, Relation::identity(), 1e-9,
                                     CompactWindow::interval(-5.0, 5.0, 0.1), MetricSpec::sup(),
                                     line(0.0, 20.0, pi / 100.0));
  CHECK(contains_near(r.accepted, 2.0 * pi, 1e-9));
  CHECK(contains_near(r.accepted, 4.0 * pi, 1e-9));
  CHECK(contains_near(r.accepted, 6.0 * pi, 1e-9));
  CHECK(r.max_gap == doctest::Approx(2.0 * pi).epsilon(1e-9));
  for (const auto& e : r.entries) {
    if (e.accepted) CHECK(oracle::mod_two_pi(e.tau[0]) <= 1e-9);
  }
}

TEST_CASE("scan finds an almost period of levitan_reciprocal near 2 pi 169") {
  const auto f = zoo::levitan_reciprocal();
  const auto r = scan_almost_periods(f, Relation::identity(), 0.1,
                                     CompactWindow::interval(-10.0, 10.0, 0.01), MetricSpec::sup(),
                                     line(1060.0, 1063.0, 1e-3));
  CHECK_FALSE(r.accepted.empty());
  CHECK(contains_near(r.accepted, 2.0 * pi * 169.0, 0.01));
}

TEST_CASE("kuchi_c0 admits no almost period at the origin") {
  const auto r = scan_almost_periods(zoo::kuchi_c0(1000), Relation::identity(), 0.15,
                                     CompactWindow::point({0.0}), MetricSpec::sup(),
                                     line(1.0, 100.0, 0.01));
  CHECK(r.accepted.empty());
  CHECK_FALSE(r.dense_verdict);
}

TEST_CASE("relative_density examples") {
  AlmostPeriodReport r;
  r.range = line(0.0, 20.0, pi / 100.0);
  r.accepted = {{2.0 * pi}, {4.0 * pi}, {6.0 * pi}};
  const Density d = relative_density(r);
  CHECK(d.l == doctest::Approx(2.0 * pi).epsilon(1e-12));
  CHECK(d.dense);

  AlmostPeriodReport lone;
  lone.range = line(0.0, 100.0, 1.0);
  lone.accepted = {{5.0}};
  CHECK_FALSE(relative_density(lone).dense);

  AlmostPeriodReport none;
  none.range = line(0.0, 1.0, 0.1);
  CHECK(code_of([&] { relative_density(none); }) == ErrorCode::kNoPeriods);
}

TEST_CASE("accepted sets shrink as eps shrinks") {
  const auto f = zoo::levitan_reciprocal();
  const auto w = CompactWindow::interval(-3.0, 3.0, 0.05);
  std::size_t prev = static_cast<std::size_t>(-1);
  for (double eps : {0.5, 0.3, 0.2, 0.1}) {
    const auto r = scan_almost_periods(f, Relation::identity(), eps, w, MetricSpec::sup(),
                                       line(0.0, 200.0, 0.05));
    CHECK(r.accepted.size() <= prev);
    prev = r.accepted.size();
  }
}

TEST_CASE("verify_recurrence for the shifted phi relation") {
  const auto phi = zoo::ait_dads_phi();
  std::vector<Point> taus;
  for (int k = 5; k <= 14; ++k) taus.push_back({std::ldexp(1.0, k)});
  const std::vector<CompactWindow> windows = {CompactWindow::interval(0.0, 1.0, 1e-3),
                                              CompactWindow::interval(-2.0, 2.0, 1e-3)};
  const auto t = verify_recurrence(phi, Relation::shift({phi(1.0)}), taus, windows, MetricSpec::sup());
  REQUIRE(t.defects.size() == taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const int l = 5 + static_cast<int>(k);
    CHECK(t.defects[k][0].value <= phi_shift_bound(l, 1.0) + t.defects[k][0].certified_slack);
    CHECK(t.defects[k][1].value <= phi_shift_bound(l, 2.0) + t.defects[k][1].certified_slack);
  }
  REQUIRE(t.common_tail(0.05).has_value());
}

TEST_CASE("verify_recurrence for haraux_souplet and a pure period") {
  const auto hs = zoo::haraux_souplet();
  std::vector<Point> taus;
  for (int k = 5; k <= 12; ++k) taus.push_back({std::ldexp(pi, k)});
  const auto t = verify_recurrence(hs, Relation::identity(), taus,
                                   {CompactWindow::interval(-20.0, 20.0, 0.01)}, MetricSpec::sup());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    CHECK(t.defects[k][0].value <= pi / (k + 6.0) + t.defects[k][0].certified_slack);
  }

  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  std::vector<Point> periods;
  for (int k = 1; k <= 6; ++k) periods.push_back({2.0 * pi * k});
  const auto tp = verify_recurrence(p, Relation::identity(), periods,
                                    {CompactWindow::interval(0.0, 5.0, 0.1)}, MetricSpec::sup());
  for (const auto& row : tp.defects) CHECK(row[0].value <= 1e-13);
  CHECK(tp.common_tail(1e-12) == std::optional<std::size_t>(0));

  CHECK(code_of([&] {
          verify_recurrence(p, Relation::identity(), {{2.0}, {1.0}},
                            {CompactWindow::interval(0.0, 1.0, 0.5)}, MetricSpec::sup());
        }) == ErrorCode::kConfiguration);
}

TEST_CASE("type1 candidates for a single frequency") {
  const auto c = levitan_type1_candidates({1.0}, 0.1, 10);
  REQUIRE_FALSE(c.empty());
  CHECK(c.front().p == 1);
  CHECK(c.front().tau == doctest::Approx(2.0 * pi));
}

TEST_CASE("type1 candidates for 1 and sqrt 2") {
  const auto c = levitan_type1_candidates({1.0, std::numbers::sqrt2}, 0.3, 1000);
  auto has = [&](std::int64_t p) {
    return std::any_of(c.begin(), c.end(), [&](const Type1Candidate& x) { return x.p == p; });
  };
  CHECK_FALSE(has(5));
  CHECK(has(29));
  CHECK(has(169));
  // Re-filtering with the independent phase computation rejects nothing.
  for (const auto& x : c) {
    const double tau = 2.0 * pi * static_cast<double>(x.p);
    const double phase = std::max(oracle::mod_two_pi(tau), oracle::mod_two_pi(std::numbers::sqrt2 * tau));
    CHECK(phase <= 0.3 + 1e-12);
    CHECK(x.phase == doctest::Approx(phase).epsilon(1e-9));
  }
  // Smaller delta keeps a subset.
  const auto tight = levitan_type1_candidates({1.0, std::numbers::sqrt2}, 0.05, 1000);
  CHECK(tight.size() <= c.size());
  for (const auto& x : tight) CHECK(x.phase <= 0.05);
}

TEST_CASE("mod_two_pi_distance matches the long-double oracle") {
  for (double x : {0.0, 1.0, -3.0, 2.0 * pi, 1e3, 1e5 + 0.1, -7e4}) {
    CHECK(mod_two_pi_distance(x) == doctest::Approx(oracle::mod_two_pi(x)).epsilon(1e-9));
  }
}

TEST_CASE("check_group_structure examples") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  const auto w = CompactWindow::interval(-3.0, 3.0, 0.1);
  const auto ok = check_group_structure({{2.0 * pi}, {4.0 * pi}}, p, Relation::identity(), 1e-9, w,
                                        MetricSpec::sup());
  CHECK(ok.pass);
  CHECK(ok.checked >= 2);

  const auto bad = check_group_structure({{pi}}, p, Relation::identity(), 1e-9, w, MetricSpec::sup());
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.violator.has_value());
  CHECK((*bad.violator)[0] == doctest::Approx(pi));
}

TEST_CASE("normality_probe examples") {
  const auto p = zoo::trig_poly({{1.0}}, {1.0});
  const auto w = CompactWindow::interval(0.0, 5.0, 0.1);
  const auto chain = normality_probe(p, {{2.0 * pi}, {4.0 * pi}, {1.0}, {6.0 * pi}}, w,
                                     MetricSpec::sup(), 1e-9);
  CHECK(chain.indices == std::vector<std::size_t>{0, 1, 3});

  const auto all = normality_probe(zoo::constant(4.0), {{0.3}, {-2.0}, {11.0}}, w,
                                   MetricSpec::sup(), 0.0);
  CHECK(all.indices.size() == 3);

  const auto phi = zoo::ait_dads_phi();
  std::vector<Point> shifts;
  for (int k = 8; k <= 14; ++k) shifts.push_back({std::ldexp(1.0, k)});
  const auto pc = normality_probe(phi, shifts, CompactWindow::interval(0.0, 1.0, 1e-2),
                                  MetricSpec::sup(), 1.0);
  CHECK(pc.indices.size() == shifts.size());
  for (std::size_t i = 0; i < pc.pair_defects.size(); ++i) {
    for (std::size_t j = 0; j < pc.pair_defects[i].size(); ++j) {
      if (i == j || std::isnan(pc.pair_defects[i][j])) continue;
      const double bound = phi_shift_bound(8 + static_cast<int>(i), 1.0) +
                           phi_shift_bound(8 + static_cast<int>(j), 1.0) + 1e-9;
      CHECK(pc.pair_defects[i][j] <= bound);
    }
  }
}

TEST_CASE("bogolyubov_witness examples") {
  const auto a = bogolyubov_witness({1.0, 0.0}, 0.1, 0.2, {{-2.0, 2.0}, {-2.0, 2.0}}, 0.05);
  REQUIRE(a.has_value());
  CHECK(a->phase <= 0.1);
  CHECK(a->lattice_distance > 0.2);
  CHECK(oracle::mod_two_pi(a->tau[0]) <= 0.1 + 1e-12);
  CHECK(a->lattice_distance == doctest::Approx(oracle::lattice_distance(a->tau)).epsilon(1e-12));

  const auto b = bogolyubov_witness({1.0, std::numbers::sqrt2}, 0.05, 0.2, {{0.0, 10.0}, {0.0, 10.0}},
                                    0.05);
  REQUIRE(b.has_value());
  CHECK(b->lattice_distance >= 0.45);
  CHECK(oracle::mod_two_pi(b->tau[0] + std::numbers::sqrt2 * b->tau[1]) <= 0.05 + 1e-9);

  const auto z = bogolyubov_witness({0.0, 0.0}, 0.1, 0.2, {{0.0, 1.0}, {0.0, 1.0}}, 0.05);
  REQUIRE(z.has_value());
  CHECK(z->tau[0] == doctest::Approx(0.5));
  CHECK(z->tau[1] == doctest::Approx(0.5));

  CHECK(code_of([] { bogolyubov_witness({1.0}, 0.1, 0.2, {{0.0, 1.0}}, 0.1); }) ==
        ErrorCode::kConfiguration);
  CHECK(code_of([] {
          bogolyubov_witness({1.0, 1.0}, 0.1, 0.3, {{0.0, 1.0}, {0.0, 1.0}}, 0.1);
        }) == ErrorCode::kConfiguration);
}
