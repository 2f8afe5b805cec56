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
#include <cstdint>
#include <optional>
#include <vector>

#include "aperlab/core.hpp"
#include "aperlab/metric.hpp"

namespace aperlab {

struct ScanRange {
  std::vector<Interval> axes;
  std::vector<double> step;
  /// Product grids above this size are coarsened and flagged as truncated.
  std::size_t max_points = 2'000'000;
};

struct ScanEntry {
  Point tau;
  double defect = 0.0;
  double slack = 0.0;
  bool accepted = false;
};

struct AlmostPeriodReport {
  double eps = 0.0;
  CompactWindow window = CompactWindow::point({0.0});
  ScanRange range;
  std::vector<ScanEntry> entries;  ///< sorted by |tau|
  std::vector<Point> accepted;     ///< sorted by |tau|
  double max_gap = 0.0;
  bool dense_verdict = false;
  bool truncated = false;
};

/// Scans the grid of shifts over `range` and accepts those with defect <= eps.
/// The density verdict is scoped to the scanned range.
AlmostPeriodReport scan_almost_periods(const FunctionHandle& f, const Relation& rho, double eps,
                                       const CompactWindow& w, const MetricSpec& spec,
                                       const ScanRange& range, const DefectOptions& options = {});

struct Density {
  double l = 0.0;
  bool dense = false;
};

/// In one dimension l is the largest gap between consecutive accepted shifts
/// (the larger end gap when only one is accepted); the verdict requires both
/// end gaps within l and l at most half the range. In higher dimensions l is
/// twice the covering radius of the accepted set over the scan grid.
Density relative_density(const AlmostPeriodReport& report);

struct RecurrenceTable {
  std::vector<Point> tau_seq;
  std::vector<CompactWindow> windows;
  /// defects[k][j]: shift k on window j.
  std::vector<std::vector<DefectResult>> defects;

  /// Smallest k0 with defects[k][window] <= eps for every k >= k0.
  std::optional<std::size_t> tail_start(std::size_t window, double eps) const;
  /// One k0 that serves every window at once.
  std::optional<std::size_t> common_tail(double eps) const;
};

/// Throws kConfiguration unless |tau_k| is strictly increasing.
RecurrenceTable verify_recurrence(const FunctionHandle& f, const Relation& rho,
                                  const std::vector<Point>& tau_seq,
                                  const std::vector<CompactWindow>& windows,
                                  const MetricSpec& spec);

struct Type1Candidate {
  std::int64_t p = 0;
  double tau = 0.0;
  /// max_l |lambda_l tau| mod 2pi.
  double phase = 0.0;
};

/// Distance from x to the nearest multiple of 2 pi.
double mod_two_pi_distance(double x);

/// Shifts tau = 2 pi p / lambda_1 (lambda_1 the first nonzero frequency) with
/// p drawn from continued-fraction convergents and semiconvergents of the
/// ratios lambda_l / lambda_1 and their small multiples, p <= p_max, kept when
/// |lambda_l tau| <= delta mod 2 pi for every l. Sorted by p.
std::vector<Type1Candidate> levitan_type1_candidates(const std::vector<double>& freqs,
                                                     double delta, std::int64_t p_max);

struct GroupCheck {
  bool pass = true;
  std::optional<Point> violator;
  double violator_defect = 0.0;
  std::size_t checked = 0;
  /// Combinations whose shift leaves the domain (half-line domains).
  std::size_t skipped = 0;
};

/// Checks the elements of E, then every pairwise sum and difference, against
/// eps; stops at the first violator.
GroupCheck check_group_structure(const std::vector<Point>& e_eta, const FunctionHandle& f,
                                 const Relation& rho, double eps, const CompactWindow& w,
                                 const MetricSpec& spec);

struct NormalityChain {
  std::vector<std::size_t> indices;
  /// Pairwise defects between F(. + b_i) and F(. + b_j) that were evaluated.
  std::vector<std::vector<double>> pair_defects;
  bool greedy = true;
};

/// Greedy chain of shifts whose translates are pairwise within tol; a greedy
/// pass starts from every index and the longest chain wins.
NormalityChain normality_probe(const FunctionHandle& f, const std::vector<Point>& shifts,
                               const CompactWindow& w, const MetricSpec& spec, double tol);

struct BogolyubovWitness {
  Point tau;
  double phase = 0.0;             ///< |omega . tau| mod 2 pi
  double lattice_distance = 0.0;  ///< Euclidean distance to Z^n
};

double lattice_distance(const Point& tau);

/// Searches for tau with |omega . tau| <= eta mod 2 pi and dist(tau, Z^n) > delta
/// by projecting search-grid points onto the planes omega . tau = 2 pi k. The
/// witness with the largest lattice distance is returned.
std::optional<BogolyubovWitness> bogolyubov_witness(const Point& omega, double eta, double delta,
                                                    const std::vector<Interval>& search_box,
                                                    double search_step);

}  // namespace aperlab
