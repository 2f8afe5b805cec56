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

#include "aperlab/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "aperlab/parallel.hpp"

namespace aperlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool norm_less(const Point& a, const Point& b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na != nb) return na < nb;
  return a < b;
}

Grid scan_grid(const ScanRange& range, bool& truncated) {
  if (range.axes.empty()) throw Error(ErrorCode::kConfiguration, "scan range has no axes");
  std::vector<double> step = range.step;
  if (step.size() == 1 && range.axes.size() > 1) step.assign(range.axes.size(), step[0]);
  if (step.size() != range.axes.size()) {
    throw Error(ErrorCode::kConfiguration, "scan step count does not match the range");
  }
  for (std::size_t i = 0; i < step.size(); ++i) {
    const auto& a = range.axes[i];
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.lo > a.hi) {
      throw Error(ErrorCode::kConfiguration, "scan range is empty");
    }
    if (!(step[i] > 0.0)) throw Error(ErrorCode::kConfiguration, "scan step must be positive");
  }
  auto count = [&]() {
    double c = 1.0;
    for (std::size_t i = 0; i < step.size(); ++i) {
      c *= std::floor(range.axes[i].length() / step[i]) + 2.0;
    }
    return c;
  };
  truncated = false;
  const double budget = static_cast<double>(std::max<std::size_t>(range.max_points, 1));
  while (count() > budget) {
    truncated = true;
    const double factor =
        std::pow(count() / budget, 1.0 / static_cast<double>(step.size())) * 1.0001;
    for (double& s : step) s *= factor;
  }
  return make_grid(CompactWindow(range.axes, step), Region::whole(range.axes.size()));
}

}  // namespace

AlmostPeriodReport scan_almost_periods(const FunctionHandle& f, const Relation& rho, double eps,
                                       const CompactWindow& w, const MetricSpec& spec,
                                       const ScanRange& range, const DefectOptions& options) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::kConfiguration, "eps must be nonnegative");
  if (range.axes.size() != f.dimension()) {
    throw Error(ErrorCode::kConfiguration, "scan range dimension does not match the function");
  }
  AlmostPeriodReport report;
  report.eps = eps;
  report.window = w;
  report.range = range;
  const Grid grid = scan_grid(range, report.truncated);
  report.entries = parallel_map(grid.size(), [&](std::size_t i) {
    ScanEntry e;
    e.tau = grid.point(i);
    const DefectResult d = windowed_defect(f, rho, e.tau, w, spec, options);
    e.defect = d.value;
    e.slack = d.certified_slack;
    e.accepted = d.value <= eps;
    return e;
  });
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const ScanEntry& a, const ScanEntry& b) { return norm_less(a.tau, b.tau); });
  for (const auto& e : report.entries) {
    if (e.accepted) report.accepted.push_back(e.tau);
  }
  if (!report.accepted.empty()) {
    const Density d = relative_density(report);
    report.max_gap = d.l;
    report.dense_verdict = d.dense;
  }
  return report;
}

Density relative_density(const AlmostPeriodReport& report) {
  if (report.accepted.empty()) {
    throw Error(ErrorCode::kNoPeriods, "no accepted almost periods in the scan");
  }
  const auto& axes = report.range.axes;
  Density out;
  if (axes.size() == 1) {
    std::vector<double> xs;
    for (const auto& p : report.accepted) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    const double lo_gap = xs.front() - axes[0].lo;
    const double hi_gap = axes[0].hi - xs.back();
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) gap = std::max(gap, xs[i + 1] - xs[i]);
    if (xs.size() == 1) gap = std::max(lo_gap, hi_gap);
    const double step = report.range.step.empty() ? 0.0 : report.range.step[0];
    out.l = gap;
    out.dense = lo_gap <= gap + 0.5 * step && hi_gap <= gap + 0.5 * step &&
                gap <= 0.5 * axes[0].length();
    return out;
  }
  bool truncated = false;
  const Grid grid = scan_grid(report.range, truncated);
  const auto nearest = parallel_map(grid.size(), [&](std::size_t i) {
    const Point p = grid.point(i);
    double best = kInf;
    for (const auto& a : report.accepted) {
      double s = 0.0;
      for (std::size_t d = 0; d < p.size(); ++d) s += (p[d] - a[d]) * (p[d] - a[d]);
      best = std::min(best, s);
    }
    return std::sqrt(best);
  });
  double cover = 0.0;
  for (double d : nearest) cover = std::max(cover, d);
  double shortest = kInf;
  for (const auto& a : axes) shortest = std::min(shortest, a.length());
  out.l = 2.0 * cover;
  out.dense = out.l <= 0.5 * shortest;
  return out;
}

// ------------------------------------------------------------ recurrence

std::optional<std::size_t> RecurrenceTable::tail_start(std::size_t window, double eps) const {
  std::size_t start = defects.size();
  while (start > 0 && defects[start - 1][window].value <= eps) --start;
  if (start == defects.size()) return std::nullopt;
  return start;
}

std::optional<std::size_t> RecurrenceTable::common_tail(double eps) const {
  std::size_t start = 0;
  for (std::size_t j = 0; j < windows.size(); ++j) {
    const auto s = tail_start(j, eps);
    if (!s) return std::nullopt;
    start = std::max(start, *s);
  }
  return start;
}

RecurrenceTable verify_recurrence(const FunctionHandle& f, const Relation& rho,
                                  const std::vector<Point>& tau_seq,
                                  const std::vector<CompactWindow>& windows,
                                  const MetricSpec& spec) {
  for (std::size_t k = 1; k < tau_seq.size(); ++k) {
    if (!(norm2(tau_seq[k]) > norm2(tau_seq[k - 1]))) {
      throw Error(ErrorCode::kConfiguration, "|tau_k| must be strictly increasing");
    }
  }
  RecurrenceTable table;
  table.tau_seq = tau_seq;
  table.windows = windows;
  for (const auto& tau : tau_seq) {
    std::vector<DefectResult> row;
    for (const auto& w : windows) row.push_back(windowed_defect(f, rho, tau, w, spec));
    table.defects.push_back(std::move(row));
  }
  return table;
}

// ----------------------------------------------------------------- type 1

double mod_two_pi_distance(double x) { return std::abs(x - kTwoPi * std::round(x / kTwoPi)); }

std::vector<Type1Candidate> levitan_type1_candidates(const std::vector<double>& freqs,
                                                     double delta, std::int64_t p_max) {
  if (freqs.empty()) throw Error(ErrorCode::kConfiguration, "type-1 search needs frequencies");
  if (!(delta > 0.0 && delta < std::numbers::pi)) {
    throw Error(ErrorCode::kConfiguration, "delta must lie in (0, pi)");
  }
  if (p_max < 1) throw Error(ErrorCode::kConfiguration, "p_max must be >= 1");
  const auto lead = std::find_if(freqs.begin(), freqs.end(), [](double x) { return x != 0.0; });
  if (lead == freqs.end()) return {{1, kTwoPi, 0.0}};
  const double lambda1 = *lead;

  std::set<std::int64_t> base;
  base.insert(1);
  for (double lambda : freqs) {
    if (lambda == 0.0) continue;
    long double x = std::abs(static_cast<long double>(lambda) / lambda1);
    // q_k = a_k q_{k-1} + q_{k-2}; semiconvergents q_{k-2} + j q_{k-1}, 1 <= j <= a_k.
    std::int64_t q_km2 = 1;
    std::int64_t q_km1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
      const long double a_ld = std::floor(x);
      if (q_km1 > 0) {
        if (a_ld * static_cast<long double>(q_km1) > static_cast<long double>(p_max)) {
          for (std::int64_t semi = q_km2 + q_km1; semi <= p_max; semi += q_km1) base.insert(semi);
          break;
        }
        const auto a = static_cast<std::int64_t>(a_ld);
        for (std::int64_t j = 1; j <= a; ++j) base.insert(q_km2 + j * q_km1);
      }
      const std::int64_t q = q_km1 > 0 ? q_km2 + static_cast<std::int64_t>(a_ld) * q_km1 : 1;
      if (q > p_max) break;
      q_km2 = q_km1;
      q_km1 = q;
      const long double frac = x - a_ld;
      if (frac < 1e-15L) break;
      x = 1.0L / frac;
    }
  }
  std::set<std::int64_t> pool;
  for (std::int64_t q : base) {
    for (std::int64_t k = 1; k <= 32 && k * q <= p_max; ++k) pool.insert(k * q);
  }

  std::vector<Type1Candidate> out;
  for (std::int64_t p : pool) {
    const double tau = kTwoPi * static_cast<double>(p) / lambda1;
    double worst = 0.0;
    for (double lambda : freqs) worst = std::max(worst, mod_two_pi_distance(lambda * tau));
    if (worst <= delta) out.push_back({p, tau, worst});
  }
  return out;
}

// ------------------------------------------------------------ group check

GroupCheck check_group_structure(const std::vector<Point>& e_eta, const FunctionHandle& f,
                                 const Relation& rho, double eps, const CompactWindow& w,
                                 const MetricSpec& spec) {
  std::vector<Point> queue = e_eta;
  for (std::size_t i = 0; i < e_eta.size(); ++i) {
    for (std::size_t j = i; j < e_eta.size(); ++j) {
      Point sum = e_eta[i];
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += e_eta[j][d];
      queue.push_back(std::move(sum));
    }
  }
  for (std::size_t i = 0; i < e_eta.size(); ++i) {
    for (std::size_t j = 0; j < e_eta.size(); ++j) {
      if (i == j) continue;
      Point diff = e_eta[i];
      for (std::size_t d = 0; d < diff.size(); ++d) diff[d] -= e_eta[j][d];
      queue.push_back(std::move(diff));
    }
  }
  GroupCheck out;
  for (const auto& tau : queue) {
    if (tau.size() != f.dimension()) throw Error(ErrorCode::kShape, "shift dimension mismatch");
    if (!f.domain().admits_shift(tau)) {
      ++out.skipped;
      continue;
    }
    const DefectResult d = windowed_defect(f, rho, tau, w, spec);
    ++out.checked;
    if (d.value > eps) {
      out.pass = false;
      out.violator = tau;
      out.violator_defect = d.value;
      return out;
    }
  }
  return out;
}

// -------------------------------------------------------------- normality

NormalityChain normality_probe(const FunctionHandle& f, const std::vector<Point>& shifts,
                               const CompactWindow& w, const MetricSpec& spec, double tol) {
  const std::size_t n = shifts.size();
  NormalityChain out;
  out.pair_defects.assign(n, std::vector<double>(n, 0.0));
  std::vector<FunctionHandle> translates;
  translates.reserve(n);
  for (const auto& b : shifts) translates.push_back(shifted(f, b));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const auto values = parallel_map(pairs.size(), [&](std::size_t k) {
    return approx_error(translates[pairs[k].first], translates[pairs[k].second], w, spec).value;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.pair_defects[pairs[k].first][pairs[k].second] = values[k];
    out.pair_defects[pairs[k].second][pairs[k].first] = values[k];
  }
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> chain{start};
    for (std::size_t j = start + 1; j < n; ++j) {
      const bool fits = std::all_of(chain.begin(), chain.end(), [&](std::size_t c) {
        return out.pair_defects[c][j] <= tol;
      });
      if (fits) chain.push_back(j);
    }
    if (chain.size() > out.indices.size()) out.indices = std::move(chain);
  }
  return out;
}

// ------------------------------------------------------------- Bogolyubov

double lattice_distance(const Point& tau) {
  double s = 0.0;
  for (double x : tau) {
    const double r = x - std::round(x);
    s += r * r;
  }
  return std::sqrt(s);
}

std::optional<BogolyubovWitness> bogolyubov_witness(const Point& omega, double eta, double delta,
                                                    const std::vector<Interval>& search_box,
                                                    double search_step) {
  const std::size_t n = omega.size();
  if (n < 2) throw Error(ErrorCode::kConfiguration, "the witness search needs n >= 2");
  if (!(delta < 0.25)) throw Error(ErrorCode::kConfiguration, "delta must be below 1/4");
  if (!(eta >= 0.0)) throw Error(ErrorCode::kConfiguration, "eta must be nonnegative");
  if (search_box.size() != n) throw Error(ErrorCode::kShape, "search box dimension mismatch");
  const double omega_sq = norm2(omega) * norm2(omega);
  if (omega_sq == 0.0) {
    Point half(n, 0.5);
    return BogolyubovWitness{half, 0.0, lattice_distance(half)};
  }
  const CompactWindow box(search_box, {search_step});
  const Grid grid = make_grid(box, Region::whole(n));
  auto dot = [&](const Point& p) {
    double s = 0.0;
    for (std::size_t d = 0; d < n; ++d) s += omega[d] * p[d];
    return s;
  };
  const auto candidates = parallel_map(grid.size(), [&](std::size_t i) {
    Point p = grid.point(i);
    const double s = dot(p);
    const double k = std::round(s / kTwoPi);
    const double shift = (s - kTwoPi * k) / omega_sq;
    for (std::size_t d = 0; d < n; ++d) p[d] -= shift * omega[d];
    BogolyubovWitness w{p, mod_two_pi_distance(dot(p)), lattice_distance(p)};
    bool inside = true;
    for (std::size_t d = 0; d < n; ++d) inside = inside && search_box[d].contains(p[d]);
    if (!inside || w.phase > eta) w.lattice_distance = -1.0;
    return w;
  });
  const BogolyubovWitness* best = nullptr;
  for (const auto& c : candidates) {
    if (c.lattice_distance > delta && (!best || c.lattice_distance > best->lattice_distance)) {
      best = &c;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace aperlab
