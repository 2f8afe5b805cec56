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

#include "aperlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "aperlab/parallel.hpp"

namespace aperlab {
namespace {

struct Sample {
  double distance = 0.0;  // ||a - b||
  double error = 0.0;     // bound on |distance - exact distance|
};

struct WeightedSample {
  double value = 0.0;
  double slack = 0.0;
};

// Shared reduction: weight, phi, norm.
DefectResult reduce(const Grid& grid, const CompactWindow& w, const MetricSpec& spec,
                    const DefectOptions& options,
                    const std::function<Sample(std::span<const double>)>& sample) {
  const double window_weight =
      spec.weight.kind == Weight::Kind::kConstPerWindow ? spec.weight.per_window(w) : 1.0;
  if (!(window_weight > 0.0)) throw Error(ErrorCode::kConfiguration, "weight must be positive");
  if (spec.norm.kind == Norm::Kind::kWeightedSup && !spec.norm.nu) {
    throw Error(ErrorCode::kConfiguration, "weighted sup norm without a weight function");
  }

  const auto samples = parallel_map(grid.size(), [&](std::size_t i) {
    const Point t = grid.point(i);
    const Sample s = sample(t);
    double weight = window_weight;
    if (spec.weight.kind == Weight::Kind::kTabulated) weight = spec.weight.tabulated(t);
    if (spec.norm.kind == Norm::Kind::kWeightedSup) weight *= spec.norm.nu(t);
    if (!(weight > 0.0)) throw Error(ErrorCode::kConfiguration, "weight must be positive");
    return WeightedSample{weight * spec.phi(s.distance),
                          weight * spec.phi.perturbation(s.distance, s.error)};
  });

  DefectResult r;
  r.grid_points = grid.size();
  r.grid_limited = !options.integrand_lipschitz.has_value();
  const double lip = options.integrand_lipschitz.value_or(0.0);
  switch (spec.norm.kind) {
    case Norm::Kind::kSup:
    case Norm::Kind::kWeightedSup:
    case Norm::Kind::kArctanSup: {
      double top = 0.0;
      double slack = 0.0;
      for (const auto& s : samples) {
        top = std::max(top, s.value);
        slack = std::max(slack, s.slack);
      }
      slack += lip * grid.covering_radius();
      if (spec.norm.kind == Norm::Kind::kArctanSup) {
        // arctan is increasing and 1-Lipschitz.
        r.value = std::atan(top);
        r.certified_slack = std::min(slack, std::numbers::pi / 2);
      } else {
        r.value = top;
        r.certified_slack = slack;
      }
      break;
    }
    case Norm::Kind::kL1: {
      std::vector<double> parts(samples.size());
      std::vector<double> slacks(samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const double tw = grid.trapezoid_weight(i);
        parts[i] = tw * samples[i].value;
        slacks[i] = tw * samples[i].slack;
      }
      r.value = pairwise_sum(parts);
      // Trapezoid error of a Lipschitz integrand is at most L * radius * volume.
      r.certified_slack = pairwise_sum(slacks) + lip * grid.covering_radius() * grid.volume();
      break;
    }
  }
  r.value = std::max(0.0, r.value);
  return r;
}

double distance(const Value& a, const Value& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

DefectResult windowed_defect(const FunctionHandle& f, const Relation& rho, const Point& tau,
                             const CompactWindow& w, const MetricSpec& spec,
                             const DefectOptions& options) {
  if (tau.size() != f.dimension()) throw Error(ErrorCode::kShape, "shift dimension mismatch");
  if (!f.domain().admits_shift(tau)) {
    throw Error(ErrorCode::kInvalidShift, f.name() + ": tau + domain leaves the domain");
  }
  const Grid grid = make_grid(w, f.domain());
  const double root_m = std::sqrt(static_cast<double>(f.codomain_dim()));
  const double rho_norm = rho.linear_norm();
  return reduce(grid, w, spec, options, [&](std::span<const double> t) {
    Point moved(t.begin(), t.end());
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += tau[i];
    const Evaluation a = f.evaluate(moved);
    const Evaluation b = f.evaluate(t);
    const Value rb = apply_relation(rho, b.value);
    return Sample{distance(a.value, rb), root_m * (a.error + rho_norm * b.error)};
  });
}

DefectResult approx_error(const FunctionHandle& f, const FunctionHandle& p, const CompactWindow& w,
                          const MetricSpec& spec, const DefectOptions& options) {
  if (f.dimension() != p.dimension()) throw Error(ErrorCode::kShape, "domain dimensions differ");
  const std::size_t mf = f.codomain_dim();
  const std::size_t mp = p.codomain_dim();
  const bool embed = (mf == 1 && mp == 2) || (mf == 2 && mp == 1);
  if (mf != mp && !embed) throw Error(ErrorCode::kShape, "codomain dimensions differ");
  std::vector<Interval> axes(f.dimension());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    axes[i] = {std::max(f.domain().axis(i).lo, p.domain().axis(i).lo),
               std::min(f.domain().axis(i).hi, p.domain().axis(i).hi)};
    if (axes[i].empty()) throw Error(ErrorCode::kEmptyWindow, "domains do not meet");
  }
  const Grid grid = make_grid(w, Region(std::move(axes)));
  const double root_m = std::sqrt(static_cast<double>(std::max(mf, mp)));
  return reduce(grid, w, spec, options, [&](std::span<const double> t) {
    Evaluation a = f.evaluate(t);
    Evaluation b = p.evaluate(t);
    if (a.value.size() == 1 && embed) a.value.push_back(0.0);
    if (b.value.size() == 1 && embed) b.value.push_back(0.0);
    return Sample{distance(a.value, b.value), root_m * (a.error + b.error)};
  });
}

FunctionHandle compose(const FunctionHandle& f, const LipschitzMap& h) {
  if (!h.map || h.out_dim == 0) throw Error(ErrorCode::kConfiguration, "empty Lipschitz map");
  const double root_m = std::sqrt(static_cast<double>(f.codomain_dim()));
  FunctionTraits traits;
  if (f.traits().lipschitz) traits.lipschitz = h.lipschitz * *f.traits().lipschitz;
  return FunctionHandle(
      "h(" + f.name() + ")", f.domain(), h.out_dim,
      [f, h, root_m](std::span<const double> t) {
        const Evaluation e = f.evaluate_unchecked(t);
        Value v = h.map(e.value);
        if (v.size() != h.out_dim) throw Error(ErrorCode::kShape, "Lipschitz map output size");
        return Evaluation{std::move(v), h.lipschitz * root_m * e.error};
      },
      traits);
}

ComposeCheck lipschitz_compose_check(const FunctionHandle& f, const LipschitzMap& h,
                                     const Relation& rho, const Point& tau, const CompactWindow& w,
                                     const MetricSpec& spec) {
  if (!spec.is_plain_sup()) {
    throw Error(ErrorCode::kConfiguration, "composition check needs phi = identity, weight 1, sup");
  }
  if (!(h.lipschitz > 0.0)) throw Error(ErrorCode::kConfiguration, "Lipschitz constant must be > 0");
  Relation image = Relation::identity();
  switch (rho.kind()) {
    case Relation::Kind::kIdentity: break;
    case Relation::Kind::kScale:
      if (rho.scale_factor().imag() != 0.0 || !h.homogeneous) {
        throw Error(ErrorCode::kConfiguration,
                    "scale relation needs a real factor and a homogeneous map");
      }
      image = rho;
      break;
    case Relation::Kind::kZero:
      if (!h.fixes_zero) throw Error(ErrorCode::kConfiguration, "zero relation needs h(0) = 0");
      image = rho;
      break;
    default:
      throw Error(ErrorCode::kConfiguration,
                  "unsupported relation for the composition check: " + rho.describe());
  }
  ComposeCheck out;
  out.composed = windowed_defect(compose(f, h), image, tau, w, spec);
  out.original = windowed_defect(f, rho, tau, w, spec);
  out.lhs = out.composed.value;
  out.rhs = h.lipschitz * out.original.value;
  return out;
}

}  // namespace aperlab
