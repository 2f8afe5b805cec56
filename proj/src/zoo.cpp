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

#include "aperlab/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace aperlab::zoo {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double sin_sq(double x) {
  const double s = std::sin(x);
  return s * s;
}

double scalar_arg(std::span<const double> t) { return t[0]; }

void check_truncation(const SeriesTruncation& trunc) {
  if (!(trunc.tol > 0.0) || trunc.term_cap == 0) {
    throw Error(ErrorCode::kConfiguration, "series truncation needs tol > 0 and term_cap >= 1");
  }
}

// (1/(M+1)) t^2 4^-(M+1) (4/3): valid once 2^(M+1) >= |t|.
double haraux_quadratic_tail(std::size_t terms, double t) {
  const double m1 = static_cast<double>(terms + 1);
  return (t * t) * std::ldexp(1.0, -2 * static_cast<int>(terms + 1)) * (4.0 / 3.0) / m1;
}

}  // namespace

FunctionHandle constant(double c, std::size_t n, std::size_t m) {
  FunctionTraits traits;
  traits.growth = GrowthBound{std::abs(c) * std::sqrt(static_cast<double>(m)), 0.0};
  traits.lipschitz = 0.0;
  return FunctionHandle(
      "constant", Region::whole(n), m,
      [c, m](std::span<const double>) { return Evaluation{Value(m, c), 0.0}; }, traits);
}

FunctionHandle affine(std::vector<double> v, double b) {
  if (v.empty()) throw Error(ErrorCode::kShape, "affine map needs a coefficient vector");
  FunctionTraits traits;
  const double lip = norm2(v);
  traits.lipschitz = lip;
  if (lip == 0.0) traits.growth = GrowthBound{std::abs(b), 0.0};
  const std::size_t n = v.size();
  return FunctionHandle(
      "affine", Region::whole(n), 1,
      [v = std::move(v), b](std::span<const double> t) {
        double s = b;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * t[i];
        return Evaluation{{s}, 0.0};
      },
      traits);
}

// ------------------------------------------------------ Haraux-Souplet

double haraux_souplet_tail(std::size_t terms, double t) {
  const double a = std::abs(t);
  double sum = 0.0;
  std::size_t m = terms + 1;
  // Terms with 2^m <= |t| are bounded by 1/m.
  while (std::ldexp(1.0, static_cast<int>(m)) <= a) {
    sum += 1.0 / static_cast<double>(m);
    ++m;
  }
  return sum + haraux_quadratic_tail(m - 1, t);
}

FunctionHandle haraux_souplet(SeriesTruncation trunc) {
  check_truncation(trunc);
  FunctionTraits traits;
  traits.growth = GrowthBound{4.0 / 3.0, 1.0};
  traits.lipschitz = std::numbers::ln2;
  return FunctionHandle(
      "haraux-souplet", Region::whole(1), 1,
      [trunc](std::span<const double> p) {
        const double t = scalar_arg(p);
        const double a = std::abs(t);
        double sum = 0.0;
        std::size_t m = 0;
        while (m < trunc.term_cap) {
          if (std::ldexp(1.0, static_cast<int>(m + 1)) >= a &&
              haraux_quadratic_tail(m, t) <= trunc.tol) {
            break;
          }
          ++m;
          sum += sin_sq(std::ldexp(t, -static_cast<int>(m))) / static_cast<double>(m);
        }
        const double err = haraux_souplet_tail(m, t) + 2.0 * static_cast<double>(m + 4) * kEps * sum;
        return Evaluation{{sum}, err};
      },
      traits);
}

FunctionHandle haraux_souplet_partial(std::size_t terms) {
  FunctionTraits traits;
  double bound = 0.0;
  for (std::size_t m = 1; m <= terms; ++m) bound += 1.0 / static_cast<double>(m);
  traits.growth = GrowthBound{bound, 0.0};
  traits.lipschitz = std::numbers::ln2;
  return FunctionHandle(
      "haraux-souplet-partial-" + std::to_string(terms), Region::whole(1), 1,
      [terms](std::span<const double> p) {
        const double t = scalar_arg(p);
        double sum = 0.0;
        for (std::size_t m = 1; m <= terms; ++m) {
          sum += sin_sq(std::ldexp(t, -static_cast<int>(m))) / static_cast<double>(m);
        }
        return Evaluation{{sum}, 0.0};
      },
      traits);
}

// ------------------------------------------------------- Ait Dads phi

double ait_dads_phi_tail(std::size_t terms, double t) {
  return kPi * kPi * t * t * std::ldexp(1.0, -2 * static_cast<int>(terms)) / 3.0;
}

FunctionHandle ait_dads_phi(SeriesTruncation trunc) {
  check_truncation(trunc);
  FunctionTraits traits;
  traits.growth = GrowthBound{1.0 + kPi * kPi / 3.0, 1.0};
  traits.lipschitz = kPi;
  return FunctionHandle(
      "ait-dads-phi", Region::whole(1), 1,
      [trunc](std::span<const double> p) {
        const double t = scalar_arg(p);
        const double pt = kPi * t;
        double sum = 0.0;
        std::size_t k = 0;
        while (k < trunc.term_cap && ait_dads_phi_tail(k, t) > trunc.tol) {
          ++k;
          sum += sin_sq(std::ldexp(pt, -static_cast<int>(k)));
        }
        const double err = ait_dads_phi_tail(k, t) + 2.0 * kEps * std::abs(pt) +
                           2.0 * static_cast<double>(k + 4) * kEps * sum;
        return Evaluation{{sum}, err};
      },
      traits);
}

FunctionHandle ait_dads_phi_partial(std::size_t terms) {
  FunctionTraits traits;
  traits.growth = GrowthBound{static_cast<double>(terms), 0.0};
  traits.lipschitz = kPi;
  return FunctionHandle(
      "ait-dads-phi-partial-" + std::to_string(terms), Region::whole(1), 1,
      [terms](std::span<const double> p) {
        const double pt = kPi * scalar_arg(p);
        double sum = 0.0;
        for (std::size_t k = 1; k <= terms; ++k) sum += sin_sq(std::ldexp(pt, -static_cast<int>(k)));
        return Evaluation{{sum}, 0.0};
      },
      traits);
}

Evaluation ait_dads_phi_split(double t, unsigned l, SeriesTruncation trunc) {
  check_truncation(trunc);
  const double pt = kPi * t;
  double head = 0.0;
  for (unsigned k = 1; k <= l; ++k) head += sin_sq(std::ldexp(pt, -static_cast<int>(k)));
  // |sin(pi t/2^{k+l} + pi/2^k)| <= pi (|t| 2^-l + 1) 2^-k.
  const double c = std::ldexp(std::abs(t), -static_cast<int>(l)) + 1.0;
  auto tail = [&](std::size_t m) { return ait_dads_phi_tail(m, c); };
  double rest = 0.0;
  std::size_t k = 0;
  while (k < trunc.term_cap && tail(k) > trunc.tol) {
    ++k;
    rest += sin_sq(std::ldexp(pt, -static_cast<int>(k + l)) + std::ldexp(kPi, -static_cast<int>(k)));
  }
  const double sum = head + rest;
  const double err = tail(k) + 2.0 * kEps * std::abs(pt) +
                     2.0 * static_cast<double>(k + l + 4) * kEps * sum;
  return {{sum}, err};
}

// ------------------------------------------------------ closed forms

FunctionHandle levitan_reciprocal() {
  return FunctionHandle("levitan-reciprocal", Region::whole(1), 1,
                        [](std::span<const double> p) {
                          const double t = scalar_arg(p);
                          return Evaluation{
                              {1.0 / (2.0 + std::cos(t) + std::cos(std::numbers::sqrt2 * t))},
                              0.0};
                        });
}

FunctionHandle nawrocki() {
  return FunctionHandle("nawrocki", Region::whole(1), 1, [](std::span<const double> p) {
    const double x = scalar_arg(p);
    if (!(std::abs(x) < 0x1p53)) {
      throw Error(ErrorCode::kDomain, "nawrocki: |x| must stay below 2^53 for exact membership");
    }
    const double q = std::floor(x);
    const double frac = x - q;
    const auto qi = static_cast<std::int64_t>(q);
    // Only windows with 3^n <= |x| + 1 can contain x.
    std::int64_t pow3 = 3;
    for (std::int64_t n = 1; pow3 <= static_cast<std::int64_t>(std::abs(x)) + 1; ++n, pow3 *= 3) {
      const std::int64_t period = 6 * pow3;
      std::int64_t r = (qi - pow3) % period;
      if (r < 0) r += period;
      if (r == 0 || (r == 1 && frac == 0.0)) {
        const double amplitude = static_cast<double>(n) * 3.0 * static_cast<double>(pow3);
        return Evaluation{{amplitude * std::sin(2.0 * kPi * frac)}, 0.0};
      }
    }
    return Evaluation{{0.0}, 0.0};
  });
}

double kuchi_component(double n, double t) {
  const double d = t * t + n * n;
  return 4.0 * n * n * t * t / (d * d);
}

FunctionHandle kuchi_c0(std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::kConfiguration, "kuchi_c0 needs n_max >= 1");
  FunctionTraits traits;
  traits.growth = GrowthBound{1.0, 0.0};
  return FunctionHandle(
      "kuchi-c0", Region::half_line(), 1,
      [](std::span<const double> p) {
        const double t = scalar_arg(p);
        // n -> 4n^2t^2/(t^2+n^2)^2 rises up to n = t and falls after it, so the
        // supremum over n >= 1 sits at 1, floor(t) or ceil(t).
        double best = kuchi_component(1.0, t);
        const double lo = std::max(1.0, std::floor(t));
        best = std::max({best, kuchi_component(lo, t), kuchi_component(lo + 1.0, t)});
        return Evaluation{{best}, 0.0};
      },
      traits);
}

Evaluation kuchi_c0_distance(double t, double s, std::size_t n_max) {
  if (t < 0.0 || s < 0.0) throw Error(ErrorCode::kDomain, "kuchi_c0 is defined on [0, inf)");
  const double top = std::max(t, s);
  const auto cut = std::max<std::size_t>(n_max, static_cast<std::size_t>(std::ceil(top)) + 1);
  double best = 0.0;
  for (std::size_t n = 1; n <= cut; ++n) {
    const double nd = static_cast<double>(n);
    best = std::max(best, std::abs(kuchi_component(nd, t) - kuchi_component(nd, s)));
  }
  // Past the cut both sequences decrease, so each later difference is bounded
  // by the larger of the two terms at the cut.
  const double nc = static_cast<double>(cut);
  const double tail = std::max(kuchi_component(nc, t), kuchi_component(nc, s));
  return {{best}, std::max(0.0, tail - best)};
}

// --------------------------------------------------- trig polynomials

FunctionHandle trig_poly(std::vector<Point> freqs, std::vector<std::complex<double>> coeffs) {
  if (freqs.size() != coeffs.size()) {
    throw Error(ErrorCode::kShape, "trig_poly: frequency and coefficient counts differ");
  }
  if (freqs.empty()) throw Error(ErrorCode::kShape, "trig_poly: needs at least one term");
  const std::size_t n = freqs.front().size();
  if (n == 0) throw Error(ErrorCode::kShape, "trig_poly: empty frequency vector");
  double mass = 0.0;
  double lip = 0.0;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    if (freqs[j].size() != n) throw Error(ErrorCode::kShape, "trig_poly: ragged frequency vectors");
    mass += std::abs(coeffs[j]);
    lip += std::abs(coeffs[j]) * norm2(freqs[j]);
  }
  FunctionTraits traits;
  traits.growth = GrowthBound{mass, 0.0};
  traits.lipschitz = lip;
  return FunctionHandle(
      "trig-poly", Region::whole(n), 2,
      [freqs = std::move(freqs), coeffs = std::move(coeffs)](std::span<const double> t) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < freqs.size(); ++j) {
          double phase = 0.0;
          for (std::size_t i = 0; i < t.size(); ++i) phase += freqs[j][i] * t[i];
          const std::complex<double> z = coeffs[j] * std::polar(1.0, phase);
          re += z.real();
          im += z.imag();
        }
        return Evaluation{{re, im}, 0.0};
      },
      traits);
}

FunctionHandle real_trig_poly(std::vector<Point> freqs, std::vector<std::complex<double>> coeffs) {
  return component(trig_poly(std::move(freqs), std::move(coeffs)), 0).renamed("real-trig-poly");
}

FunctionHandle tensor_product(const std::vector<FunctionHandle>& factors) {
  if (factors.empty()) throw Error(ErrorCode::kShape, "tensor_product: no factors");
  bool complex_out = false;
  bool bounded = true;
  double bound = 1.0;
  std::vector<Interval> axes;
  for (const auto& f : factors) {
    if (f.dimension() != 1 || f.codomain_dim() > 2) {
      throw Error(ErrorCode::kShape, "tensor_product: factors must be scalar functions of one variable");
    }
    complex_out = complex_out || f.codomain_dim() == 2;
    axes.push_back(f.domain().axis(0));
    if (f.traits().growth && f.traits().growth->bounded()) {
      bound *= f.traits().growth->constant;
    } else {
      bounded = false;
    }
  }
  FunctionTraits traits;
  if (bounded) traits.growth = GrowthBound{bound, 0.0};
  const std::size_t m = complex_out ? 2 : 1;
  return FunctionHandle(
      "tensor", Region(std::move(axes)), m,
      [factors, m](std::span<const double> t) {
        std::complex<double> prod{1.0, 0.0};
        double upper = 1.0;
        double magnitude = 1.0;
        for (std::size_t i = 0; i < factors.size(); ++i) {
          const double p[1] = {t[i]};
          const Evaluation e = factors[i].evaluate_unchecked(p);
          const std::complex<double> z =
              e.value.size() == 2 ? std::complex<double>(e.value[0], e.value[1])
                                  : std::complex<double>(e.value[0], 0.0);
          const double dz = e.value.size() == 2 ? std::numbers::sqrt2 * e.error : e.error;
          prod *= z;
          upper *= std::abs(z) + dz;
          magnitude *= std::abs(z);
        }
        const double err = upper - magnitude;
        if (m == 2) return Evaluation{{prod.real(), prod.imag()}, err};
        return Evaluation{{prod.real()}, err};
      },
      traits);
}

const std::vector<std::string>& identifiers() {
  static const std::vector<std::string> ids = {
      "haraux-souplet", "ait-dads-phi",   "levitan-reciprocal", "nawrocki", "kuchi-c0",
      "trig-poly",      "real-trig-poly", "tensor",             "constant", "affine"};
  return ids;
}

}  // namespace aperlab::zoo
