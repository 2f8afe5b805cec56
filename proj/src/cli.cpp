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

#include "aperlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "aperlab/approx.hpp"
#include "aperlab/conv.hpp"
#include "aperlab/core.hpp"
#include "aperlab/detect.hpp"
#include "aperlab/metric.hpp"
#include "aperlab/pde.hpp"
#include "aperlab/zoo.hpp"

namespace aperlab::cli {
namespace {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path.empty() ? "config" : path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(join(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0) || !std::isfinite(v)) fail(path, "must be positive");
  return v;
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) fail(path, "must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

double number_or(const json& cfg, const std::string& path, const std::string& key, double fallback) {
  const json* f = optional_field(cfg, key);
  return f ? number(*f, join(path, key)) : fallback;
}

double positive_or(const json& cfg, const std::string& path, const std::string& key,
                   double fallback) {
  const json* f = optional_field(cfg, key);
  return f ? positive(*f, join(path, key)) : fallback;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index_path(path, i)));
  return out;
}

std::vector<Point> points(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(numbers(j[i], index_path(path, i)));
  return out;
}

std::vector<Interval> box(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected [[lo, hi], ...]");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = numbers(j[i], index_path(path, i));
    if (v.size() != 2 || !(v[0] <= v[1])) fail(index_path(path, i), "expected [lo, hi] with lo <= hi");
    out.push_back({v[0], v[1]});
  }
  return out;
}

std::vector<double> steps(const json& j, const std::string& path, std::size_t n) {
  std::vector<double> out;
  if (j.is_array()) {
    out = numbers(j, path);
    if (out.size() != n) fail(path, "expected one step per axis");
  } else {
    out.assign(n, number(j, path));
  }
  for (double s : out) {
    if (!(s > 0.0) || !std::isfinite(s)) fail(path, "must be positive");
  }
  return out;
}

std::complex<double> complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const auto v = numbers(j, path);
  if (v.size() != 2) fail(path, "expected a number or [re, im]");
  return {v[0], v[1]};
}

std::vector<double> matrix(const json& j, const std::string& path, std::size_t* dim) {
  if (!j.is_array() || j.empty()) fail(path, "expected a square matrix");
  const std::size_t m = j.size();
  std::vector<double> out;
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = numbers(j[i], index_path(path, i));
    if (row.size() != m) fail(index_path(path, i), "matrix must be square");
    out.insert(out.end(), row.begin(), row.end());
  }
  *dim = m;
  return out;
}

CompactWindow window(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected {\"box\": ..., \"step\": ...}");
  const auto b = box(require(j, path, "box"), join(path, "box"));
  return CompactWindow(b, steps(require(j, path, "step"), join(path, "step"), b.size()));
}

std::vector<CompactWindow> windows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of windows");
  std::vector<CompactWindow> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(window(j[i], index_path(path, i)));
  return out;
}

// ------------------------------------------------------------- functions

struct ParsedFunction {
  FunctionHandle f;
  std::optional<FunctionHandle> gradient;
};

FunctionHandle stack(std::string name, std::size_t n, std::vector<FunctionHandle> parts) {
  const std::size_t m = parts.size();
  return FunctionHandle(std::move(name), Region::whole(n), m,
                        [parts = std::move(parts)](std::span<const double> t) {
                          Evaluation out;
                          for (const auto& p : parts) {
                            const Evaluation e = p.evaluate(t);
                            out.value.push_back(e.value[0]);
                            out.error = std::max(out.error, e.error);
                          }
                          return out;
                        });
}

ParsedFunction parse_function(const json& j, const std::string& path,
                              const zoo::SeriesTruncation& trunc) {
  std::string id;
  if (j.is_string()) {
    id = j.get<std::string>();
  } else if (j.is_object()) {
    const json& f = require(j, path, "id");
    if (!f.is_string()) fail(join(path, "id"), "expected a string");
    id = f.get<std::string>();
  } else {
    fail(path, "expected an identifier or an object with \"id\"");
  }
  if (id == "haraux-souplet") return {zoo::haraux_souplet(trunc), std::nullopt};
  if (id == "ait-dads-phi") return {zoo::ait_dads_phi(trunc), std::nullopt};
  if (id == "levitan-reciprocal") return {zoo::levitan_reciprocal(), std::nullopt};
  if (id == "nawrocki") return {zoo::nawrocki(), std::nullopt};
  if (id == "kuchi-c0") {
    const json* n = optional_field(j, "n_max");
    return {zoo::kuchi_c0(n ? count(*n, join(path, "n_max")) : 1000), std::nullopt};
  }
  if (id == "constant") {
    const double c = number(require(j, path, "value"), join(path, "value"));
    const json* d = optional_field(j, "dim");
    const std::size_t n = d ? count(*d, join(path, "dim")) : 1;
    return {zoo::constant(c, n), zoo::constant(0.0, n, n)};
  }
  if (id == "affine") {
    auto v = numbers(require(j, path, "v"), join(path, "v"));
    if (v.empty()) fail(join(path, "v"), "expected a non-empty vector");
    const double b = number_or(j, path, "b", 0.0);
    std::vector<FunctionHandle> parts;
    for (double c : v) parts.push_back(zoo::constant(c, v.size()));
    const std::size_t n = v.size();
    return {zoo::affine(v, b), stack("grad affine", n, std::move(parts))};
  }
  if (id == "trig-poly" || id == "real-trig-poly") {
    const auto freqs = points(require(j, path, "freqs"), join(path, "freqs"));
    const json& cj = require(j, path, "coeffs");
    if (!cj.is_array() || cj.size() != freqs.size()) {
      fail(join(path, "coeffs"), "expected one coefficient per frequency");
    }
    std::vector<std::complex<double>> coeffs;
    for (std::size_t i = 0; i < cj.size(); ++i) {
      coeffs.push_back(complex_number(cj[i], index_path(join(path, "coeffs"), i)));
    }
    const std::size_t n = freqs[0].size();
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      if (freqs[i].size() != n) fail(index_path(join(path, "freqs"), i), "dimension mismatch");
    }
    if (id == "trig-poly") return {zoo::trig_poly(freqs, coeffs), std::nullopt};
    // d/dt_k Re sum c e^{i lambda.t} = Re sum (i lambda_k c) e^{i lambda.t}.
    std::vector<FunctionHandle> parts;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::complex<double>> dc;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        dc.push_back(std::complex<double>(0.0, freqs[i][k]) * coeffs[i]);
      }
      parts.push_back(zoo::real_trig_poly(freqs, dc));
    }
    return {zoo::real_trig_poly(freqs, coeffs), stack("grad real-trig-poly", n, std::move(parts))};
  }
  if (id == "tensor") {
    const json& fj = require(j, path, "factors");
    if (!fj.is_array() || fj.empty()) fail(join(path, "factors"), "expected a non-empty array");
    std::vector<FunctionHandle> factors;
    for (std::size_t i = 0; i < fj.size(); ++i) {
      factors.push_back(parse_function(fj[i], index_path(join(path, "factors"), i), trunc).f);
    }
    return {zoo::tensor_product(factors), std::nullopt};
  }
  fail(join(path, "id"), "unknown function '" + id + "'");
}

zoo::SeriesTruncation truncation(const json& cfg) {
  zoo::SeriesTruncation t;
  if (const json* tj = optional_field(cfg, "truncation")) {
    t.tol = positive_or(*tj, "truncation", "tol", t.tol);
    if (const json* cap = optional_field(*tj, "term_cap")) t.term_cap = count(*cap, "truncation.term_cap");
  }
  return t;
}

ParsedFunction main_function(const json& cfg) {
  return parse_function(require(cfg, "", "function"), "function", truncation(cfg));
}

// ------------------------------------------------------ relation, metric

Relation parse_relation(const json* j, const FunctionHandle& f) {
  const std::string path = "relation";
  if (!j) return Relation::identity();
  std::string kind;
  if (j->is_string()) {
    kind = j->get<std::string>();
  } else {
    const json& k = require(*j, path, "kind");
    if (!k.is_string()) fail(join(path, "kind"), "expected a string");
    kind = k.get<std::string>();
  }
  if (kind == "identity") return Relation::identity();
  if (kind == "zero") return Relation::zero();
  if (kind == "scale") return Relation::scale(complex_number(require(*j, path, "c"), join(path, "c")));
  if (kind == "shift") {
    if (const json* at = optional_field(*j, "offset_at")) {
      return Relation::shift(f.evaluate(numbers(*at, join(path, "offset_at"))).value);
    }
    return Relation::shift(numbers(require(*j, path, "offset"), join(path, "offset")));
  }
  if (kind == "linear") {
    std::size_t m = 0;
    auto a = matrix(require(*j, path, "matrix"), join(path, "matrix"), &m);
    return Relation::linear(m, std::move(a));
  }
  fail(join(path, "kind"), "unknown relation '" + kind + "'");
}

std::string kind_of(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  const json& k = require(j, path, "kind");
  if (!k.is_string()) fail(join(path, "kind"), "expected a string");
  return k.get<std::string>();
}

MetricSpec parse_metric(const json* j) {
  MetricSpec spec;
  if (!j) return spec;
  const std::string path = "metric";
  if (!j->is_object()) fail(path, "expected an object");
  if (const json* p = optional_field(*j, "phi")) {
    const std::string k = kind_of(*p, "metric.phi");
    if (k == "identity") {
      spec.phi = Phi::identity();
    } else if (k == "arctan") {
      spec.phi = Phi::arctan();
    } else if (k == "power") {
      spec.phi = Phi::power(positive(require(*p, "metric.phi", "exponent"), "metric.phi.exponent"));
    } else {
      fail("metric.phi.kind", "unknown phi '" + k + "'");
    }
  }
  if (const json* w = optional_field(*j, "weight")) {
    const std::string k = kind_of(*w, "metric.weight");
    if (k == "one") {
      spec.weight = Weight::one();
    } else if (k == "levitan-power") {
      spec.weight = Weight::levitan_power(positive(require(*w, "metric.weight", "eps0"),
                                                   "metric.weight.eps0"));
    } else {
      fail("metric.weight.kind", "unknown weight '" + k + "'");
    }
  }
  if (const json* n = optional_field(*j, "norm")) {
    const std::string k = kind_of(*n, "metric.norm");
    if (k == "sup") {
      spec.norm = Norm::sup();
    } else if (k == "l1") {
      spec.norm = Norm::l1();
    } else if (k == "arctan-sup") {
      spec.norm = Norm::arctan_sup();
    } else if (k == "weighted-sup") {
      const std::string nu = kind_of(require(*n, "metric.norm", "nu"), "metric.norm.nu");
      if (nu == "inverse-square") {
        spec.norm = Norm::weighted_sup(
            [](std::span<const double> t) { return 1.0 / (1.0 + norm2(t) * norm2(t)); }, 1.0,
            "inverse-square");
      } else if (nu == "linear") {
        spec.norm = Norm::weighted_sup([](std::span<const double> t) { return 1.0 + norm2(t); },
                                       std::nullopt, "linear");
      } else {
        fail("metric.norm.nu", "unknown weight function '" + nu + "'");
      }
    } else {
      fail("metric.norm.kind", "unknown norm '" + k + "'");
    }
  }
  return spec;
}

Kernel parse_kernel(const json& j, const std::string& path) {
  const std::string k = kind_of(j, path);
  if (k == "exp") {
    std::size_t m = 0;
    auto a = matrix(require(j, path, "matrix"), join(path, "matrix"), &m);
    return Kernel::exp_matrix(m, std::move(a), positive(require(j, path, "omega"), join(path, "omega")));
  }
  if (k == "gaussian") {
    const json* n = optional_field(j, "n");
    return Kernel::gaussian(positive(require(j, path, "t"), join(path, "t")),
                            n ? count(*n, join(path, "n")) : 1);
  }
  if (k == "biharmonic") {
    const json& pj = require(j, path, "part");
    if (!pj.is_string() || (pj != "value" && pj != "normal")) {
      fail(join(path, "part"), "expected \"value\" or \"normal\"");
    }
    const json* n = optional_field(j, "n");
    return Kernel::poisson_biharmonic(
        pj == "value" ? BiharmonicPart::kValue : BiharmonicPart::kNormal,
        positive(require(j, path, "y"), join(path, "y")), n ? count(*n, join(path, "n")) : 1);
  }
  fail(join(path, "kind"), "unknown kernel '" + k + "'");
}

// --------------------------------------------------------------- reports

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(std::size_t x) { return std::to_string(x); }
std::string fmt(long long x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

struct Table {
  std::string suffix;  ///< empty for the main table
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::vector<Table> tables;
  json summary = json::object();
  bool verdict = true;
};

std::vector<std::string> axis_header(const std::string& base, std::size_t n) {
  if (n == 1) return {base};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(base + std::to_string(i));
  return out;
}

void append(std::vector<std::string>& row, const std::vector<double>& values) {
  for (double v : values) row.push_back(fmt(v));
}

json defect_json(const DefectResult& d) {
  return {{"value", d.value},
          {"certified_slack", d.certified_slack},
          {"grid_points", d.grid_points},
          {"grid_limited", d.grid_limited}};
}

// -------------------------------------------------------------- commands

struct Setup {
  json cfg;
  ParsedFunction fn() const { return main_function(cfg); }
  Relation relation(const FunctionHandle& f) const {
    return parse_relation(optional_field(cfg, "relation"), f);
  }
  MetricSpec metric() const { return parse_metric(optional_field(cfg, "metric")); }
  CompactWindow window() const { return cli::window(require(cfg, "", "window"), "window"); }
  const json& section(const std::string& name) const {
    const json& s = require(cfg, "", name);
    if (!s.is_object()) fail(name, "expected an object");
    return s;
  }
};

Report cmd_eval(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("eval");
  const auto pts = points(require(sec, "eval", "points"), "eval.points");
  Report r;
  Table t;
  t.header = axis_header("t", f.dimension());
  const auto vh = axis_header("value", f.codomain_dim());
  t.header.insert(t.header.end(), vh.begin(), vh.end());
  t.header.push_back("error");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != f.dimension()) fail(index_path("eval.points", i), "dimension mismatch");
    const Evaluation e = eval_checked(f, pts[i]);
    std::vector<std::string> row;
    append(row, pts[i]);
    append(row, e.value);
    row.push_back(fmt(e.error));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  r.summary["points"] = pts.size();
  if (const json* cj = optional_field(sec, "compose")) {
    const std::string map = kind_of(require(*cj, "eval.compose", "map"), "eval.compose.map");
    LipschitzMap h;
    if (map == "abs") {
      h = {[](std::span<const double> y) { return Value{norm2(y)}; }, 1.0, 1, false, true};
    } else if (map == "arctan") {
      h = {[](std::span<const double> y) { return Value{std::atan(y[0])}; }, 1.0, 1, false, true};
    } else if (map == "sin") {
      h = {[](std::span<const double> y) { return Value{std::sin(y[0])}; }, 1.0, 1, false, true};
    } else {
      fail("eval.compose.map", "unknown map '" + map + "'");
    }
    const Point tau = numbers(require(*cj, "eval.compose", "tau"), "eval.compose.tau");
    const ComposeCheck c = lipschitz_compose_check(f, h, s.relation(f), tau, s.window(), s.metric());
    const bool holds = c.lhs <= c.rhs + c.composed.certified_slack + c.original.certified_slack;
    r.summary["compose"] = {{"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", holds}, {"map", map}};
    r.verdict = holds;
  }
  return r;
}

Report cmd_scan(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("scan");
  const double eps = positive(require(sec, "scan", "eps"), "scan.eps");
  ScanRange range;
  range.axes = box(require(sec, "scan", "range"), "scan.range");
  range.step = steps(require(sec, "scan", "step"), "scan.step", range.axes.size());
  if (const json* mp = optional_field(sec, "max_points")) range.max_points = count(*mp, "scan.max_points");
  DefectOptions opts;
  if (const json* l = optional_field(sec, "lipschitz")) opts.integrand_lipschitz = positive(*l, "scan.lipschitz");
  const AlmostPeriodReport rep =
      scan_almost_periods(f, s.relation(f), eps, s.window(), s.metric(), range, opts);
  Report r;
  Table t;
  t.header = axis_header("tau", range.axes.size());
  for (const char* h : {"defect", "slack", "accepted"}) t.header.push_back(h);
  for (const auto& e : rep.entries) {
    std::vector<std::string> row;
    append(row, e.tau);
    row.push_back(fmt(e.defect));
    row.push_back(fmt(e.slack));
    row.push_back(fmt(e.accepted));
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  bool dense = false;
  json l = nullptr;
  if (!rep.accepted.empty()) {
    const Density d = relative_density(rep);
    dense = d.dense;
    l = d.l;
  }
  r.summary["eps"] = eps;
  r.summary["accepted"] = rep.accepted.size();
  r.summary["scanned"] = rep.entries.size();
  r.summary["max_gap"] = rep.max_gap;
  r.summary["density_l"] = l;
  r.summary["dense"] = dense;
  r.summary["truncated"] = rep.truncated;
  r.summary["result"] = dense ? "dense-within-range" : "not-dense-within-range";
  r.verdict = dense;
  return r;
}

Report cmd_recur(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("recur");
  std::vector<Point> taus;
  std::vector<long long> labels;
  const json& tj = require(sec, "recur", "tau");
  if (const json* pw = optional_field(tj, "powers")) {
    const std::string p = "recur.tau.powers";
    const double base = positive(require(*pw, p, "base"), join(p, "base"));
    const double factor = number_or(*pw, p, "factor", 1.0);
    const json& from = require(*pw, p, "from");
    const json& to = require(*pw, p, "to");
    if (!from.is_number_integer() || !to.is_number_integer() || to.get<long long>() < from.get<long long>()) {
      fail(join(p, "to"), "expected integers with from <= to");
    }
    for (long long k = from.get<long long>(); k <= to.get<long long>(); ++k) {
      taus.push_back({factor * std::pow(base, static_cast<double>(k))});
      labels.push_back(k);
    }
  } else if (const json* list = optional_field(tj, "list")) {
    taus = points(*list, "recur.tau.list");
    for (std::size_t i = 0; i < taus.size(); ++i) labels.push_back(static_cast<long long>(i));
  } else {
    fail("recur.tau", "expected \"powers\" or \"list\"");
  }
  const json* wj = optional_field(sec, "windows");
  const std::vector<CompactWindow> ws = wj ? windows(*wj, "recur.windows")
                                           : std::vector<CompactWindow>{s.window()};
  std::string bound_kind = "none";
  double bound_slack = 0.0;
  if (const json* bj = optional_field(sec, "bound")) {
    bound_kind = kind_of(*bj, "recur.bound");
    if (bound_kind != "none" && bound_kind != "harmonic" && bound_kind != "rasx") {
      fail("recur.bound.kind", "unknown bound '" + bound_kind + "'");
    }
    bound_slack = bj->is_object() ? number_or(*bj, "recur.bound", "slack", 0.0) : 0.0;
  }
  // rasx: sup_{|t| <= T} |phi(t + 2^k) - phi(t) - phi(1)| <= pi^2 T^2 4^-k / 3 + pi T 2^-k.
  auto bound = [&](long long k, const CompactWindow& w) {
    const double kd = static_cast<double>(k);
    if (bound_kind == "harmonic") return std::numbers::pi / (kd + 1.0);
    if (bound_kind == "rasx") {
      double reach = 0.0;
      for (const Interval& iv : w.box()) reach = std::max({reach, std::abs(iv.lo), std::abs(iv.hi)});
      return std::numbers::pi * std::numbers::pi * reach * reach * std::pow(4.0, -kd) / 3.0 +
             std::numbers::pi * reach * std::pow(2.0, -kd);
    }
    return kInf;
  };
  const RecurrenceTable table = verify_recurrence(f, s.relation(f), taus, ws, s.metric());
  Report r;
  Table t;
  t.header = {"k"};
  const auto th = axis_header("tau", taus[0].size());
  t.header.insert(t.header.end(), th.begin(), th.end());
  for (const char* h : {"window", "defect", "slack", "bound"}) t.header.push_back(h);
  bool bounds_hold = true;
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const DefectResult& d = table.defects[k][j];
      const double b = bound(labels[k], ws[j]);
      if (bound_kind != "none") {
        bounds_hold = bounds_hold && d.value <= b + bound_slack;
        worst_ratio = std::max(worst_ratio, d.value / b);
      }
      std::vector<std::string> row{fmt(labels[k])};
      append(row, taus[k]);
      row.push_back(fmt(j));
      row.push_back(fmt(d.value));
      row.push_back(fmt(d.certified_slack));
      row.push_back(bound_kind == "none" ? "" : fmt(b));
      t.rows.push_back(std::move(row));
    }
  }
  r.tables.push_back(std::move(t));
  r.summary["bound"] = bound_kind;
  r.verdict = bounds_hold;
  if (bound_kind != "none") {
    r.summary["bounds_hold"] = bounds_hold;
    r.summary["worst_ratio"] = worst_ratio;
  }
  if (const json* e = optional_field(sec, "eps")) {
    const double eps = positive(*e, "recur.eps");
    const auto k0 = table.common_tail(eps);
    r.summary["eps"] = eps;
    r.summary["common_tail"] = k0 ? json(labels[*k0]) : json(nullptr);
    r.verdict = r.verdict && k0.has_value();
  }
  return r;
}

Report cmd_type1(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("type1");
  const auto freqs = numbers(require(sec, "type1", "freqs"), "type1.freqs");
  const double delta = positive(require(sec, "type1", "delta"), "type1.delta");
  const json& pj = require(sec, "type1", "p_max");
  if (!pj.is_number_integer() || pj.get<long long>() <= 0) fail("type1.p_max", "must be a positive integer");
  const auto eps_list = numbers(require(sec, "type1", "eps"), "type1.eps");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) fail(index_path("type1.eps", i), "must be positive");
  }
  const auto cands = levitan_type1_candidates(freqs, delta, pj.get<long long>());
  const CompactWindow w = s.window();
  const MetricSpec spec = s.metric();
  const Relation rho = s.relation(f);
  Report r;
  Table t;
  t.header = {"p", "tau", "phase", "phase_ok", "defect", "slack"};
  std::vector<double> defects;
  bool phases_ok = true;
  for (const auto& c : cands) {
    double phase = 0.0;
    for (double lam : freqs) phase = std::max(phase, mod_two_pi_distance(lam * c.tau));
    const bool ok = phase <= delta;
    phases_ok = phases_ok && ok;
    const DefectResult d = windowed_defect(f, rho, {c.tau}, w, spec);
    defects.push_back(d.value);
    t.rows.push_back({fmt(static_cast<long long>(c.p)), fmt(c.tau), fmt(phase), fmt(ok),
                      fmt(d.value), fmt(d.certified_slack)});
  }
  r.tables.push_back(std::move(t));
  json per_eps = json::array();
  bool all_found = true;
  for (double eps : eps_list) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (defects[i] <= eps && (!best || defects[i] < defects[*best])) best = i;
    }
    all_found = all_found && best.has_value();
    json e = {{"eps", eps}, {"found", best.has_value()}};
    if (best) {
      e["p"] = cands[*best].p;
      e["tau"] = cands[*best].tau;
      e["defect"] = defects[*best];
    }
    per_eps.push_back(e);
  }
  r.summary["candidates"] = cands.size();
  r.summary["phases_verified"] = phases_ok;
  r.summary["per_eps"] = per_eps;
  r.verdict = all_found && phases_ok;
  return r;
}

Report cmd_group(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("group");
  const auto taus = points(require(sec, "group", "taus"), "group.taus");
  const double eps = positive(require(sec, "group", "eps"), "group.eps");
  const GroupCheck g = check_group_structure(taus, f, s.relation(f), eps, s.window(), s.metric());
  Report r;
  Table t;
  t.header = {"checked", "skipped", "pass", "violator_defect"};
  t.rows.push_back({fmt(g.checked), fmt(g.skipped), fmt(g.pass), fmt(g.violator_defect)});
  r.tables.push_back(std::move(t));
  r.summary["pass"] = g.pass;
  r.summary["checked"] = g.checked;
  r.summary["skipped"] = g.skipped;
  r.summary["violator"] = g.violator ? json(*g.violator) : json(nullptr);
  r.summary["violator_defect"] = g.violator_defect;
  r.verdict = g.pass;
  return r;
}

Report cmd_normal(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("normal");
  const auto shifts = points(require(sec, "normal", "shifts"), "normal.shifts");
  const double tol = positive(require(sec, "normal", "tol"), "normal.tol");
  const json* ml = optional_field(sec, "min_length");
  const std::size_t min_length = ml ? count(*ml, "normal.min_length") : 2;
  const NormalityChain chain = normality_probe(f, shifts, s.window(), s.metric(), tol);
  Report r;
  Table t;
  t.header = {"i", "j", "defect"};
  for (std::size_t i = 0; i < chain.pair_defects.size(); ++i) {
    for (std::size_t j = 0; j < chain.pair_defects[i].size(); ++j) {
      if (i == j) continue;
      t.rows.push_back({fmt(i), fmt(j), fmt(chain.pair_defects[i][j])});
    }
  }
  r.tables.push_back(std::move(t));
  r.summary["indices"] = chain.indices;
  r.summary["greedy"] = chain.greedy;
  r.summary["tol"] = tol;
  r.verdict = chain.indices.size() >= min_length;
  return r;
}

Report cmd_approx(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("approx");
  std::vector<std::vector<Point>> sets;
  if (const json* fs = optional_field(sec, "freq_sets")) {
    if (!fs->is_array() || fs->empty()) fail("approx.freq_sets", "expected a non-empty array");
    for (std::size_t i = 0; i < fs->size(); ++i) {
      sets.push_back(points((*fs)[i], index_path("approx.freq_sets", i)));
    }
  } else {
    sets.push_back(points(require(sec, "approx", "freqs"), "approx.freqs"));
  }
  const CompactWindow w = s.window();
  const MetricSpec spec = s.metric();
  Report r;
  Table t;
  t.header = {"set"};
  const auto fh = axis_header("freq", sets[0][0].size());
  t.header.insert(t.header.end(), fh.begin(), fh.end());
  t.header.push_back("re");
  t.header.push_back("im");
  std::vector<FunctionHandle> polys;
  json fits = json::array();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const FitResult fit = fit_trig_poly(f, w, sets[k], spec);
    for (std::size_t j = 0; j < fit.freqs.size(); ++j) {
      std::vector<std::string> row{fmt(k)};
      append(row, fit.freqs[j]);
      row.push_back(fmt(fit.coeffs[j].real()));
      row.push_back(fmt(fit.coeffs[j].imag()));
      t.rows.push_back(std::move(row));
    }
    fits.push_back({{"condition", fit.condition}, {"residual", defect_json(fit.residual)}});
    polys.push_back(fit.polynomial());
  }
  r.tables.push_back(std::move(t));
  r.summary["fits"] = fits;
  if (const json* th = optional_field(sec, "threshold")) {
    const double threshold = positive(*th, "approx.threshold");
    const json* wj = optional_field(sec, "windows");
    const std::vector<CompactWindow> ws = wj ? windows(*wj, "approx.windows")
                                             : std::vector<CompactWindow>{w};
    const StrongApproxTable table = levitan_strong_approx_check(f, polys, ws, spec, threshold);
    Table e;
    e.suffix = "errors";
    e.header = {"set", "window", "error", "slack"};
    for (std::size_t k = 0; k < table.errors.size(); ++k) {
      for (std::size_t j = 0; j < table.errors[k].size(); ++j) {
        e.rows.push_back({fmt(k), fmt(j), fmt(table.errors[k][j].value),
                          fmt(table.errors[k][j].certified_slack)});
      }
    }
    r.tables.push_back(std::move(e));
    r.summary["threshold"] = threshold;
    r.summary["monotone"] = table.monotone;
    r.summary["converged"] = table.converged;
    r.verdict = table.pass;
  }
  return r;
}

Report cmd_conv(const Setup& s) {
  const FunctionHandle f = s.fn().f;
  const json& sec = s.section("conv");
  const Kernel k = parse_kernel(require(sec, "conv", "kernel"), "conv.kernel");
  const double tail_tol = positive_or(sec, "conv", "tail_tol", 1e-9);
  Report r;
  Table t;
  t.header = axis_header("t", f.dimension());
  const auto vh = axis_header("value", f.codomain_dim());
  t.header.insert(t.header.end(), vh.begin(), vh.end());
  for (const char* h : {"error", "truncation_radius"}) t.header.push_back(h);
  if (const json* pj = optional_field(sec, "points")) {
    const auto pts = points(*pj, "conv.points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != f.dimension()) fail(index_path("conv.points", i), "dimension mismatch");
      const ConvolutionResult c = k.one_sided() ? infinite_convolution(k, f, pts[i][0], tail_tol)
                                                : l1_convolution(k, f, pts[i], tail_tol);
      std::vector<std::string> row;
      append(row, pts[i]);
      append(row, c.value);
      row.push_back(fmt(c.error));
      row.push_back(fmt(c.truncation_radius));
      t.rows.push_back(std::move(row));
    }
  }
  r.tables.push_back(std::move(t));
  r.summary["kernel"] = k.describe();
  r.summary["l1_norm"] = k.l1_norm();
  if (const json* pj = optional_field(sec, "propagation")) {
    const std::string p = "conv.propagation";
    const Point tau = numbers(require(*pj, p, "tau"), join(p, "tau"));
    const CompactWindow enlarged = window(require(*pj, p, "enlarged"), join(p, "enlarged"));
    const PropagationCheck c =
        propagation_check(k, f, s.relation(f), tau, s.window(), enlarged, {s.metric(), tail_tol});
    r.summary["propagation"] = {{"lhs", c.lhs},
                                {"rhs", c.rhs},
                                {"slack", c.slack},
                                {"data_defect", c.data_defect},
                                {"tail_term", c.tail_term},
                                {"grid_correction", c.grid_correction},
                                {"margin", c.margin},
                                {"grid_limited", c.grid_limited},
                                {"holds", c.holds()}};
    r.verdict = c.holds();
  }
  return r;
}

Formula parse_formula(const json& j) {
  if (!j.is_string()) fail("pde.formula", "expected a string");
  const std::string s = j.get<std::string>();
  if (s == "heat") return Formula::kHeat;
  if (s == "dalembert") return Formula::kDalembert;
  if (s == "kirchhoff") return Formula::kKirchhoff3d;
  if (s == "poisson") return Formula::kPoisson2d;
  if (s == "biharmonic") return Formula::kBiharmonic;
  fail("pde.formula", "unknown formula '" + s + "'");
}

Report cmd_pde(const Setup& s) {
  const json& sec = s.section("pde");
  const zoo::SeriesTruncation trunc = truncation(s.cfg);
  PdeProblem problem;
  problem.formula = parse_formula(require(sec, "pde", "formula"));
  const json& data = require(sec, "pde", "data");
  const ParsedFunction first = parse_function(require(data, "pde.data", "first"), "pde.data.first", trunc);
  problem.first = first.f;
  if (const json* g = optional_field(data, "gradient")) {
    if (g->is_string() && *g == "auto") {
      if (!first.gradient) fail("pde.data.gradient", "no closed-form gradient for this function");
      problem.gradient = first.gradient;
    } else {
      problem.gradient = parse_function(*g, "pde.data.gradient", trunc).f;
    }
  }
  if (const json* g = optional_field(data, "second")) {
    problem.second = parse_function(*g, "pde.data.second", trunc).f;
  }
  problem.speed = positive_or(sec, "pde", "speed", 1.0);
  problem.time = positive_or(sec, "pde", "time", 1.0);
  problem.tol = positive_or(sec, "pde", "tol", 1e-9);
  Report r;
  Table t;
  const FunctionHandle u = problem.solution();
  t.header = axis_header("x", u.dimension());
  for (const char* h : {"u", "error"}) t.header.push_back(h);
  if (const json* pj = optional_field(sec, "points")) {
    const auto pts = points(*pj, "pde.points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != u.dimension()) fail(index_path("pde.points", i), "dimension mismatch");
      const Evaluation e = u.evaluate(pts[i]);
      std::vector<std::string> row;
      append(row, pts[i]);
      row.push_back(fmt(e.value[0]));
      row.push_back(fmt(e.error));
      t.rows.push_back(std::move(row));
    }
  }
  r.tables.push_back(std::move(t));
  if (const json* rj = optional_field(sec, "residual")) {
    const std::string p = "pde.residual";
    const auto hs = numbers(require(*rj, p, "steps"), join(p, "steps"));
    const Point x = numbers(require(*rj, p, "point"), join(p, "point"));
    const double t0 = positive(require(*rj, p, "time"), join(p, "time"));
    SpaceTimeFunction sol;
    PdeKind kind = PdeKind::wave(problem.speed);
    switch (problem.formula) {
      case Formula::kHeat:
        kind = PdeKind::heat();
        sol = [&](const Point& y, double tt) { return heat_apply(*problem.first, tt, y, problem.tol).value[0]; };
        break;
      case Formula::kDalembert:
        sol = [&](const Point& y, double tt) {
          return dalembert(*problem.first, *problem.second, problem.speed, y[0], tt, problem.tol).value[0];
        };
        break;
      case Formula::kKirchhoff3d:
      case Formula::kPoisson2d: {
        sol = [&](const Point& y, double tt) {
          PdeProblem at = problem;
          at.time = tt;
          return at.solution().evaluate(y).value[0];
        };
        break;
      }
      case Formula::kBiharmonic: fail("pde.residual", "no evolution equation for the biharmonic problem");
    }
    Table rt;
    rt.suffix = "residual";
    rt.header = {"h", "residual"};
    std::vector<double> res;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (!(hs[i] > 0.0)) fail(index_path(join(p, "steps"), i), "must be positive");
      res.push_back(residual_check(sol, kind, x, t0, hs[i]));
      rt.rows.push_back({fmt(hs[i]), fmt(res.back())});
    }
    r.tables.push_back(std::move(rt));
    json orders = json::array();
    double min_order = kInf;
    for (std::size_t i = 1; i < res.size(); ++i) {
      const double o = std::log(std::abs(res[i - 1] / res[i])) / std::log(hs[i - 1] / hs[i]);
      orders.push_back(o);
      min_order = std::min(min_order, o);
    }
    r.summary["residual_orders"] = orders;
    if (const json* mo = optional_field(*rj, "min_order")) {
      r.verdict = r.verdict && min_order >= number(*mo, join(p, "min_order"));
    }
  }
  if (const json* pj = optional_field(sec, "propagation")) {
    const std::string p = "pde.propagation";
    const Point tau = numbers(require(*pj, p, "tau"), join(p, "tau"));
    const CompactWindow enlarged = window(require(*pj, p, "enlarged"), join(p, "enlarged"));
    const PdePropagation c = pde_propagation_check(problem, s.relation(*problem.first), tau,
                                                   s.window(), enlarged, s.metric());
    r.summary["propagation"] = {{"lhs", c.lhs},
                                {"rhs", c.rhs},
                                {"slack", c.slack},
                                {"data_defects", c.data_defects},
                                {"mass_factors", c.mass_factors},
                                {"tail_term", c.tail_term},
                                {"grid_correction", c.grid_correction},
                                {"grid_limited", c.grid_limited},
                                {"holds", c.holds()}};
    r.verdict = r.verdict && c.holds();
  }
  return r;
}

Report cmd_witness(const Setup& s) {
  const json& sec = s.section("witness");
  const Point omega = numbers(require(sec, "witness", "omega"), "witness.omega");
  const double eta = positive(require(sec, "witness", "eta"), "witness.eta");
  const double delta = positive(require(sec, "witness", "delta"), "witness.delta");
  const auto b = box(require(sec, "witness", "box"), "witness.box");
  const double step = positive(require(sec, "witness", "step"), "witness.step");
  const double min_distance = number_or(sec, "witness", "min_distance", delta);
  const auto w = bogolyubov_witness(omega, eta, delta, b, step);
  Report r;
  Table t;
  t.header = axis_header("tau", omega.size());
  for (const char* h : {"phase", "lattice_distance", "phase_ok", "distance_ok"}) t.header.push_back(h);
  bool ok = false;
  if (w) {
    double dot = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) dot += omega[i] * w->tau[i];
    const double phase = mod_two_pi_distance(dot);
    const double dist = lattice_distance(w->tau);
    const bool phase_ok = phase <= eta;
    const bool dist_ok = dist >= min_distance && dist > delta;
    ok = phase_ok && dist_ok;
    std::vector<std::string> row;
    append(row, w->tau);
    row.push_back(fmt(phase));
    row.push_back(fmt(dist));
    row.push_back(fmt(phase_ok));
    row.push_back(fmt(dist_ok));
    t.rows.push_back(std::move(row));
    r.summary["tau"] = w->tau;
    r.summary["phase"] = phase;
    r.summary["lattice_distance"] = dist;
  }
  r.tables.push_back(std::move(t));
  r.summary["found"] = w.has_value();
  r.summary["min_distance"] = min_distance;
  r.verdict = ok;
  return r;
}

using Handler = Report (*)(const Setup&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"eval", cmd_eval},     {"scan", cmd_scan},       {"recur", cmd_recur},
      {"type1", cmd_type1},   {"group", cmd_group},     {"normal", cmd_normal},
      {"approx", cmd_approx}, {"conv", cmd_conv},       {"pde", cmd_pde},
      {"witness", cmd_witness}};
  return table;
}

void write_csv(const std::filesystem::path& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

}  // namespace

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> table = {
      {"eval", "evaluate a function at points; optional Lipschitz composition check",
       {"eval_checked", "haraux_souplet", "ait_dads_phi", "levitan_reciprocal", "nawrocki",
        "kuchi_c0", "trig_poly", "tensor_product", "lipschitz_compose_check"}},
      {"scan", "scan a range of shifts for eps-almost periods",
       {"make_grid", "apply_relation", "windowed_defect", "scan_almost_periods",
        "relative_density"}},
      {"recur", "defect table along a sequence of shifts and windows",
       {"verify_recurrence", "windowed_defect"}},
      {"type1", "continued-fraction candidates and their defects",
       {"levitan_type1_candidates", "windowed_defect"}},
      {"group", "closure of an eta-set under sums and differences", {"check_group_structure"}},
      {"normal", "Cauchy subsequence search among translates", {"normality_probe", "approx_error"}},
      {"approx", "trigonometric least-squares fits and strong approximation tables",
       {"fit_trig_poly", "approx_error", "levitan_strong_approx_check"}},
      {"conv", "kernel convolutions and the propagation inequality",
       {"infinite_convolution", "l1_convolution", "propagation_check"}},
      {"pde", "explicit solution formulas, residuals and propagation",
       {"heat_apply", "dalembert", "kirchhoff3d", "poisson2d", "biharmonic_halfspace",
        "residual_check", "pde_propagation_check"}},
      {"witness", "Bogolyubov witness search", {"bogolyubov_witness"}},
  };
  return table;
}

int run(const std::string& command, const std::string& config_text,
        const std::filesystem::path& out_dir, std::ostream& diag) {
  try {
    const auto it = handlers().find(command);
    if (it == handlers().end()) fail("command", "unknown command '" + command + "'");
    Setup setup;
    try {
      setup.cfg = json::parse(config_text);
    } catch (const json::parse_error& e) {
      fail("config", std::string("invalid JSON: ") + e.what());
    }
    if (!setup.cfg.is_object()) fail("config", "expected a JSON object");
    if (const json* c = optional_field(setup.cfg, "command")) {
      if (!c->is_string() || *c != command) fail("command", "config is for a different command");
    }
    bool expect = true;
    if (const json* e = optional_field(setup.cfg, "expect")) {
      if (!e->is_boolean()) fail("expect", "expected true or false");
      expect = e->get<bool>();
    }
    Report report = it->second(setup);
    const bool pass = report.verdict == expect;

    std::filesystem::create_directories(out_dir);
    for (const auto& t : report.tables) {
      const std::string name = t.suffix.empty() ? command : command + "_" + t.suffix;
      write_csv(out_dir / (name + ".csv"), t);
    }
    json summary = std::move(report.summary);
    summary["schema"] = "1";
    summary["command"] = command;
    summary["expect"] = expect;
    summary["verdict"] = pass ? "pass" : "fail";
    std::ofstream js(out_dir / (command + ".json"), std::ios::binary);
    js << summary.dump(2) << "\n";
    if (!js) throw std::runtime_error("cannot write report JSON");
    return pass ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << "\n";
  } catch (const Error& e) {
    diag << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
  }
  return kExitError;
}

int run_file(const std::string& command, const std::filesystem::path& config,
             const std::filesystem::path& out_dir, std::ostream& diag) {
  std::ifstream in(config, std::ios::binary);
  if (!in) {
    diag << "config error: cannot read " << config.string() << "\n";
    return kExitError;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return run(command, text.str(), out_dir, diag);
}

}  // namespace aperlab::cli
