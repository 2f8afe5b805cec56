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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <utility>

#include "aperlab/cli.hpp"
#include "aperlab/conv.hpp"
#include "aperlab/detect.hpp"
#include "aperlab/metric.hpp"
#include "aperlab/parallel.hpp"
#include "aperlab/pde.hpp"
#include "aperlab/zoo.hpp"

namespace py = pybind11;
using namespace aperlab;

namespace {

using Box = std::vector<std::pair<double, double>>;

py::tuple evaluation(const Evaluation& e) { return py::make_tuple(e.value, e.error); }

std::vector<Interval> intervals(const Box& box) {
  std::vector<Interval> out;
  for (const auto& [lo, hi] : box) out.push_back({lo, hi});
  return out;
}

MetricSpec make_metric(const std::string& phi, double exponent, const std::string& norm,
                       std::optional<double> eps0) {
  MetricSpec spec;
  if (phi == "identity") {
    spec.phi = Phi::identity();
  } else if (phi == "power") {
    spec.phi = Phi::power(exponent);
  } else if (phi == "arctan") {
    spec.phi = Phi::arctan();
  } else {
    throw py::value_error("phi must be identity, power or arctan");
  }
  if (norm == "sup") {
    spec.norm = Norm::sup();
  } else if (norm == "l1") {
    spec.norm = Norm::l1();
  } else if (norm == "arctan-sup") {
    spec.norm = Norm::arctan_sup();
  } else {
    throw py::value_error("norm must be sup, l1 or arctan-sup");
  }
  if (eps0) spec.weight = Weight::levitan_power(*eps0);
  return spec;
}

}  // namespace

PYBIND11_MODULE(_aperlab, m) {
  m.doc() = "aperlab core bindings";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));

  py::class_<FunctionHandle>(m, "FunctionHandle")
      .def_property_readonly("name", &FunctionHandle::name)
      .def_property_readonly("dimension", &FunctionHandle::dimension)
      .def_property_readonly("codomain_dim", &FunctionHandle::codomain_dim)
      .def("evaluate",
           [](const FunctionHandle& f, const Point& t) { return evaluation(f.evaluate(t)); },
           py::arg("t"), "Returns (value, certified error).")
      .def("__call__", [](const FunctionHandle& f, double t) { return f(t); })
      .def("__repr__", [](const FunctionHandle& f) { return "<FunctionHandle " + f.name() + ">"; });

  auto zoo_m = m.def_submodule("zoo", "function zoo");
  zoo_m.def("haraux_souplet",
            [](double tol, std::size_t cap) { return zoo::haraux_souplet({tol, cap}); },
            py::arg("tol") = zoo::SeriesTruncation{}.tol,
            py::arg("term_cap") = zoo::SeriesTruncation{}.term_cap);
  zoo_m.def("ait_dads_phi",
            [](double tol, std::size_t cap) { return zoo::ait_dads_phi({tol, cap}); },
            py::arg("tol") = zoo::SeriesTruncation{}.tol,
            py::arg("term_cap") = zoo::SeriesTruncation{}.term_cap);
  zoo_m.def("levitan_reciprocal", &zoo::levitan_reciprocal);
  zoo_m.def("nawrocki", &zoo::nawrocki);
  zoo_m.def("kuchi_c0", &zoo::kuchi_c0, py::arg("n_max") = 1000);
  zoo_m.def("trig_poly", &zoo::trig_poly, py::arg("freqs"), py::arg("coeffs"));
  zoo_m.def("real_trig_poly", &zoo::real_trig_poly, py::arg("freqs"), py::arg("coeffs"));
  zoo_m.def("constant", &zoo::constant, py::arg("c"), py::arg("n") = 1, py::arg("m") = 1);
  zoo_m.def("affine", &zoo::affine, py::arg("v"), py::arg("b") = 0.0);
  zoo_m.def("tensor_product", &zoo::tensor_product, py::arg("factors"));

  py::class_<Relation>(m, "Relation")
      .def_static("identity", &Relation::identity)
      .def_static("scale", &Relation::scale, py::arg("c"))
      .def_static("shift", &Relation::shift, py::arg("offset"))
      .def_static("linear", &Relation::linear, py::arg("m"), py::arg("row_major"))
      .def_static("zero", &Relation::zero);

  py::class_<CompactWindow>(m, "CompactWindow")
      .def(py::init([](const Box& box, const std::vector<double>& step) {
             return CompactWindow(intervals(box), step);
           }),
           py::arg("box"), py::arg("step"))
      .def_static("interval", &CompactWindow::interval, py::arg("a"), py::arg("b"), py::arg("step"))
      .def_static("cube", &CompactWindow::cube, py::arg("n"), py::arg("a"), py::arg("b"),
                  py::arg("step"))
      .def_static("point", &CompactWindow::point, py::arg("p"));

  py::class_<MetricSpec>(m, "MetricSpec");
  m.def("metric", &make_metric, py::arg("phi") = "identity", py::arg("exponent") = 1.0,
        py::arg("norm") = "sup", py::arg("eps0") = std::nullopt,
        "Metric spec; eps0 selects the per-window weight N^(-2-eps0).");

  py::class_<DefectResult>(m, "DefectResult")
      .def_readonly("value", &DefectResult::value)
      .def_readonly("certified_slack", &DefectResult::certified_slack)
      .def_readonly("grid_points", &DefectResult::grid_points)
      .def_readonly("grid_limited", &DefectResult::grid_limited);

  m.def("windowed_defect",
        [](const FunctionHandle& f, const Relation& rho, const Point& tau, const CompactWindow& w,
           const MetricSpec& spec) { return windowed_defect(f, rho, tau, w, spec); },
        py::arg("f"), py::arg("rho"), py::arg("tau"), py::arg("window"),
        py::arg("spec") = MetricSpec::sup());
  m.def("approx_error",
        [](const FunctionHandle& f, const FunctionHandle& p, const CompactWindow& w,
           const MetricSpec& spec) { return approx_error(f, p, w, spec); },
        py::arg("f"), py::arg("p"), py::arg("window"),
        py::arg("spec") = MetricSpec::sup());

  m.def("scan_almost_periods",
        [](const FunctionHandle& f, const Relation& rho, double eps, const CompactWindow& w,
           const Box& range, const std::vector<double>& step, const MetricSpec& spec) {
          const auto r = scan_almost_periods(f, rho, eps, w, spec, {intervals(range), step});
          py::dict d;
          d["accepted"] = r.accepted;
          d["scanned"] = r.entries.size();
          d["max_gap"] = r.max_gap;
          d["dense"] = r.dense_verdict;
          d["truncated"] = r.truncated;
          return d;
        },
        py::arg("f"), py::arg("rho"), py::arg("eps"), py::arg("window"), py::arg("range"),
        py::arg("step"), py::arg("spec") = MetricSpec::sup());

  m.def("levitan_type1_candidates",
        [](const std::vector<double>& freqs, double delta, std::int64_t p_max) {
          py::list out;
          for (const auto& c : levitan_type1_candidates(freqs, delta, p_max)) {
            out.append(py::make_tuple(c.p, c.tau, c.phase));
          }
          return out;
        },
        py::arg("freqs"), py::arg("delta"), py::arg("p_max"), "Returns [(p, tau, phase)].");
  m.def("mod_two_pi_distance", &mod_two_pi_distance);
  m.def("lattice_distance", &lattice_distance);
  m.def("bogolyubov_witness",
        [](const Point& omega, double eta, double delta, const Box& box,
           double step) -> py::object {
          const auto w = bogolyubov_witness(omega, eta, delta, intervals(box), step);
          if (!w) return py::none();
          return py::make_tuple(w->tau, w->phase, w->lattice_distance);
        },
        py::arg("omega"), py::arg("eta"), py::arg("delta"), py::arg("box"), py::arg("step"));

  py::class_<Kernel>(m, "Kernel")
      .def_static("exp_matrix", &Kernel::exp_matrix, py::arg("m"), py::arg("matrix"),
                  py::arg("omega"))
      .def_static("gaussian", &Kernel::gaussian, py::arg("t"), py::arg("n"))
      .def_property_readonly("l1_norm", &Kernel::l1_norm)
      .def("tail", &Kernel::tail, py::arg("a"))
      .def("__repr__", &Kernel::describe);

  m.def("infinite_convolution",
        [](const Kernel& k, const FunctionHandle& f, double t, double tol) {
          const auto r = infinite_convolution(k, f, t, tol);
          return py::make_tuple(r.value, r.error);
        },
        py::arg("kernel"), py::arg("f"), py::arg("t"), py::arg("tail_tol") = 1e-9);
  m.def("l1_convolution",
        [](const Kernel& k, const FunctionHandle& f, const Point& t, double tol) {
          const auto r = l1_convolution(k, f, t, tol);
          return py::make_tuple(r.value, r.error);
        },
        py::arg("kernel"), py::arg("f"), py::arg("t"), py::arg("tail_tol") = 1e-9);

  m.def("heat_apply",
        [](const FunctionHandle& f, double t, const Point& x, double tol) {
          const auto r = heat_apply(f, t, x, tol);
          return py::make_tuple(r.value, r.error);
        },
        py::arg("f"), py::arg("t"), py::arg("x"), py::arg("tol") = 1e-9);
  m.def("dalembert",
        [](const FunctionHandle& f, const FunctionHandle& g, double a, double x, double t,
           double tol) { return evaluation(dalembert(f, g, a, x, t, tol)); },
        py::arg("f"), py::arg("g"), py::arg("a"), py::arg("x"), py::arg("t"),
        py::arg("quad_tol") = 1e-12);
  m.def("biharmonic_halfspace",
        [](const FunctionHandle& g0, const FunctionHandle& g1, const Point& x, double y,
           double tol) {
          const auto r = biharmonic_halfspace(g0, g1, x, y, tol);
          return py::make_tuple(r.value, r.error);
        },
        py::arg("g0"), py::arg("g1"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-8);

  m.def("run_cli",
        [](const std::string& command, const std::string& config, const std::string& out_dir) {
          std::ostringstream diag;
          const int rc = cli::run(command, config, out_dir, diag);
          return py::make_tuple(rc, diag.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"),
        "Runs one CLI command on a JSON config string; returns (exit code, diagnostics).");
}
