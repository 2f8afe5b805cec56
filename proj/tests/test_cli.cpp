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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aperlab/cli.hpp"
#include "aperlab/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("aperlab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Case {
  const char* command;
  const char* config;
};

// One small configuration per command. Every one is expected to pass.
const Case kCases[] = {
    {"eval", R"({"function": "ait-dads-phi",
                 "eval": {"points": [[0], [1], [2.5]],
                          "compose": {"map": "abs", "tau": [1024]}},
                 "window": {"box": [[0, 1]], "step": 0.01}})"},
    {"scan", R"({"function": {"id": "trig-poly", "freqs": [[1]], "coeffs": [[1, 0]]},
                 "window": {"box": [[-5, 5]], "step": 0.01},
                 "scan": {"eps": 1e-9, "range": [[-62.83185307179586, 62.83185307179586]],
                          "step": 0.7853981633974483}})"},
    {"recur", R"({"function": "ait-dads-phi",
                  "relation": {"kind": "shift", "offset_at": [1]},
                  "recur": {"tau": {"powers": {"base": 2, "from": 6, "to": 14}},
                            "windows": [{"box": [[0, 1]], "step": 0.001}],
                            "bound": {"kind": "rasx", "slack": 1e-8}}})"},
    {"type1", R"({"function": "levitan-reciprocal",
                  "window": {"box": [[-10, 10]], "step": 0.01},
                  "type1": {"freqs": [1, 1.4142135623730951], "delta": 0.3, "p_max": 1000,
                            "eps": [0.5]}})"},
    {"group", R"({"function": {"id": "trig-poly", "freqs": [[1]], "coeffs": [1]},
                  "window": {"box": [[-3, 3]], "step": 0.1},
                  "group": {"taus": [[6.283185307179586], [12.566370614359172]], "eps": 1e-9}})"},
    {"normal", R"({"function": {"id": "trig-poly", "freqs": [[1]], "coeffs": [1]},
                   "window": {"box": [[0, 5]], "step": 0.1},
                   "normal": {"shifts": [[6.283185307179586], [1], [12.566370614359172]],
                              "tol": 1e-9}})"},
    {"approx", R"({"function": "haraux-souplet",
                   "window": {"box": [[-4, 4]], "step": 0.01},
                   "approx": {"freq_sets": [[[0], [1], [-1]], [[0], [1], [-1], [0.5], [-0.5]]],
                              "threshold": 1.0,
                              "windows": [{"box": [[-4, 4]], "step": 0.01}]}})"},
    {"conv", R"({"function": {"id": "real-trig-poly", "freqs": [[1]], "coeffs": [1]},
                 "window": {"box": [[0, 10]], "step": 0.1},
                 "conv": {"kernel": {"kind": "exp", "matrix": [[1]], "omega": 1},
                          "points": [[0], [1]],
                          "propagation": {"tau": [6.283185307179586],
                                          "enlarged": {"box": [[-30, 10]], "step": 0.1}}}})"},
    {"pde", R"({"function": "constant",
                "window": {"box": [[0, 5]], "step": 0.05},
                "pde": {"formula": "dalembert", "speed": 2, "time": 1,
                        "data": {"first": {"id": "real-trig-poly", "freqs": [[1]], "coeffs": [1]},
                                 "second": {"id": "constant", "value": 0}},
                        "points": [[0], [0.5]],
                        "residual": {"steps": [0.1, 0.05, 0.025], "point": [0.3], "time": 1,
                                     "min_order": 1.9},
                        "propagation": {"tau": [6.283185307179586],
                                        "enlarged": {"box": [[-2, 7]], "step": 0.05}}}})"},
    {"witness", R"({"witness": {"omega": [1, 1.4142135623730951], "eta": 0.05, "delta": 0.2,
                                "box": [[0, 10], [0, 10]], "step": 0.05, "min_distance": 0.45}})"},
};

}  // namespace

TEST_CASE("the command table covers every public operation") {
  const std::set<std::string> expected = {
      "eval_checked", "make_grid", "apply_relation", "haraux_souplet", "ait_dads_phi",
      "levitan_reciprocal", "nawrocki", "kuchi_c0", "trig_poly", "tensor_product",
      "windowed_defect", "approx_error", "lipschitz_compose_check", "scan_almost_periods",
      "relative_density", "verify_recurrence", "levitan_type1_candidates",
      "check_group_structure", "normality_probe", "bogolyubov_witness", "fit_trig_poly",
      "levitan_strong_approx_check", "infinite_convolution", "l1_convolution",
      "propagation_check", "heat_apply", "dalembert", "kirchhoff3d", "poisson2d",
      "biharmonic_halfspace", "residual_check", "pde_propagation_check"};
  std::set<std::string> covered;
  for (const auto& c : aperlab::cli::commands()) covered.insert(c.operations.begin(), c.operations.end());
  for (const auto& op : expected) {
    INFO(op);
    CHECK(covered.count(op) == 1);
  }
}

TEST_CASE("every command runs a small configuration to a pass verdict") {
  for (const Case& c : kCases) {
    INFO(c.command);
    const fs::path out = scratch(c.command);
    std::ostringstream diag;
    const int rc = aperlab::cli::run(c.command, c.config, out, diag);
    INFO(diag.str());
    CHECK(rc == aperlab::cli::kExitPass);
    REQUIRE(fs::exists(out / (std::string(c.command) + ".json")));
    REQUIRE(fs::exists(out / (std::string(c.command) + ".csv")));
    const json summary = json::parse(slurp(out / (std::string(c.command) + ".json")));
    CHECK(summary.at("schema") == "1");
    CHECK(summary.at("command") == c.command);
    CHECK(summary.at("verdict") == "pass");
    fs::remove_all(out);
  }
}

TEST_CASE("recur rasx table") {
  const fs::path out = scratch("recur_rasx");
  std::ostringstream diag;
  REQUIRE(aperlab::cli::run("recur", kCases[2].config, out, diag) == aperlab::cli::kExitPass);
  const std::string csv = slurp(out / "recur.csv");
  CHECK(csv.rfind("k,tau,window,defect,slack,bound\n", 0) == 0);
  const json summary = json::parse(slurp(out / "recur.json"));
  CHECK(summary.at("bounds_hold") == true);
  CHECK(summary.at("worst_ratio").get<double>() <= 1.0);
  fs::remove_all(out);
}

TEST_CASE("expect false inverts the exit code") {
  const fs::path out = scratch("expect");
  std::ostringstream diag;
  const char* cfg = R"({"function": {"id": "trig-poly", "freqs": [[1]], "coeffs": [1]},
                        "window": {"box": [[-3, 3]], "step": 0.1}, "expect": false,
                        "group": {"taus": [[3.141592653589793]], "eps": 1e-9}})";
  CHECK(aperlab::cli::run("group", cfg, out, diag) == aperlab::cli::kExitPass);
  const json summary = json::parse(slurp(out / "group.json"));
  CHECK(summary.at("pass") == false);
  fs::remove_all(out);
}

TEST_CASE("configuration errors exit with 2 and name the field") {
  const fs::path out = scratch("bad");
  std::ostringstream diag;
  const char* cfg = R"({"function": {"id": "trig-poly", "freqs": [[1]], "coeffs": [[1, 0]]},
                        "window": {"box": [[-5, 5]], "step": 0.01},
                        "scan": {"eps": 1e-9, "range": [[0, 10]], "step": -0.5}})";
  CHECK(aperlab::cli::run("scan", cfg, out, diag) == aperlab::cli::kExitError);
  CHECK(diag.str().find("scan.step") != std::string::npos);

  std::ostringstream diag2;
  CHECK(aperlab::cli::run("scan", "{not json", out, diag2) == aperlab::cli::kExitError);
  std::ostringstream diag3;
  CHECK(aperlab::cli::run("nope", "{}", out, diag3) == aperlab::cli::kExitError);
  std::ostringstream diag4;
  CHECK(aperlab::cli::run("eval", R"({"function": "no-such", "eval": {"points": [[0]]}})", out,
                          diag4) == aperlab::cli::kExitError);
  CHECK(diag4.str().find("function.id") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("outputs are byte identical across runs and worker counts") {
  for (const Case& c : kCases) {
    INFO(c.command);
    const fs::path a = scratch(std::string(c.command) + "_a");
    const fs::path b = scratch(std::string(c.command) + "_b");
    std::ostringstream diag;
    aperlab::set_thread_count(1);
    aperlab::cli::run(c.command, c.config, a, diag);
    aperlab::set_thread_count(0);
    aperlab::cli::run(c.command, c.config, b, diag);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(entry.path()) == slurp(other));
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
}
