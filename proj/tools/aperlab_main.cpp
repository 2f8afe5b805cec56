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

// aperlab <command> --config <file.json> --out <dir> [--threads N]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aperlab/cli.hpp"
#include "aperlab/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aperlab: almost-periodicity experiments"};
  app.require_subcommand(1, 1);
  std::string config;
  std::string out;
  unsigned threads = 0;
  for (const auto& c : aperlab::cli::commands()) {
    auto* sub = app.add_subcommand(c.name, c.summary);
    sub->add_option("--config", config, "experiment configuration (JSON)")->required();
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--threads", threads, "worker cap (0 = hardware default)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : aperlab::cli::kExitError;
  }
  aperlab::set_thread_count(threads);
  const std::string command = app.get_subcommands().front()->get_name();
  return aperlab::cli::run_file(command, config, out, std::cerr);
}
