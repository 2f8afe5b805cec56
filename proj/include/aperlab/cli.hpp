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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aperlab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

struct CommandInfo {
  std::string name;
  std::string summary;
  /// Library operations the command drives.
  std::vector<std::string> operations;
};

const std::vector<CommandInfo>& commands();

/// Runs one experiment from JSON text and writes <command>.csv, <command>.json
/// and any extra tables into out_dir. Diagnostics go to diag.
/// Returns kExitPass, kExitFail or kExitError.
int run(const std::string& command, const std::string& config_text,
        const std::filesystem::path& out_dir, std::ostream& diag);

/// Same, reading the configuration from a file.
int run_file(const std::string& command, const std::filesystem::path& config,
             const std::filesystem::path& out_dir, std::ostream& diag);

}  // namespace aperlab::cli
