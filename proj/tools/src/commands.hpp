// Copyright 2026 The qpol Authors
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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace qpol::cli {

/// Everything a command produces. Nothing touches the filesystem until the
/// whole result has been computed.
struct CommandOutput {
  std::string summary;  // printed to stdout
  std::vector<std::pair<std::filesystem::path, std::string>> files;
};

// format is the --format flag, if given; commands reject formats they do not
// produce with ConfigError.
CommandOutput cmd_degrees(const RunConfig& cfg, const std::optional<std::string>& format);
CommandOutput cmd_sphere_map(const RunConfig& cfg, const std::optional<std::string>& format);
CommandOutput cmd_bright_scan(const RunConfig& cfg, const std::optional<std::string>& format);
CommandOutput cmd_tomo(const RunConfig& cfg, const std::optional<std::string>& format);

/// Creates the parent directories and writes every file (IoError on failure).
void write_outputs(const CommandOutput& out);

}  // namespace qpol::cli
