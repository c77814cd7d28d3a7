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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "qpol/degrees.hpp"
#include "qpol/poincare.hpp"
#include "qpol/states.hpp"
#include "qpol/tomography.hpp"

namespace qpol::cli {

inline constexpr int kSchemaVersion = 1;

/// Malformed or out-of-range configuration; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StateFamily {
  vacuum,
  coherent,
  fock,
  su2_coherent,
  squeezed_vacuum,
  thermal,
  squeezed_thermal,
  file,
};

struct StateSpec {
  StateFamily family = StateFamily::vacuum;
  Complex alpha{0.0, 0.0};  // coherent, H mode
  Complex beta{0.0, 0.0};   // coherent, V mode
  int n_h = 0, n_v = 0;     // fock
  Su2CoherentSpec su2;
  SqueezedThermalSpec squeeze;  // squeezed_vacuum, thermal, squeezed_thermal
  Mode mode = Mode::H;          // mode carrying the single-mode families
  std::filesystem::path path;   // file
};

struct RunConfig {
  StateSpec state;
  int cutoff = 20;
  int n_theta = 91;
  int n_phi = 180;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = ".";
  DegreeOptions degrees;
  std::optional<BrightBeamModel> bright_beam;
  int scan_points = 720;
  ReconstructionConfig reconstruction;
  TomographySampling sampling;
  std::optional<std::filesystem::path> dataset;  // reconstruct this CSV instead of simulating
};

/// Validates every field; relative paths resolve against base_dir.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
/// IoError if unreadable, ConfigError if not valid JSON or not a valid config.
RunConfig load_run_config(const std::filesystem::path& path);

TwoModeState build_state(const StateSpec& spec, int cutoff);

}  // namespace qpol::cli
