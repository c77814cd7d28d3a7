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
#include <string>

#include <nlohmann/json.hpp>

#include "qpol/degrees.hpp"
#include "qpol/poincare.hpp"
#include "qpol/states.hpp"
#include "qpol/tomography.hpp"

namespace qpol {

inline constexpr const char* kStateSchema = "qpol.state/1";

// State files: {"schema", "modes", "cutoff", "kind", "real", "imag",
// "tail_probability"}. Amplitudes (pure) or the row-major density matrix
// (mixed) are stored at full precision so files reload as valid states.
nlohmann::json to_json(const TwoModeState& state);
nlohmann::json to_json(const SingleModeState& state);
TwoModeState two_mode_state_from_json(const nlohmann::json& j);
SingleModeState single_mode_state_from_json(const nlohmann::json& j);

/// Reports and diagnostics are rounded to kOutputDigits significant digits.
nlohmann::json to_json(const DegreeReport& report);
nlohmann::json to_json(const ReconstructionResult& result);
nlohmann::json to_json(const VarianceMap& map, bool include_nodes);

/// Pretty JSON with a trailing newline.
std::string dump(const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qpol
