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

#include <string>

namespace qpol {

/// Significant digits for reports, maps, and scans.
inline constexpr int kOutputDigits = 9;

/// "%.9g" rendering.
std::string format_number(double x);

/// x rounded to kOutputDigits significant digits, so a JSON writer that
/// prints the shortest round-trip form emits exactly those digits.
double round_significant(double x);

}  // namespace qpol
