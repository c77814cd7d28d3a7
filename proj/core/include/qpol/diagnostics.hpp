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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace qpol {

/// Truncated-tail probability above which degree computations warn that the
/// Fock cutoff may be inadequate.
inline constexpr double kTailWarningThreshold = 1e-6;

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a process-wide sink for numerical warnings (clamped variances,
/// cutoff tails). Returns the previous handler. The default writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// RAII helper that records warnings emitted on any thread while alive and
/// forwards them to the previously installed handler.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace qpol
