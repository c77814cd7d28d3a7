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

#include "qpol/numeric_format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qpol {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, x);
  return buf;
}

double round_significant(double x) {
  if (x == 0.0) return 0.0;  // drop negative zero
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", kOutputDigits - 1, x);
  return std::strtod(buf, nullptr);
}

}  // namespace qpol
