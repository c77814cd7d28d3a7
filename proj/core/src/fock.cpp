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

#include "qpol/fock.hpp"

#include <cmath>
#include <string>

#include "qpol/errors.hpp"

namespace qpol {

FockCutoff::FockCutoff(int per_mode_dim) : d_(per_mode_dim) {
  if (per_mode_dim < 1) {
    throw std::invalid_argument("FockCutoff: per-mode dimension must be >= 1, got " +
                                std::to_string(per_mode_dim));
  }
}

ModeOperatorMatrix annihilation_matrix(FockCutoff cutoff) {
  const int d = cutoff.dim();
  CMatrix a = CMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {OperatorLabel::annihilation, std::move(a)};
}

ModeOperatorMatrix creation_matrix(FockCutoff cutoff) {
  return {OperatorLabel::creation, annihilation_matrix(cutoff).matrix.adjoint()};
}

ModeOperatorMatrix number_matrix(FockCutoff cutoff) {
  const int d = cutoff.dim();
  CMatrix n = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return {OperatorLabel::number, std::move(n)};
}

CMatrix embed_on_mode(const CMatrix& op, Mode mode, FockCutoff cutoff) {
  const int d = cutoff.dim();
  if (op.rows() != d || op.cols() != d) {
    throw DimensionError("embed_on_mode: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", cutoff expects " + std::to_string(d));
  }
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Complex v = op(i, j);
      if (v == Complex{}) continue;
      for (int s = 0; s < d; ++s) {
        if (mode == Mode::H) {
          out(cutoff.index(i, s), cutoff.index(j, s)) = v;
        } else {
          out(cutoff.index(s, i), cutoff.index(s, j)) = v;
        }
      }
    }
  }
  return out;
}

CMatrix embed_on_mode(const ModeOperatorMatrix& op, Mode mode, FockCutoff cutoff) {
  return embed_on_mode(op.matrix, mode, cutoff);
}

std::pair<int, int> basis_index(int photons, int k, FockCutoff cutoff) {
  if (k < 0 || k > photons || photons > cutoff.max_complete_block()) {
    throw std::out_of_range("basis_index: need 0 <= k <= N <= d-1, got N=" +
                            std::to_string(photons) + ", k=" + std::to_string(k) +
                            ", d=" + std::to_string(cutoff.dim()));
  }
  return {k, photons - k};
}

}  // namespace qpol
