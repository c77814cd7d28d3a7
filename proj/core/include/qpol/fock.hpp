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

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace qpol {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class Mode { H, V };

/// Per-mode Fock truncation: photon numbers 0..d-1 in each polarization mode.
///
/// The two-mode space has dimension d*d with the row-major index map
/// (n_H, n_V) -> n_H*d + n_V. Total-photon blocks N <= d-1 are complete;
/// blocks d <= N <= 2(d-1) are only partially representable.
class FockCutoff {
 public:
  explicit FockCutoff(int per_mode_dim);

  int dim() const { return d_; }
  int two_mode_dim() const { return d_ * d_; }
  int max_complete_block() const { return d_ - 1; }
  int max_block() const { return 2 * (d_ - 1); }

  std::size_t index(int n_h, int n_v) const {
    return static_cast<std::size_t>(n_h) * static_cast<std::size_t>(d_) +
           static_cast<std::size_t>(n_v);
  }
  bool representable(int n_h, int n_v) const {
    return n_h >= 0 && n_v >= 0 && n_h < d_ && n_v < d_;
  }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  int d_;
};

enum class OperatorLabel { annihilation, creation, number };

struct ModeOperatorMatrix {
  OperatorLabel label;
  CMatrix matrix;
};

ModeOperatorMatrix annihilation_matrix(FockCutoff cutoff);
ModeOperatorMatrix creation_matrix(FockCutoff cutoff);
ModeOperatorMatrix number_matrix(FockCutoff cutoff);

/// op (x) 1 for Mode::H, 1 (x) op for Mode::V on the d*d two-mode space.
CMatrix embed_on_mode(const CMatrix& op, Mode mode, FockCutoff cutoff);
CMatrix embed_on_mode(const ModeOperatorMatrix& op, Mode mode, FockCutoff cutoff);

/// |N,k> = |k>_H |N-k>_V. Requires 0 <= k <= N <= d-1 (complete blocks).
std::pair<int, int> basis_index(int photons, int k, FockCutoff cutoff);

}  // namespace qpol
