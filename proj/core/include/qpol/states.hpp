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

#include <variant>
#include <vector>

#include "qpol/fock.hpp"

namespace qpol {

// Validity tolerances. Inputs outside them are rejected, never repaired.
inline constexpr double kPureNormTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kSectorWeightTolerance = 1e-10;

enum class StateKind { pure, mixed };

/// State of one bosonic mode truncated to photon numbers 0..dim-1.
///
/// tail_probability records the probability mass the untruncated state had
/// beyond the cutoff (the stored data is renormalized on the truncated space).
class SingleModeState {
 public:
  static SingleModeState pure(CVector amplitudes, double tail_probability = 0.0);
  static SingleModeState mixed(CMatrix rho, double tail_probability = 0.0);
  static SingleModeState vacuum(int dim);
  static SingleModeState number(int n, int dim);

  int dim() const;
  StateKind kind() const { return is_pure() ? StateKind::pure : StateKind::mixed; }
  bool is_pure() const { return std::holds_alternative<CVector>(data_); }
  double tail_probability() const { return tail_; }

  const CVector& amplitudes() const;  // pure only
  const CMatrix& matrix() const;      // mixed only
  CMatrix density_matrix() const;

  std::vector<double> photon_distribution() const;
  double mean_photons() const;
  double photon_variance() const;

  /// Zero-pads (or, if lossless, truncates) to a different dimension.
  SingleModeState resized(int new_dim) const;

 private:
  SingleModeState(std::variant<CVector, CMatrix> data, double tail)
      : data_(std::move(data)), tail_(tail) {}
  std::variant<CVector, CMatrix> data_;
  double tail_;
};

/// Pure vector or density matrix on the truncated two-mode space (H, V).
class TwoModeState {
 public:
  static TwoModeState pure(FockCutoff cutoff, CVector amplitudes, double tail_probability = 0.0);
  static TwoModeState mixed(FockCutoff cutoff, CMatrix rho, double tail_probability = 0.0);
  static TwoModeState vacuum(FockCutoff cutoff);

  FockCutoff cutoff() const { return cutoff_; }
  StateKind kind() const { return is_pure() ? StateKind::pure : StateKind::mixed; }
  bool is_pure() const { return std::holds_alternative<CVector>(data_); }
  double tail_probability() const { return tail_; }

  const CVector& amplitudes() const;
  const CMatrix& matrix() const;
  CMatrix density_matrix() const;

  /// Probability of |n_H, n_V> (diagonal of the density matrix).
  double population(int n_h, int n_v) const;

  /// Reduced state of one mode.
  SingleModeState marginal(Mode mode) const;

 private:
  TwoModeState(FockCutoff cutoff, std::variant<CVector, CMatrix> data, double tail)
      : cutoff_(cutoff), data_(std::move(data)), tail_(tail) {}
  FockCutoff cutoff_;
  std::variant<CVector, CMatrix> data_;
  double tail_;
};

/// rho_H (x) rho_V. Both factors must share the same dimension.
TwoModeState tensor_product(const SingleModeState& h, const SingleModeState& v);

Complex expectation(const TwoModeState& state, const CMatrix& op);
Complex expectation(const SingleModeState& state, const CMatrix& op);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. States of
/// different dimension are compared after zero-padding the smaller one.
double fidelity(const SingleModeState& a, const SingleModeState& b);

struct SectorBlock {
  int photons = 0;
  double weight = 0.0;
  CMatrix block;  // (N+1)x(N+1) in the |N,k> basis; trace 1 when weight > 0
};

/// Block-diagonal restriction sum_N 1_N rho 1_N, stored per total photon
/// number N = 0..2(d-1). Rows of incomplete blocks that are not
/// representable under the cutoff are identically zero.
class PolarizationSector {
 public:
  PolarizationSector(FockCutoff cutoff, std::vector<SectorBlock> blocks,
                     double tail_probability = 0.0);

  FockCutoff cutoff() const { return cutoff_; }
  const std::vector<SectorBlock>& blocks() const { return blocks_; }
  double tail_probability() const { return tail_; }

  double total_weight() const;
  /// Weight held in blocks with N > d-1.
  double incomplete_block_weight() const;

  TwoModeState reassemble() const;

 private:
  FockCutoff cutoff_;
  std::vector<SectorBlock> blocks_;
  double tail_;
};

PolarizationSector project_polarization_sector(const TwoModeState& state);

/// Flat two-mode indices of |N,k>, k = 0..N; -1 where |N,k> is not
/// representable under the cutoff.
std::vector<std::ptrdiff_t> block_indices(int photons, FockCutoff cutoff);

}  // namespace qpol
