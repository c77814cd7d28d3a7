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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpol/fock.hpp"
#include "qpol/states.hpp"

namespace qpol {

// Quadratures are x_theta = (a e^{-i theta} + a^dagger e^{i theta}) / sqrt(2),
// so the vacuum has variance 1/2. Shot-noise units divide by that 1/2.

/// Number-state wavefunctions psi_0..psi_{out.size()-1} at x, from the
/// normalized three-term recurrence (stable to n ~ 40 and beyond).
void fock_wavefunctions(double x, std::span<double> out);
std::vector<double> fock_wavefunctions(int count, double x);

/// Marginal density of x_theta for a fixed state and LO phase.
class QuadratureDensity {
 public:
  QuadratureDensity(const SingleModeState& state, double lo_phase);
  double operator()(double x) const;
  /// Half-width outside of which every number-state wavefunction up to the
  /// state dimension is negligible.
  double support_half_width() const;

 private:
  Eigen::MatrixXd kernel_;  // Re(rho_mn e^{i(n-m) theta})
  mutable std::vector<double> psi_;
};

double quadrature_pdf(const SingleModeState& state, double lo_phase, double x);

/// <x_theta^2> - <x_theta>^2, exact on the truncated state.
double quadrature_variance(const SingleModeState& state, double lo_phase);

struct HomodyneRecord {
  Mode mode = Mode::H;
  double lo_phase = 0.0;  // radians, in [0, pi)
  double value = 0.0;     // vacuum variance 1/2
};

struct HomodyneDataset {
  std::vector<HomodyneRecord> records;

  std::size_t count(Mode mode) const;
  std::vector<HomodyneRecord> for_mode(Mode mode) const;
  void append(const HomodyneDataset& other);
};

/// Evenly spaced LO phases j*pi/count, j = 0..count-1.
std::vector<double> default_lo_phases(int count);

/// Inverse-CDF sampling of x_theta on a fine tabulation of the marginal.
/// Bit-identical for a fixed seed.
HomodyneDataset sample_homodyne(const SingleModeState& state, Mode mode,
                                std::span<const double> phases, int samples_per_phase,
                                std::uint64_t seed);

/// CSV "mode,lo_phase,value", mode being H or V; values at 17 significant
/// digits so a reread dataset reproduces the reconstruction exactly.
std::string dataset_to_csv(const HomodyneDataset& data);
HomodyneDataset dataset_from_csv(std::string_view text);
void write_dataset_csv(const HomodyneDataset& data, const std::filesystem::path& path);
HomodyneDataset read_dataset_csv(const std::filesystem::path& path);

/// Kraus operators of the pure-loss (beam-splitter) channel of transmissivity eta.
std::vector<CMatrix> loss_kraus_operators(int dim, double eta);
/// Applies the loss channel to a density matrix (the result is not validated).
CMatrix apply_loss_channel(const CMatrix& rho, double eta);
/// Adjoint (Heisenberg-picture) loss channel, used to build lossy POVMs.
CMatrix apply_loss_channel_adjoint(const CMatrix& op, double eta);

SingleModeState apply_loss(const SingleModeState& state, double eta);

}  // namespace qpol
