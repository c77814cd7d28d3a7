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
#include <vector>

#include <Eigen/Dense>

#include "qpol/fock.hpp"
#include "qpol/states.hpp"

namespace qpol {

/// Unit vector on the Poincare sphere, theta measured from +S_z.
class Direction {
 public:
  /// Normalizes v; throws on a zero vector.
  static Direction from_vector(const Eigen::Vector3d& v);
  static Direction from_angles(double theta, double phi);
  static Direction x() { return from_vector({1, 0, 0}); }
  static Direction y() { return from_vector({0, 1, 0}); }
  static Direction z() { return from_vector({0, 0, 1}); }

  const Eigen::Vector3d& vector() const { return n_; }
  double theta() const;
  double phi() const;

 private:
  explicit Direction(const Eigen::Vector3d& n) : n_(n) {}
  Eigen::Vector3d n_;
};

/// Stokes operators on the square d*d truncated space. Every matrix is
/// Hermitian and block diagonal in total photon number; the su(2) relations
/// hold exactly on blocks N <= d-1.
struct StokesMatrices {
  CMatrix s0, sx, sy, sz;
};

/// Cached per cutoff; safe to call concurrently.
const StokesMatrices& stokes_matrices(FockCutoff cutoff);

/// Stokes operators restricted to the (N+1)-dim block in the |N,k> basis.
/// These are twice the spin-N/2 matrices: S_z|N,k> = (2k-N)|N,k>.
struct BlockStokes {
  CMatrix sx, sy, sz;
};
const BlockStokes& block_stokes(int photons);

/// exp[(theta/2)(J_+ e^{-i phi} - J_- e^{i phi})] with J = S/2 on block N.
/// Rotates the mean Stokes vector of |N,0> (along -S_z) by theta about
/// (sin phi, -cos phi, 0).
CMatrix su2_block_rotation(int photons, double theta, double phi);

struct StokesMomentSet {
  double s0_mean = 0.0;
  Eigen::Vector3d mean_vector = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double s_squared_mean = 0.0;   // <S_x^2 + S_y^2 + S_z^2>
  double total_variance = 0.0;   // (Delta S)^2 = tr Gamma
  double s0_s0plus2_mean = 0.0;  // <S0 (S0 + 2)>, for the Casimir check
  double tail_probability = 0.0;
};

/// Moments of the truncated state, computed blockwise from the sector.
StokesMomentSet stokes_moments(const PolarizationSector& sector);
StokesMomentSet stokes_moments(const TwoModeState& state);
/// Same moments through the full-space Stokes matrices. Exact: the state is
/// embedded one photon higher per mode so second moments see no truncation.
StokesMomentSet stokes_moments_dense(const TwoModeState& state);

/// Human-readable list of violated StokesMomentSet invariants (empty if OK).
std::vector<std::string> moment_invariant_violations(const StokesMomentSet& m);

/// n^t Gamma n, clamped at zero (clamps below -1e-10 are reported via warn()).
double projected_variance(const StokesMomentSet& moments, const Direction& n);
double projected_mean(const StokesMomentSet& moments, const Direction& n);

/// Blockwise D(theta, phi) rho D^dagger. Amplitude rotated out of
/// incomplete blocks is dropped and added to the tail probability.
TwoModeState apply_su2(const TwoModeState& state, double theta, double phi);

/// Exact pmf of the S_n outcome (photocurrent difference), values -N..N.
struct StokesOutcomeDistribution {
  std::vector<int> outcomes;
  std::vector<double> probabilities;

  double mean() const;
  double variance() const;
  double probability_of(int outcome) const;
};

StokesOutcomeDistribution stokes_distribution(const TwoModeState& state, const Direction& n);

}  // namespace qpol
