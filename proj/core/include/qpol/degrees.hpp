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

#include "qpol/stokes.hpp"

namespace qpol {

struct SymmetricEigen3 {
  Eigen::Vector3d values;   // ascending
  Eigen::Matrix3d vectors;  // column i pairs with values(i)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a real symmetric 3x3 matrix. Robust to
/// repeated eigenvalues; converges quadratically.
SymmetricEigen3 jacobi_eigen_symmetric(const Eigen::Matrix3d& a);

/// Principal components of the Stokes covariance: the noise ellipsoid.
struct PrincipalFrame {
  Eigen::Vector3d eigenvalues;  // gamma_1 <= gamma_2 <= gamma_3
  Eigen::Matrix3d rotation;     // rows are eigenvectors; orthogonal, det +1
  // gamma_1 == gamma_2: the minimizing direction is any unit vector of the
  // degenerate eigenplane and the reported one is arbitrary.
  bool degenerate = false;

  Eigen::Vector3d min_variance_axis() const { return rotation.row(0).transpose(); }
  Eigen::Vector3d semi_axes() const { return eigenvalues.cwiseMax(0.0).cwiseSqrt(); }
};

/// Throws std::invalid_argument if gamma is not symmetric.
PrincipalFrame principal_frame(const Eigen::Matrix3d& gamma);

/// |<S>| / <S0>; 0 for the two-mode vacuum.
double degree_p1(const StokesMomentSet& m);
/// sqrt(1 - (Delta S)^2 / <S^2>); 0 when <S^2> = 0.
double degree_p2_prime(const StokesMomentSet& m);
/// sqrt(1 - gamma_1 / (<S^2>/3)) with gamma_1 the smallest covariance
/// eigenvalue, i.e. the minimum of (Delta S_n)^2 over the sphere.
double degree_p2(const StokesMomentSet& m);
double degree_p2(const StokesMomentSet& m, const PrincipalFrame& frame);

/// Closed form of the second-order degree for |Psi>_H |0>_V given the mean
/// photon number and its variance.
double oracle_p2_single_mode(double mean_photons, double photon_variance);

/// Isotropic fluctuations saturating tr Gamma = <S^2>, with vanishing mean.
bool is_unpolarized_second_order(const StokesMomentSet& m, double tol);

struct DegreeOptions {
  double unpolarized_tolerance = 1e-6;
  // Mean photon numbers at or below this are treated as the vacuum (all
  // degrees 0). Zero means only the exact vacuum.
  double vacuum_threshold = 0.0;
};

struct DegreeReport {
  double p1 = 0.0;
  double p2_prime = 0.0;
  double p2 = 0.0;
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();
  Eigen::Matrix3d principal_axes = Eigen::Matrix3d::Identity();  // rows
  Eigen::Vector3d min_variance_direction = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d semi_axes = Eigen::Vector3d::Zero();
  bool degenerate = false;
  bool unpolarized = false;

  double s0_mean = 0.0;
  Eigen::Vector3d mean_vector = Eigen::Vector3d::Zero();
  double s_squared_mean = 0.0;
  double total_variance = 0.0;
  double tail_probability = 0.0;
  std::vector<std::string> warnings;
};

DegreeReport degree_report(const StokesMomentSet& m, const DegreeOptions& options = {});

}  // namespace qpol
