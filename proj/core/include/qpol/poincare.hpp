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
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qpol/stokes.hpp"

namespace qpol {

/// Regular (theta, phi) lattice on the Poincare sphere.
///
/// Rows run from theta = 0 (+S_z pole) to theta = pi (-S_z pole) at
/// theta_i = i*pi/(n_theta-1); a single row sits on the equator. Columns are
/// phi_j = 2*pi*j/n_phi. Pole rows repeat the same point n_phi times so the
/// lattice maps one-to-one onto an equirectangular raster.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }

  double theta(int row) const;
  double phi(int col) const;
  Direction node(int row, int col) const { return Direction::from_angles(theta(row), phi(col)); }

 private:
  int n_theta_;
  int n_phi_;
};

/// dB values below this floor (including zero variance) are clipped to it.
inline constexpr double kDbFloor = -200.0;

/// 10*log10(variance/reference) clipped at kDbFloor; 0 when reference <= 0.
double variance_to_db(double variance, double reference);

struct VarianceMap {
  SphereGrid grid{1, 1};
  double shot_reference = 0.0;  // <S0>: coherent-state projection noise
  std::vector<double> variance;    // row-major, rows = theta
  std::vector<double> variance_db;

  std::size_t argmin() const;
  std::size_t argmax() const;
  double min() const { return variance[argmin()]; }
  double max() const { return variance[argmax()]; }
  Direction direction(std::size_t node) const;
};

VarianceMap variance_map(const StokesMomentSet& moments, const SphereGrid& grid);

inline constexpr double kFlatMapTolerance = 1e-12;

enum class MapFormat { csv, json, ppm };
MapFormat parse_map_format(std::string_view name);
std::string_view extension(MapFormat format);

/// csv: header theta,phi,variance,variance_db then one row per node.
/// json: {"n_theta","n_phi","shot_reference","nodes":[{theta,phi,variance,variance_db}]}.
/// ppm: binary P6, width n_phi, height n_theta, maxval 255, rows from
///      theta = 0. Color ramp t = (v - min)/(max - min) (t = 0 for a map
///      constant to kFlatMapTolerance relative) -> RGB (round(255 t), 0, round(255 (1 - t))), blue = low noise.
/// Floating-point values carry 9 significant digits.
std::string export_map(const VarianceMap& map, MapFormat format);
void write_map(const VarianceMap& map, MapFormat format, const std::filesystem::path& path);

struct MapNode {
  double theta = 0.0;
  double phi = 0.0;
  double variance = 0.0;
  double variance_db = 0.0;
};
std::vector<MapNode> parse_map_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Linearized bright-beam model. For a beam whose mean Stokes vector lies along
// S_y, S_theta = cos(theta) S_x + sin(theta) S_z spans the dark plane and its
// variance is (N/2) [V_H(theta) + V_V(theta)] with quadrature variances in
// shot-noise units (vacuum = 1).

struct QuadratureEllipse {
  double v_min = 1.0;
  double v_max = 1.0;
  double angle = 0.0;  // dark-plane angle of the squeezed axis

  double variance(double theta) const;
};

struct BrightBeamModel {
  double mean_photons = 1.0;
  QuadratureEllipse h;
  QuadratureEllipse v;
  double relative_phase = std::numbers::pi / 2;

  void validate() const;

  /// Both modes squeezed with axes at theta_star -/+ axis_split and common
  /// anti-squeezing v_max; v_min solved so the dark-plane minimum is min_db
  /// at theta_star.
  static BrightBeamModel fit_to_minimum(double min_db, double theta_star, double axis_split,
                                        double v_max, double mean_photons = 1.0);
};

/// Shot-noise units: 1 (0 dB) for coherent light.
double dark_plane_variance(const BrightBeamModel& model, double theta);

struct DarkPlanePoint {
  double theta = 0.0;
  double variance = 0.0;  // shot-noise units
  double variance_db = 0.0;
};

std::vector<DarkPlanePoint> dark_plane_scan(const BrightBeamModel& model, int points);

/// Global minimum over [0, pi): coarse scan, then golden-section refinement
/// of every local-minimum bracket.
DarkPlanePoint find_dark_plane_minimum(const BrightBeamModel& model, int coarse_points = 720);

}  // namespace qpol
