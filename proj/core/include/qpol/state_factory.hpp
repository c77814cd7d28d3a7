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

#include <cmath>

#include "qpol/fock.hpp"
#include "qpol/states.hpp"

namespace qpol {

/// Noise power in shot-noise units (vacuum = 1) from a dB figure.
inline double db_to_variance(double db) { return std::pow(10.0, db / 10.0); }

/// Squeezed thermal state S(r) rho_th(n_th) S(r)^dagger.
///
/// axis_angle is the local-oscillator phase of the squeezed quadrature: the
/// quadrature x_theta = (a e^{-i theta} + a^dagger e^{i theta})/sqrt(2) has
/// variance V_min/2 at theta = axis_angle and V_max/2 ninety degrees away.
struct SqueezedThermalSpec {
  double r = 0.0;
  double n_th = 0.0;
  double axis_angle = 0.0;

  double v_min() const { return std::exp(-2.0 * r) * (2.0 * n_th + 1.0); }
  double v_max() const { return std::exp(2.0 * r) * (2.0 * n_th + 1.0); }

  /// Inverts V_min = 10^(squeeze_db/10), V_max = 10^(antisqueeze_db/10).
  static SqueezedThermalSpec from_db(double squeeze_db, double antisqueeze_db,
                                     double axis_angle = 0.0);
  void validate() const;
};

/// SU(2) coherent state D(theta, phi)|N, k=0>.
struct Su2CoherentSpec {
  int photons = 0;
  double theta = 0.0;
  double phi = 0.0;
};

TwoModeState two_mode_number(int n, int m, FockCutoff cutoff);

SingleModeState coherent_single_mode(Complex alpha, int dim);
/// |alpha>_H |beta>_V renormalized on the truncated space; the discarded
/// Poisson tail is recorded and warned about above kTailWarningThreshold.
TwoModeState two_mode_coherent(Complex alpha, Complex beta, FockCutoff cutoff);

TwoModeState su2_coherent(const Su2CoherentSpec& spec, FockCutoff cutoff);

/// S(r e^{2 i axis}) on a padded space, truncated to dim.
CMatrix squeeze_operator(double r, double axis_angle, int dim);

SingleModeState single_mode_squeezed_vacuum(double r, double axis_angle, int dim);
SingleModeState thermal_state(double n_th, int dim);
SingleModeState squeezed_thermal(const SqueezedThermalSpec& spec, int dim);

/// single (x) |0><0| on the other mode.
TwoModeState tensor_with_vacuum(const SingleModeState& single, Mode mode, FockCutoff cutoff);

/// Padded working dimension used when building squeezed states for cutoff d.
inline int squeeze_padding_dim(int dim) { return 2 * dim + 32; }

}  // namespace qpol
