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

#include "qpol/state_factory.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qpol/diagnostics.hpp"
#include "qpol/errors.hpp"
#include "qpol/stokes.hpp"

namespace qpol {
namespace {

void warn_tail(const char* what, double tail) {
  if (tail > kTailWarningThreshold) {
    std::ostringstream os;
    os << what << ": probability " << tail << " lies beyond the Fock cutoff";
    warn(os.str());
  }
}

// Poisson(mu) mass at n >= d, summed directly so small tails keep full precision.
double poisson_tail(double mu, int d) {
  if (mu == 0.0) return 0.0;
  double tail = 0.0;
  for (int n = d;; ++n) {
    const double term = std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
    tail += term;
    if (n > mu && term < 1e-18 * std::max(tail, 1e-300)) break;
    if (n > d + 100000) break;
  }
  return std::min(1.0, tail);
}

CVector coherent_amplitudes(Complex alpha, int dim) {
  CVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

SqueezedThermalSpec SqueezedThermalSpec::from_db(double squeeze_db, double antisqueeze_db,
                                                 double axis_angle) {
  const double v_min = db_to_variance(squeeze_db);
  const double v_max = db_to_variance(antisqueeze_db);
  if (!(v_min <= v_max) || v_min * v_max < 1.0 - 1e-12) {
    throw std::invalid_argument(
        "SqueezedThermalSpec::from_db: need V_min <= V_max and V_min*V_max >= 1");
  }
  SqueezedThermalSpec spec;
  spec.n_th = 0.5 * (std::sqrt(v_min * v_max) - 1.0);
  spec.r = 0.25 * std::log(v_max / v_min);
  spec.axis_angle = axis_angle;
  return spec;
}

void SqueezedThermalSpec::validate() const {
  if (!(r >= 0.0) || !(n_th >= 0.0) || !std::isfinite(r) || !std::isfinite(n_th) ||
      !std::isfinite(axis_angle)) {
    throw std::invalid_argument("SqueezedThermalSpec: need finite r >= 0 and n_th >= 0");
  }
}

TwoModeState two_mode_number(int n, int m, FockCutoff cutoff) {
  if (!cutoff.representable(n, m)) {
    throw std::out_of_range("two_mode_number: |" + std::to_string(n) + "," + std::to_string(m) +
                            "> exceeds cutoff " + std::to_string(cutoff.dim()));
  }
  CVector v = CVector::Zero(cutoff.two_mode_dim());
  v(static_cast<Eigen::Index>(cutoff.index(n, m))) = 1.0;
  return TwoModeState::pure(cutoff, std::move(v));
}

SingleModeState coherent_single_mode(Complex alpha, int dim) {
  if (dim < 1) throw DimensionError("coherent_single_mode: dim must be >= 1");
  CVector c = coherent_amplitudes(alpha, dim);
  const double tail = poisson_tail(std::norm(alpha), dim);
  c /= c.norm();
  warn_tail("coherent state", tail);
  return SingleModeState::pure(std::move(c), tail);
}

TwoModeState two_mode_coherent(Complex alpha, Complex beta, FockCutoff cutoff) {
  const int d = cutoff.dim();
  CVector h = coherent_amplitudes(alpha, d);
  CVector v = coherent_amplitudes(beta, d);
  h /= h.norm();
  v /= v.norm();
  const double tail_h = poisson_tail(std::norm(alpha), d);
  const double tail_v = poisson_tail(std::norm(beta), d);
  auto state = tensor_product(SingleModeState::pure(std::move(h), tail_h),
                              SingleModeState::pure(std::move(v), tail_v));
  warn_tail("two-mode coherent state", state.tail_probability());
  return state;
}

TwoModeState su2_coherent(const Su2CoherentSpec& spec, FockCutoff cutoff) {
  if (spec.photons < 0 || spec.photons > cutoff.max_complete_block()) {
    throw std::out_of_range("su2_coherent: N=" + std::to_string(spec.photons) +
                            " exceeds cutoff " + std::to_string(cutoff.dim()));
  }
  const CMatrix d = su2_block_rotation(spec.photons, spec.theta, spec.phi);
  const auto idx = block_indices(spec.photons, cutoff);
  CVector psi = CVector::Zero(cutoff.two_mode_dim());
  for (int k = 0; k <= spec.photons; ++k) psi(idx[k]) = d(k, 0);
  psi /= psi.norm();
  return TwoModeState::pure(cutoff, std::move(psi));
}

CMatrix squeeze_operator(double r, double axis_angle, int dim) {
  if (dim < 1) throw DimensionError("squeeze_operator: dim must be >= 1");
  const int pad = squeeze_padding_dim(dim);
  const CMatrix a = annihilation_matrix(FockCutoff(pad)).matrix;
  const CMatrix a2 = a * a;
  // S(xi) = exp[(xi^* a^2 - xi a^dagger^2)/2], xi = r e^{2 i axis}; squeezes x_axis.
  const Complex xi = std::polar(r, 2.0 * axis_angle);
  const CMatrix generator = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  const CMatrix s = generator.exp();
  return s.topLeftCorner(dim, dim);
}

SingleModeState single_mode_squeezed_vacuum(double r, double axis_angle, int dim) {
  if (!(r >= 0.0)) throw std::invalid_argument("squeezed vacuum: r must be >= 0");
  if (dim < 1) throw DimensionError("squeezed vacuum: dim must be >= 1");
  const int pad = squeeze_padding_dim(dim);
  const CMatrix a = annihilation_matrix(FockCutoff(pad)).matrix;
  const CMatrix a2 = a * a;
  const Complex xi = std::polar(r, 2.0 * axis_angle);
  const CMatrix s = (0.5 * (std::conj(xi) * a2 - xi * a2.adjoint())).exp();
  CVector v = s.col(0).head(dim);
  for (int n = 1; n < dim; n += 2) v(n) = 0.0;  // parity of the squeeze operator
  // Closed-form tail: 1 - sum_{2n < dim} |c_2n|^2 computed from the exact amplitudes.
  double kept = 0.0;
  {
    const double t = std::tanh(r);
    double c2 = 1.0 / std::cosh(r);  // |c_0|^2
    for (int n = 0; 2 * n < dim; ++n) {
      kept += c2;
      c2 *= t * t * (2.0 * n + 1.0) / (2.0 * n + 2.0);
    }
  }
  const double tail = std::clamp(1.0 - kept, 0.0, 1.0);
  v /= v.norm();
  warn_tail("squeezed vacuum", tail);
  return SingleModeState::pure(std::move(v), tail);
}

SingleModeState thermal_state(double n_th, int dim) {
  if (!(n_th >= 0.0)) throw std::invalid_argument("thermal_state: n_th must be >= 0");
  CMatrix rho = CMatrix::Zero(dim, dim);
  const double q = n_th / (1.0 + n_th);
  double p = 1.0 / (1.0 + n_th);
  double kept = 0.0;
  for (int n = 0; n < dim; ++n) {
    rho(n, n) = p;
    kept += p;
    p *= q;
  }
  rho /= kept;
  const double tail = std::clamp(1.0 - kept, 0.0, 1.0);
  warn_tail("thermal state", tail);
  return SingleModeState::mixed(std::move(rho), tail);
}

SingleModeState squeezed_thermal(const SqueezedThermalSpec& spec, int dim) {
  spec.validate();
  if (dim < 1) throw DimensionError("squeezed_thermal: dim must be >= 1");
  const int pad = squeeze_padding_dim(dim);
  const CMatrix a = annihilation_matrix(FockCutoff(pad)).matrix;
  const CMatrix a2 = a * a;
  const Complex xi = std::polar(spec.r, 2.0 * spec.axis_angle);
  const CMatrix s = (0.5 * (std::conj(xi) * a2 - xi * a2.adjoint())).exp();

  Eigen::VectorXd p(pad);
  const double q = spec.n_th / (1.0 + spec.n_th);
  double pn = 1.0 / (1.0 + spec.n_th);
  for (int n = 0; n < pad; ++n) {
    p(n) = pn;
    pn *= q;
  }
  // Only the top-left dim x dim block of S rho_th S^dagger is needed.
  const CMatrix top = s.topRows(dim);
  CMatrix rho = hermitize(top * p.asDiagonal() * top.adjoint());
  const double kept = rho.trace().real();
  const double tail = std::clamp(1.0 - kept, 0.0, 1.0);
  rho /= kept;
  warn_tail("squeezed thermal state", tail);
  return SingleModeState::mixed(std::move(rho), tail);
}

TwoModeState tensor_with_vacuum(const SingleModeState& single, Mode mode, FockCutoff cutoff) {
  if (single.dim() != cutoff.dim()) {
    throw DimensionError("tensor_with_vacuum: state dimension " + std::to_string(single.dim()) +
                         " does not match cutoff " + std::to_string(cutoff.dim()));
  }
  const auto vac = SingleModeState::vacuum(cutoff.dim());
  return mode == Mode::H ? tensor_product(single, vac) : tensor_product(vac, single);
}

}  // namespace qpol
