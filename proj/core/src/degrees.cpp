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

#include "qpol/degrees.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qpol/diagnostics.hpp"
#include "qpol/errors.hpp"

namespace qpol {
namespace {

constexpr double kRadicandOvershoot = 1e-6;

// sqrt of a radicand that must lie in [0,1]; rounding overshoot is clamped,
// anything larger means a logic error upstream.
double unit_sqrt(double radicand, const char* what) {
  if (!std::isfinite(radicand) || radicand < -kRadicandOvershoot ||
      radicand > 1.0 + kRadicandOvershoot) {
    std::ostringstream os;
    os << what << ": radicand " << radicand << " outside [0,1]";
    throw NumericalError(os.str());
  }
  return std::sqrt(std::clamp(radicand, 0.0, 1.0));
}

}  // namespace

SymmetricEigen3 jacobi_eigen_symmetric(const Eigen::Matrix3d& input) {
  Eigen::Matrix3d a = 0.5 * (input + input.transpose());
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  int sweep = 0;
  for (; sweep < 64; ++sweep) {
    const double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
    if (off <= 1e-17 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        Eigen::Matrix3d j = Eigen::Matrix3d::Identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transpose() * a * j;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * j;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int k) { return a(i, i) < a(k, k); });
  SymmetricEigen3 out;
  for (int i = 0; i < 3; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  out.sweeps = sweep;
  return out;
}

PrincipalFrame principal_frame(const Eigen::Matrix3d& gamma) {
  const double scale = std::max(1.0, gamma.cwiseAbs().maxCoeff());
  if (!gamma.allFinite() || (gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("principal_frame: covariance matrix is not symmetric");
  }
  const auto eig = jacobi_eigen_symmetric(gamma);
  PrincipalFrame f;
  f.eigenvalues = eig.values;
  f.rotation = eig.vectors.transpose();
  if (f.rotation.determinant() < 0.0) f.rotation.row(2) *= -1.0;
  f.degenerate = (f.eigenvalues(1) - f.eigenvalues(0)) <= 1e-9 * scale;
  return f;
}

double degree_p1(const StokesMomentSet& m) {
  if (m.s0_mean <= 0.0) return 0.0;
  return unit_sqrt(m.mean_vector.squaredNorm() / (m.s0_mean * m.s0_mean), "P1");
}

double degree_p2_prime(const StokesMomentSet& m) {
  if (m.s_squared_mean <= 0.0) return 0.0;
  return unit_sqrt(1.0 - m.total_variance / m.s_squared_mean, "P2'");
}

double degree_p2(const StokesMomentSet& m, const PrincipalFrame& frame) {
  if (m.s_squared_mean <= 0.0) return 0.0;
  const double gamma_min = std::max(0.0, frame.eigenvalues(0));
  return unit_sqrt(1.0 - 3.0 * gamma_min / m.s_squared_mean, "P2");
}

double degree_p2(const StokesMomentSet& m) { return degree_p2(m, principal_frame(m.covariance)); }

double oracle_p2_single_mode(double mean_photons, double photon_variance) {
  if (!(mean_photons >= 0.0) || !(photon_variance >= 0.0)) {
    throw std::invalid_argument("oracle_p2_single_mode: moments must be >= 0");
  }
  const double denom = photon_variance + mean_photons * (mean_photons + 2.0);
  if (denom <= 0.0) return 0.0;
  return unit_sqrt(1.0 - 3.0 * std::min(photon_variance, mean_photons) / denom, "P2 oracle");
}

bool is_unpolarized_second_order(const StokesMomentSet& m, double tol) {
  const double s2 = m.s_squared_mean;
  const auto frame = principal_frame(m.covariance);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(frame.eigenvalues(i) - s2 / 3.0) > tol * s2) return false;
  }
  return m.mean_vector.norm() <= tol * std::sqrt(std::max(s2, 0.0));
}

DegreeReport degree_report(const StokesMomentSet& m, const DegreeOptions& options) {
  DegreeReport r;
  ScopedWarningCapture capture;
  r.s0_mean = m.s0_mean;
  r.mean_vector = m.mean_vector;
  r.s_squared_mean = m.s_squared_mean;
  r.total_variance = m.total_variance;
  r.tail_probability = m.tail_probability;

  const auto frame = principal_frame(m.covariance);
  r.eigenvalues = frame.eigenvalues;
  r.principal_axes = frame.rotation;
  r.min_variance_direction = frame.min_variance_axis();
  r.semi_axes = frame.semi_axes();
  r.degenerate = frame.degenerate;
  r.unpolarized = is_unpolarized_second_order(m, options.unpolarized_tolerance);

  if (m.s0_mean > options.vacuum_threshold) {
    r.p1 = degree_p1(m);
    r.p2_prime = degree_p2_prime(m);
    r.p2 = degree_p2(m, frame);
  } else if (m.s0_mean > 0.0) {
    warn("mean photon number below the vacuum threshold; degrees reported as 0");
  }
  r.warnings = capture.messages();
  if (m.tail_probability > kTailWarningThreshold) {
    std::ostringstream os;
    os << "truncated-tail probability " << m.tail_probability << " exceeds "
       << kTailWarningThreshold;
    r.warnings.insert(r.warnings.begin(), os.str());
  }
  return r;
}

}  // namespace qpol
