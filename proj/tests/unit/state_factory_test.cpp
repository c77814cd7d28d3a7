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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpol/diagnostics.hpp"
#include "qpol/errors.hpp"
#include "qpol/homodyne.hpp"
#include "qpol/state_factory.hpp"
#include "qpol/stokes.hpp"

namespace qpol {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(TwoModeNumber, BasisStates) {
  const FockCutoff c(4);
  const auto s = two_mode_number(2, 0, c);
  const auto m = stokes_moments(s);
  EXPECT_NEAR(m.mean_vector.z(), 2.0, 1e-14);
  EXPECT_NEAR(m.covariance(2, 2), 0.0, 1e-14);
  const auto vac = stokes_moments(two_mode_number(0, 0, c));
  EXPECT_EQ(vac.s0_mean, 0.0);
  EXPECT_EQ(vac.mean_vector.norm(), 0.0);
  EXPECT_EQ(vac.covariance.norm(), 0.0);
  EXPECT_THROW(two_mode_number(4, 0, c), std::out_of_range);
}

TEST(TwoModeCoherent, ZeroAmplitudeIsVacuum) {
  const auto s = two_mode_coherent(0.0, 0.0, FockCutoff(5));
  EXPECT_NEAR(s.population(0, 0), 1.0, 1e-15);
  EXPECT_EQ(s.tail_probability(), 0.0);
}

TEST(TwoModeCoherent, CovarianceIsIsotropic) {
  const Complex alpha(0.8, -0.3), beta(-0.2, 0.9);
  const auto s = two_mode_coherent(alpha, beta, FockCutoff(24));
  const auto m = stokes_moments(s);
  const double nbar = std::norm(alpha) + std::norm(beta);
  EXPECT_LT(s.tail_probability(), 1e-12);
  EXPECT_NEAR(m.s0_mean, nbar, 1e-10);
  EXPECT_NEAR((m.covariance - nbar * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(TwoModeCoherent, WarnsOnLargeTail) {
  ScopedWarningCapture capture;
  const auto s = two_mode_coherent(2.0, 0.0, FockCutoff(6));
  EXPECT_GT(s.tail_probability(), 1e-6);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(CoherentSingleMode, TailMatchesPoisson) {
  const auto s = coherent_single_mode(1.5, 8);
  double inside = 0.0;
  for (int n = 0; n < 8; ++n) inside += oracle::poisson_pmf(2.25, n);
  EXPECT_NEAR(s.tail_probability(), 1.0 - inside, 1e-12);
}

TEST(Su2Coherent, IdentityDisplacement) {
  const FockCutoff c(3);
  const auto s = su2_coherent({1, 0.0, 0.0}, c);
  EXPECT_NEAR(s.population(0, 1), 1.0, 1e-15);
  EXPECT_THROW(su2_coherent({3, 0.1, 0.0}, c), std::out_of_range);
}

TEST(Su2Coherent, UncertaintyEquality) {
  for (double th : {0.0, 0.4, 1.3, 2.9}) {
    for (double ph : {0.0, 1.0, 4.0}) {
      const auto m = stokes_moments(su2_coherent({5, th, ph}, FockCutoff(6)));
      EXPECT_NEAR(m.total_variance, 10.0, 1e-10);
      EXPECT_NEAR(m.s0_mean, 5.0, 1e-12);
    }
  }
}

TEST(Su2Coherent, HalfTurnAmplitudes) {
  const FockCutoff c(3);
  const auto s = su2_coherent({2, kPi / 2, 0.0}, c);
  const double expected[] = {0.5, 1.0 / std::sqrt(2.0), 0.5};
  for (int k = 0; k <= 2; ++k) {
    const auto [nh, nv] = basis_index(2, k, c);
    EXPECT_NEAR(std::abs(s.amplitudes()(c.index(nh, nv))), expected[k], 1e-14);
  }
}

TEST(Su2Coherent, MatchesWignerSmallD) {
  // D(theta, 0) = exp(i theta J_y) maps |j, -j> to sum_m d^j_{m,-j}(-theta) |j, m>.
  const FockCutoff c(8);
  for (int n : {1, 3, 6}) {
    for (double th : {0.3, 1.7, 2.8}) {
      const auto s = su2_coherent({n, th, 0.0}, c);
      for (int k = 0; k <= n; ++k) {
        const double j = n / 2.0;
        const double ref = oracle::wigner_small_d(j, k - j, -j, -th);
        const Complex amp = s.amplitudes()(c.index(k, n - k));
        EXPECT_NEAR(amp.real(), ref, 1e-12) << "N=" << n << " k=" << k << " theta=" << th;
        EXPECT_NEAR(amp.imag(), 0.0, 1e-12);
      }
    }
  }
}

TEST(Su2Coherent, ConfinedToOneBlock) {
  const auto sector = project_polarization_sector(su2_coherent({4, 1.0, 2.0}, FockCutoff(6)));
  int nonzero = 0;
  for (const auto& b : sector.blocks()) nonzero += b.weight > 0.0 ? 1 : 0;
  EXPECT_EQ(nonzero, 1);
}

TEST(SqueezedVacuum, ZeroSqueezingIsVacuum) {
  const auto s = single_mode_squeezed_vacuum(0.0, 0.0, 6);
  EXPECT_NEAR(std::abs(s.amplitudes()(0)), 1.0, 1e-15);
}

TEST(SqueezedVacuum, MeanPhotonNumber) {
  const auto s = single_mode_squeezed_vacuum(0.5, 0.0, 40);
  const CVector ref = oracle::squeezed_vacuum_amplitudes(0.5, 0.0, 40);
  double brute = 0.0;
  for (int n = 0; n < 40; ++n) brute += n * std::norm(ref(n));
  EXPECT_NEAR(brute, std::sinh(0.5) * std::sinh(0.5), 1e-12);
  EXPECT_NEAR(s.mean_photons(), brute, 1e-12);
  EXPECT_NEAR(s.mean_photons(), 0.2715403174, 1e-9);
}

TEST(SqueezedVacuum, ClosedFormAmplitudes) {
  for (double r : {0.3, 0.7, 1.0}) {
    for (double axis : {0.0, 0.4, kPi / 2}) {
      const int d = 30;
      const auto s = single_mode_squeezed_vacuum(r, axis, d);
      const CVector ref = oracle::squeezed_vacuum_amplitudes(r, axis, d);
      // The truncated state is renormalized by 1/sqrt(1 - tail).
      const CVector raw = s.amplitudes() * std::sqrt(1.0 - s.tail_probability());
      EXPECT_LT((raw - ref).cwiseAbs().maxCoeff(), 1e-10) << "r=" << r << " axis=" << axis;
      for (int n = 1; n < d; n += 2) EXPECT_EQ(s.amplitudes()(n), Complex(0.0));
    }
  }
}

TEST(SqueezedVacuum, QuadratureVariances) {
  const double r = 0.6;
  const auto s = single_mode_squeezed_vacuum(r, 0.3, 40);
  EXPECT_NEAR(2 * quadrature_variance(s, 0.3), std::exp(-2 * r), 1e-9);
  EXPECT_NEAR(2 * quadrature_variance(s, 0.3 + kPi / 2), std::exp(2 * r), 1e-8);
}

TEST(SqueezedThermalSpec, FromDecibels) {
  const auto spec = SqueezedThermalSpec::from_db(-3.8, 8.6);
  EXPECT_NEAR(spec.v_min(), std::pow(10.0, -0.38), 1e-12);
  EXPECT_NEAR(spec.v_max(), std::pow(10.0, 0.86), 1e-12);
  EXPECT_NEAR(spec.v_min() * spec.v_max(), std::pow(2 * spec.n_th + 1, 2), 1e-12);
  EXPECT_NEAR(spec.r, 0.7138, 1e-4);
  EXPECT_NEAR(spec.n_th, 0.3689, 1e-4);
  EXPECT_THROW(SqueezedThermalSpec::from_db(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(SqueezedThermalSpec::from_db(-3.0, 1.0), std::invalid_argument);  // below the bound
}

TEST(SqueezedThermal, VacuumLimit) {
  const auto s = squeezed_thermal({0.0, 0.0, 0.0}, 5);
  EXPECT_NEAR(s.density_matrix()(0, 0).real(), 1.0, 1e-14);
}

TEST(SqueezedThermal, ThermalLimitIsBoseEinstein) {
  const auto s = squeezed_thermal({0.0, 0.5, 0.0}, 40);
  const auto p = s.photon_distribution();
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(p[n], std::pow(0.5, n) / std::pow(1.5, n + 1), 1e-12);
}

TEST(SqueezedThermal, GaussianMomentsAtLargeCutoff) {
  const auto spec = SqueezedThermalSpec::from_db(-3.8, 8.6);
  const auto s = squeezed_thermal(spec, 50);
  const double nbar = oracle::gaussian_mean_photons(spec.v_min(), spec.v_max());
  const double var = oracle::gaussian_photon_variance(spec.v_min(), spec.v_max());
  EXPECT_NEAR(nbar, 1.4153, 1e-4);
  EXPECT_NEAR(var, 6.3318, 1e-4);
  EXPECT_LT(s.tail_probability(), 2e-7);
  EXPECT_NEAR(s.mean_photons(), nbar, 1e-4);
  EXPECT_NEAR(s.photon_variance(), var, 2e-3);
}

TEST(SqueezedThermal, QuadratureVariancesMatchParameters) {
  const SqueezedThermalSpec spec{0.5, 0.2, 0.7};
  const auto s = squeezed_thermal(spec, 40);
  EXPECT_NEAR(2 * quadrature_variance(s, 0.7), spec.v_min(), 1e-8);
  EXPECT_NEAR(2 * quadrature_variance(s, 0.7 + kPi / 2), spec.v_max(), 1e-7);
}

TEST(SqueezedThermal, ReportsTail) {
  ScopedWarningCapture capture;
  const auto s = squeezed_thermal(SqueezedThermalSpec::from_db(-3.8, 8.6), 16);
  EXPECT_NEAR(s.tail_probability(), 2.936e-3, 1e-5);
  EXPECT_FALSE(capture.messages().empty());
}

TEST(TensorWithVacuum, Products) {
  const FockCutoff c(4);
  const auto vac = tensor_with_vacuum(SingleModeState::vacuum(4), Mode::H, c);
  EXPECT_NEAR(vac.population(0, 0), 1.0, 1e-15);
  const auto v1 = tensor_with_vacuum(SingleModeState::number(2, 4), Mode::V, c);
  EXPECT_NEAR(v1.population(0, 2), 1.0, 1e-15);
  EXPECT_THROW(tensor_with_vacuum(SingleModeState::vacuum(3), Mode::H, c), DimensionError);
}

}  // namespace
}  // namespace qpol
