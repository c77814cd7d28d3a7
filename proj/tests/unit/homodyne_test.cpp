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
#include "qpol/homodyne.hpp"
#include "qpol/state_factory.hpp"

namespace qpol {
namespace {

constexpr double kPi = std::numbers::pi;

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
};

SampleMoments moments(const std::vector<HomodyneRecord>& records, double phase) {
  double n = 0.0, s = 0.0, s2 = 0.0;
  for (const auto& r : records) {
    if (r.lo_phase != phase) continue;
    n += 1.0;
    s += r.value;
    s2 += r.value * r.value;
  }
  const double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

TEST(Wavefunctions, OrthonormalUpToForty) {
  const int count = 41;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(count, count);
  const int panels = 6000;
  const double lo = -14.0, hi = 14.0, h = (hi - lo) / panels;
  for (int i = 0; i <= panels; ++i) {
    const auto psi = fock_wavefunctions(count, lo + i * h);
    const Eigen::Map<const Eigen::VectorXd> v(psi.data(), count);
    gram += ((i == 0 || i == panels) ? 0.5 * h : h) * v * v.transpose();
  }
  EXPECT_NEAR((gram - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff(), 0.0, 1e-10);
}

TEST(Wavefunctions, LowOrderClosedForms) {
  for (double x : {-1.3, 0.0, 0.4, 2.2}) {
    const auto psi = fock_wavefunctions(3, x);
    const double g = std::pow(kPi, -0.25) * std::exp(-x * x / 2);
    EXPECT_NEAR(psi[0], g, 1e-15);
    EXPECT_NEAR(psi[1], std::sqrt(2.0) * x * g, 1e-15);
    EXPECT_NEAR(psi[2], (2 * x * x - 1) / std::sqrt(2.0) * g, 1e-15);
  }
  for (double v : fock_wavefunctions(41, 12.0)) EXPECT_TRUE(std::isfinite(v));
}

TEST(QuadraturePdf, VacuumIsGaussian) {
  const auto vac = SingleModeState::vacuum(8);
  for (double phase : {0.0, 1.0}) {
    for (double x : {-2.0, 0.0, 0.7}) {
      EXPECT_NEAR(quadrature_pdf(vac, phase, x), std::exp(-x * x) / std::sqrt(kPi), 1e-15);
    }
  }
}

TEST(QuadraturePdf, NormalizedAndNonNegative) {
  const auto s = squeezed_thermal(SqueezedThermalSpec::from_db(-3.8, 8.6), 40);
  for (double phase : {0.0, 0.7, kPi / 2}) {
    const QuadratureDensity pdf(s, phase);
    const double half = pdf.support_half_width();
    EXPECT_NEAR(oracle::integrate([&](double x) { return pdf(x); }, -half, half, 20000), 1.0, 1e-6);
    for (int i = 0; i <= 200; ++i) EXPECT_GE(pdf(-half + i * half / 100), 0.0);
  }
}

TEST(QuadraturePdf, SqueezedAxisVariance) {
  const double r = 0.6, axis = 0.3;
  const auto s = single_mode_squeezed_vacuum(r, axis, 40);
  const QuadratureDensity pdf(s, axis);
  const double var = oracle::integrate([&](double x) { return x * x * pdf(x); }, -12, 12, 20000);
  EXPECT_NEAR(var, 0.5 * std::exp(-2 * r), 1e-8);
}

TEST(QuadraturePdf, SinglePhotonIsBimodal) {
  const auto one = SingleModeState::number(1, 4);
  EXPECT_NEAR(quadrature_pdf(one, 0.3, 0.0), 0.0, 1e-16);
  for (double x : {-1.5, 0.5, 1.0})
    EXPECT_NEAR(quadrature_pdf(one, 0.3, x), 2 * x * x * std::exp(-x * x) / std::sqrt(kPi), 1e-15);
}

TEST(SampleHomodyne, VacuumVarianceWithinStatisticalBand) {
  const std::vector<double> phases{0.0};
  const auto data = sample_homodyne(SingleModeState::vacuum(4), Mode::H, phases, 100000, 1);
  ASSERT_EQ(data.records.size(), 100000u);
  const auto m = moments(data.records, 0.0);
  const double sigma = 0.5 * std::sqrt(2.0 / 100000);
  EXPECT_NEAR(m.variance, 0.5, 3 * sigma);
  EXPECT_NEAR(m.mean, 0.0, 3 * std::sqrt(0.5 / 100000));
}

TEST(SampleHomodyne, SqueezedEllipseAcrossPhases) {
  const double r = 0.5;
  const auto s = single_mode_squeezed_vacuum(r, 0.0, 40);
  const auto phases = default_lo_phases(12);
  const int n = 40000;
  const auto data = sample_homodyne(s, Mode::V, phases, n, 2);
  for (double phase : phases) {
    const double c = std::cos(phase), sn = std::sin(phase);
    const double expected = 0.5 * (std::exp(-2 * r) * c * c + std::exp(2 * r) * sn * sn);
    EXPECT_NEAR(moments(data.records, phase).variance, expected, 4 * expected * std::sqrt(2.0 / n));
  }
  EXPECT_EQ(data.count(Mode::V), 12u * n);
  EXPECT_EQ(data.count(Mode::H), 0u);
}

TEST(SampleHomodyne, DeterministicForFixedSeed) {
  const auto s = squeezed_thermal({0.4, 0.2, 0.1}, 20);
  const auto phases = default_lo_phases(3);
  const auto a = sample_homodyne(s, Mode::H, phases, 500, 99);
  const auto b = sample_homodyne(s, Mode::H, phases, 500, 99);
  const auto c = sample_homodyne(s, Mode::H, phases, 500, 100);
  EXPECT_EQ(dataset_to_csv(a), dataset_to_csv(b));
  EXPECT_NE(dataset_to_csv(a), dataset_to_csv(c));
}

TEST(DatasetCsv, RoundTripIsExact) {
  HomodyneDataset data;
  data.records = {{Mode::H, 0.0, 0.123456789012345678}, {Mode::V, kPi / 12, -3.0e-7}};
  const auto back = dataset_from_csv(dataset_to_csv(data));
  ASSERT_EQ(back.records.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.records[i].mode, data.records[i].mode);
    EXPECT_EQ(back.records[i].lo_phase, data.records[i].lo_phase);
    EXPECT_EQ(back.records[i].value, data.records[i].value);
  }
}

TEST(DatasetCsv, RejectsMalformedInput) {
  EXPECT_THROW(dataset_from_csv("a,b,c\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("mode,lo_phase,value\nX,0,1\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("mode,lo_phase,value\nH,0\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("mode,lo_phase,value\nH,4.0,1\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("mode,lo_phase,value\nH,0,nan\n"), std::invalid_argument);
  EXPECT_THROW(dataset_from_csv("mode,lo_phase,value\nH,0,abc\n"), std::invalid_argument);
}

TEST(Loss, KrausCompleteness) {
  for (double eta : {0.3, 0.87, 1.0}) {
    CMatrix sum = CMatrix::Zero(12, 12);
    for (const auto& e : loss_kraus_operators(12, eta)) sum += e.adjoint() * e;
    EXPECT_NEAR((sum - CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 0.0, 1e-13);
  }
  EXPECT_THROW(loss_kraus_operators(4, 0.0), std::invalid_argument);
  EXPECT_THROW(loss_kraus_operators(4, 1.2), std::invalid_argument);
}

TEST(Loss, IdentityAndSinglePhoton) {
  const auto s = squeezed_thermal({0.3, 0.1, 0.0}, 10);
  EXPECT_EQ((apply_loss(s, 1.0).density_matrix() - s.density_matrix()).cwiseAbs().maxCoeff(), 0.0);
  const auto lost = apply_loss(SingleModeState::number(1, 3), 0.87);
  const CMatrix rho = lost.density_matrix();
  EXPECT_NEAR(rho(0, 0).real(), 0.13, 1e-15);
  EXPECT_NEAR(rho(1, 1).real(), 0.87, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
}

TEST(Loss, GaussianQuadratureFormula) {
  const double r = 0.7, eta = 0.87;
  const auto s = single_mode_squeezed_vacuum(r, 0.0, 40);
  const auto lossy = apply_loss(s, eta);
  for (double phase : {0.0, kPi / 2, 0.5}) {
    const double v = quadrature_variance(s, phase);
    EXPECT_NEAR(quadrature_variance(lossy, phase), eta * v + (1 - eta) * 0.5, 1e-9);
  }
  EXPECT_NEAR(lossy.mean_photons(), eta * s.mean_photons(), 1e-12);
}

TEST(Loss, Composes) {
  const auto s = squeezed_thermal({0.5, 0.3, 0.2}, 25);
  const auto twice = apply_loss(apply_loss(s, 0.9), 0.8);
  const auto once = apply_loss(s, 0.72);
  EXPECT_NEAR((twice.density_matrix() - once.density_matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

}  // namespace
}  // namespace qpol
