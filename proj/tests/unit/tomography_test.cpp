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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpol/stokes.hpp"
#include "qpol/tomography.hpp"

namespace qpol {
namespace {

SingleModeState projected(const SingleModeState& s, int dim) {
  CMatrix rho = s.density_matrix().topLeftCorner(dim, dim);
  rho /= rho.trace().real();
  return SingleModeState::mixed(std::move(rho));
}

ReconstructionConfig small_config() {
  ReconstructionConfig cfg;
  cfg.fock_dim = 8;
  return cfg;
}

HomodyneDataset sample(const SingleModeState& s, int per_phase, std::uint64_t seed) {
  return sample_homodyne(s, Mode::H, default_lo_phases(12), per_phase, seed);
}

TEST(ReconstructionConfig, Validation) {
  ReconstructionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.fock_dim = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.bin_width = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.efficiency = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_loss_handling("compensate"), LossHandling::compensate);
  EXPECT_EQ(to_string(LossHandling::simulate), "simulate");
  EXPECT_THROW(parse_loss_handling("ignore"), std::invalid_argument);
}

TEST(Mle, EmptyInputThrows) {
  HomodyneDataset empty;
  EXPECT_THROW(mle_reconstruct(empty, Mode::H, small_config()), std::invalid_argument);
  const auto data = sample(SingleModeState::vacuum(4), 100, 1);
  EXPECT_THROW(mle_reconstruct(data, Mode::V, small_config()), std::invalid_argument);
}

TEST(Mle, VacuumFidelity) {
  const auto vac = SingleModeState::vacuum(8);
  const auto result = mle_reconstruct(sample(vac, 20000, 3), Mode::H, small_config());
  EXPECT_TRUE(result.converged);
  EXPECT_GE(fidelity(result.state, vac), 0.995);
  EXPECT_EQ(result.samples_used + result.samples_dropped, 240000u);
  EXPECT_EQ(result.phases, 12);
}

TEST(Mle, VacuumFidelityAtFullStatistics) {
  const auto vac = SingleModeState::vacuum(16);
  ReconstructionConfig cfg;
  cfg.tolerance = 1e-12;
  cfg.max_iterations = 100000;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto result = mle_reconstruct(sample(vac, 100000, seed), Mode::H, cfg);
    EXPECT_TRUE(result.converged);
    EXPECT_GE(fidelity(result.state, vac), 0.999) << "seed " << seed;
  }
}

TEST(Mle, SqueezedFidelityAndMoments) {
  const auto truth = squeezed_thermal({0.4, 0.1, 0.3}, 30);
  const auto result = mle_reconstruct(sample(truth, 20000, 4), Mode::H, small_config());
  EXPECT_GE(fidelity(result.state, projected(truth, 8)), 0.99);
  EXPECT_NEAR(result.state.mean_photons(), truth.mean_photons(), 0.05);
}

TEST(Mle, ReconstructedDensityFitsHistogram) {
  const auto truth = single_mode_squeezed_vacuum(0.3, 0.2, 8);
  const auto phases = default_lo_phases(12);
  const auto data = sample_homodyne(truth, Mode::H, phases, 20000, 12);
  const auto result = mle_reconstruct(data, Mode::H, small_config());

  const double width = 0.25, half = 5.0;
  const int bins = static_cast<int>(2 * half / width);
  double chi2 = 0.0;
  int cells = 0;
  for (double phase : phases) {
    std::vector<double> observed(bins, 0.0);
    for (const auto& r : data.records)
      if (r.lo_phase == phase && std::abs(r.value) < half) observed[static_cast<int>((r.value + half) / width)] += 1;
    const QuadratureDensity pdf(result.state, phase);
    double pooled_o = 0.0, pooled_e = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double lo = -half + b * width;
      pooled_o += observed[b];
      pooled_e += 20000 * oracle::integrate([&](double x) { return pdf(x); }, lo, lo + width, 16);
      if (pooled_e < 5.0) continue;
      chi2 += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
      ++cells;
      pooled_o = pooled_e = 0.0;
    }
  }
  const double dof = cells - static_cast<double>(phases.size());
  // Wilson-Hilferty normal approximation of the chi-square upper tail.
  const double z = (std::cbrt(chi2 / dof) - (1 - 2 / (9 * dof))) / std::sqrt(2 / (9 * dof));
  const double p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
  EXPECT_GT(p_value, 0.01) << "chi2 " << chi2 << " dof " << dof;
}

TEST(Mle, TraceAndPositivityAfterOneIteration) {
  auto cfg = small_config();
  cfg.max_iterations = 1;
  const auto result =
      mle_reconstruct(sample(single_mode_squeezed_vacuum(0.3, 0, 20), 2000, 5), Mode::H, cfg);
  EXPECT_EQ(result.iterations, 1);
  const CMatrix rho = result.state.density_matrix();
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-14);
}

TEST(Mle, LikelihoodNeverDecreases) {
  auto cfg = small_config();
  cfg.max_iterations = 300;
  const auto result =
      mle_reconstruct(sample(squeezed_thermal({0.5, 0.2, 0}, 30), 5000, 6), Mode::H, cfg);
  ASSERT_GE(result.log_likelihood.size(), 2u);
  for (std::size_t i = 1; i < result.log_likelihood.size(); ++i) {
    EXPECT_GE(result.log_likelihood[i],
              result.log_likelihood[i - 1] - 1e-12 * std::abs(result.log_likelihood[i - 1]));
  }
}

TEST(Mle, Deterministic) {
  const auto data = sample(thermal_state(0.3, 20), 3000, 7);
  const auto a = mle_reconstruct(data, Mode::H, small_config());
  const auto b = mle_reconstruct(data, Mode::H, small_config());
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ((a.state.density_matrix() - b.state.density_matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mle, CompensateRecoversPreLossState) {
  const double eta = 0.8;
  const auto truth = single_mode_squeezed_vacuum(0.4, 0.0, 30);
  const auto lossy = apply_loss(truth, eta);
  const auto data = sample(lossy, 20000, 8);

  auto cfg = small_config();
  cfg.efficiency = eta;
  cfg.loss_handling = LossHandling::compensate;
  const auto recovered = mle_reconstruct(data, Mode::H, cfg);
  const auto naive = mle_reconstruct(data, Mode::H, small_config());
  EXPECT_GE(fidelity(recovered.state, projected(truth, 8)), 0.98);
  EXPECT_NEAR(recovered.state.mean_photons(), truth.mean_photons(), 0.04);
  EXPECT_NEAR(naive.state.mean_photons(), eta * truth.mean_photons(), 0.04);
}

TEST(Pipeline, VacuumDegreesAreZero) {
  auto cfg = small_config();
  TomographySampling sampling;
  sampling.samples_per_phase = 5000;
  sampling.source_dim = 8;
  DegreeOptions options;
  options.vacuum_threshold = 0.01;
  const auto vac = SingleModeState::vacuum(8);
  const auto result = run_tomography_pipeline(vac, vac, cfg, sampling, 11, options);
  EXPECT_LT(result.report.s0_mean, 0.01);
  EXPECT_EQ(result.report.p1, 0.0);
  EXPECT_EQ(result.report.p2, 0.0);
  EXPECT_EQ(result.report.p2_prime, 0.0);
  EXPECT_EQ(result.dataset.count(Mode::H), 60000u);
  EXPECT_EQ(result.dataset.count(Mode::V), 60000u);
}

TEST(Pipeline, Experiment2) {
  const auto spec = SqueezedThermalSpec::from_db(-3.8, 8.6);
  ReconstructionConfig cfg;
  TomographySampling sampling;
  const auto result = run_experiment2_pipeline(spec, cfg, sampling, 2026);
  const auto truth = squeezed_thermal(spec, sampling.source_dim);
  EXPECT_GE(fidelity(result.h.state, projected(truth, cfg.fock_dim)), 0.99);
  EXPECT_GE(fidelity(result.v.state, SingleModeState::vacuum(cfg.fock_dim)), 0.995);
  const auto direct = degree_report(stokes_moments(
      tensor_with_vacuum(truth, Mode::H, FockCutoff(sampling.source_dim))));
  EXPECT_NEAR(result.report.p2, direct.p2, 0.02);
  EXPECT_NEAR(result.report.p2_prime, direct.p2_prime, 0.02);
  EXPECT_NEAR(result.report.p1, direct.p1, 0.02);
}

TEST(Pipeline, ReconstructDatasetMatchesPipeline) {
  auto cfg = small_config();
  TomographySampling sampling;
  sampling.samples_per_phase = 2000;
  sampling.source_dim = 12;
  const auto h = coherent_single_mode({0.6, 0.2}, 12);
  const auto v = SingleModeState::vacuum(12);
  const auto piped = run_tomography_pipeline(h, v, cfg, sampling, 5);
  const auto again = reconstruct_dataset(piped.dataset, cfg);
  EXPECT_EQ(again.report.p2, piped.report.p2);
  EXPECT_EQ(again.h.iterations, piped.h.iterations);
}

}  // namespace
}  // namespace qpol
