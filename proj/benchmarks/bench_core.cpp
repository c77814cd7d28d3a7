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

#include <benchmark/benchmark.h>

#include "qpol/degrees.hpp"
#include "qpol/diagnostics.hpp"
#include "qpol/homodyne.hpp"
#include "qpol/poincare.hpp"
#include "qpol/state_factory.hpp"
#include "qpol/stokes.hpp"
#include "qpol/tomography.hpp"

namespace {

using namespace qpol;

const bool kQuiet = [] {
  set_warning_handler([](std::string_view) {});
  return true;
}();

TwoModeState experiment2(int cutoff) {
  return tensor_with_vacuum(squeezed_thermal(SqueezedThermalSpec::from_db(-3.8, 8.6), cutoff),
                            Mode::H, FockCutoff(cutoff));
}

void BM_SqueezedThermal(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const auto spec = SqueezedThermalSpec::from_db(-3.8, 8.6);
  for (auto _ : st) benchmark::DoNotOptimize(squeezed_thermal(spec, d));
}
BENCHMARK(BM_SqueezedThermal)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_MomentsSector(benchmark::State& st) {
  const auto s = experiment2(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(stokes_moments(s));
}
BENCHMARK(BM_MomentsSector)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_MomentsDense(benchmark::State& st) {
  const auto s = experiment2(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(stokes_moments_dense(s));
}
BENCHMARK(BM_MomentsDense)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_JacobiEigen(benchmark::State& st) {
  const Eigen::Matrix3d g = stokes_moments(experiment2(16)).covariance +
                            Eigen::Matrix3d::Constant(0.1);
  for (auto _ : st) benchmark::DoNotOptimize(jacobi_eigen_symmetric(g));
}
BENCHMARK(BM_JacobiEigen);

void BM_VarianceMap(benchmark::State& st) {
  const auto m = stokes_moments(experiment2(16));
  const SphereGrid grid(static_cast<int>(st.range(0)), 2 * static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(variance_map(m, grid));
}
BENCHMARK(BM_VarianceMap)->Arg(91)->Arg(181);

void BM_DarkPlaneMinimum(benchmark::State& st) {
  const auto model = BrightBeamModel::fit_to_minimum(-5.0, 0.035, 0.017, 10.0);
  for (auto _ : st) benchmark::DoNotOptimize(find_dark_plane_minimum(model));
}
BENCHMARK(BM_DarkPlaneMinimum);

void BM_SampleHomodyne(benchmark::State& st) {
  const auto h = squeezed_thermal(SqueezedThermalSpec::from_db(-3.8, 8.6), 40);
  const auto phases = default_lo_phases(12);
  for (auto _ : st) benchmark::DoNotOptimize(sample_homodyne(h, Mode::H, phases, 10000, 1));
  st.SetItemsProcessed(st.iterations() * 12 * 10000);
}
BENCHMARK(BM_SampleHomodyne)->Unit(benchmark::kMillisecond);

void BM_MleIterations(benchmark::State& st) {
  const auto h = squeezed_thermal(SqueezedThermalSpec::from_db(-3.8, 8.6), 40);
  const auto data = sample_homodyne(h, Mode::H, default_lo_phases(12), 20000, 1);
  ReconstructionConfig cfg;
  cfg.max_iterations = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mle_reconstruct(data, Mode::H, cfg));
}
BENCHMARK(BM_MleIterations)->Arg(1)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
