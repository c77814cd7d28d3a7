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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpol/degrees.hpp"
#include "qpol/homodyne.hpp"
#include "qpol/state_factory.hpp"
#include "qpol/states.hpp"

namespace qpol {

enum class LossHandling {
  simulate,    // loss applied to the state before sampling; ideal detector POVM
  compensate,  // lossy POVM inside the likelihood, recovering the pre-loss state
};

std::string to_string(LossHandling mode);
LossHandling parse_loss_handling(const std::string& name);

struct ReconstructionConfig {
  int fock_dim = 16;
  int max_iterations = 5000;
  // Stop once the log-likelihood gain per sample drops below this.
  double tolerance = 1e-9;
  double bin_width = 0.1;
  double range_sigmas = 6.0;
  double efficiency = 1.0;
  LossHandling loss_handling = LossHandling::simulate;

  void validate() const;  // std::invalid_argument
};

struct ReconstructionResult {
  SingleModeState state = SingleModeState::vacuum(1);
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood;  // one entry per accepted iterate, seed first
  std::size_t samples_used = 0;
  std::size_t samples_dropped = 0;
  int phases = 0;
  int bins_per_phase = 0;
  double range_half_width = 0.0;
};

/// Iterative R rho R maximum-likelihood reconstruction from binned quadrature
/// data of a single mode, seeded with the maximally mixed state. Steps that
/// would lower the likelihood are diluted until they do not.
ReconstructionResult mle_reconstruct(std::span<const HomodyneRecord> records,
                                     const ReconstructionConfig& config);
ReconstructionResult mle_reconstruct(const HomodyneDataset& data, Mode mode,
                                     const ReconstructionConfig& config);

struct TomographySampling {
  int phases = 12;
  int samples_per_phase = 100000;
  int source_dim = 40;  // cutoff of the simulated true state

  void validate() const;
};

struct TomographyResult {
  HomodyneDataset dataset;
  ReconstructionResult h;
  ReconstructionResult v;
  TwoModeState reconstructed = TwoModeState::vacuum(FockCutoff(1));
  DegreeReport report;
};

/// Reconstructs both modes of an existing dataset and reports the degrees of
/// rho_H (x) rho_V.
TomographyResult reconstruct_dataset(HomodyneDataset data, const ReconstructionConfig& config,
                                     const DegreeOptions& options = {});

/// Samples each mode independently (H with seed, V with a derived seed),
/// applies detection loss when configured, and reconstructs.
TomographyResult run_tomography_pipeline(const SingleModeState& h_true,
                                         const SingleModeState& v_true,
                                         const ReconstructionConfig& config,
                                         const TomographySampling& sampling, std::uint64_t seed,
                                         const DegreeOptions& options = {});

/// Squeezed thermal light in H, vacuum in V.
TomographyResult run_experiment2_pipeline(const SqueezedThermalSpec& spec,
                                          const ReconstructionConfig& config,
                                          const TomographySampling& sampling, std::uint64_t seed,
                                          const DegreeOptions& options = {});

}  // namespace qpol
