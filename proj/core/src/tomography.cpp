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

#include "qpol/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "qpol/errors.hpp"
#include "qpol/stokes.hpp"

namespace qpol {
namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

constexpr std::uint64_t kModeSeedOffset = 0x9E3779B97F4A7C15ULL;

struct PhaseData {
  double phase = 0.0;
  Eigen::VectorXd counts;  // per bin
  std::vector<Complex> rotation;  // e^{i k theta}, k = -(d-1)..(d-1) shifted by d-1
};

class BinnedLikelihood {
 public:
  BinnedLikelihood(std::span<const HomodyneRecord> records, const ReconstructionConfig& config,
                   ReconstructionResult& diag)
      : dim_(config.fock_dim), efficiency_(config.efficiency),
        compensate_(config.loss_handling == LossHandling::compensate && config.efficiency < 1.0) {
    std::map<double, std::vector<double>> by_phase;
    for (const auto& r : records) {
      if (!std::isfinite(r.value) || !std::isfinite(r.lo_phase)) {
        throw std::invalid_argument("mle_reconstruct: non-finite record");
      }
      by_phase[r.lo_phase].push_back(r.value);
    }

    double reach = std::sqrt(2.0 * dim_ + 1.0) + 3.0;
    for (const auto& [phase, values] : by_phase) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size());
      reach = std::max(reach, std::abs(mean) + config.range_sigmas * std::sqrt(var));
    }
    const int bins = static_cast<int>(std::ceil(2.0 * reach / config.bin_width));
    half_ = 0.5 * bins * config.bin_width;
    const double width = 2.0 * half_ / bins;

    // Bin overlaps of number-state wavefunctions, flattened column-major.
    overlaps_ = Eigen::MatrixXd::Zero(bins, dim_ * dim_);
    std::vector<double> psi(static_cast<std::size_t>(dim_));
    for (int b = 0; b < bins; ++b) {
      const double lo = -half_ + b * width;
      for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
        const double x = lo + 0.5 * width * (kGlNodes[q] + 1.0);
        fock_wavefunctions(x, psi);
        const double w = 0.5 * width * kGlWeights[q];
        for (int n = 0; n < dim_; ++n)
          for (int m = 0; m < dim_; ++m) overlaps_(b, n * dim_ + m) += w * psi[m] * psi[n];
      }
    }

    for (const auto& [phase, values] : by_phase) {
      PhaseData pd;
      pd.phase = phase;
      pd.counts = Eigen::VectorXd::Zero(bins);
      for (double v : values) {
        const double t = (v + half_) / width;
        if (t < 0.0 || t >= bins) {
          ++diag.samples_dropped;
          continue;
        }
        pd.counts(static_cast<Eigen::Index>(t)) += 1.0;
        ++diag.samples_used;
      }
      for (int k = -(dim_ - 1); k <= dim_ - 1; ++k) pd.rotation.push_back(std::polar(1.0, k * phase));
      phases_.push_back(std::move(pd));
    }
    total_ = static_cast<double>(diag.samples_used);
    if (diag.samples_used == 0) throw std::invalid_argument("mle_reconstruct: no samples inside the binning range");
    if (compensate_) kraus_ = loss_kraus_operators(dim_, efficiency_);
    diag.phases = static_cast<int>(phases_.size());
    diag.bins_per_phase = bins;
    diag.range_half_width = half_;
  }

  double total() const { return total_; }

  /// Log-likelihood and the bin probabilities behind it.
  double evaluate(const CMatrix& rho, std::vector<Eigen::VectorXd>& probs) const {
    const CMatrix seen = detected(rho);
    probs.resize(phases_.size());
    double ll = 0.0;
    Eigen::VectorXd kernel(dim_ * dim_);
    for (std::size_t j = 0; j < phases_.size(); ++j) {
      const auto& pd = phases_[j];
      for (int n = 0; n < dim_; ++n)
        for (int m = 0; m < dim_; ++m)
          kernel(n * dim_ + m) = (seen(m, n) * pd.rotation[n - m + dim_ - 1]).real();
      probs[j] = overlaps_ * kernel;
      for (Eigen::Index b = 0; b < probs[j].size(); ++b) {
        const double f = pd.counts(b);
        if (f == 0.0) continue;
        const double p = probs[j](b);
        if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
        ll += f * std::log(p);
      }
    }
    return ll;
  }

  CMatrix gradient_operator(const std::vector<Eigen::VectorXd>& probs) const {
    CMatrix r = CMatrix::Zero(dim_, dim_);
    Eigen::VectorXd w;
    for (std::size_t j = 0; j < phases_.size(); ++j) {
      const auto& pd = phases_[j];
      w = Eigen::VectorXd::Zero(pd.counts.size());
      for (Eigen::Index b = 0; b < w.size(); ++b) {
        if (pd.counts(b) > 0.0) w(b) = pd.counts(b) / (total_ * probs[j](b));
      }
      const Eigen::VectorXd flat = overlaps_.transpose() * w;
      for (int n = 0; n < dim_; ++n)
        for (int m = 0; m < dim_; ++m) r(m, n) += flat(n * dim_ + m) * pd.rotation[m - n + dim_ - 1];
    }
    if (compensate_) {
      CMatrix back = CMatrix::Zero(dim_, dim_);
      for (const auto& e : kraus_) back += e.adjoint() * r * e;
      r = back;
    }
    return 0.5 * (r + r.adjoint());
  }

 private:
  CMatrix detected(const CMatrix& rho) const {
    if (!compensate_) return rho;
    CMatrix out = CMatrix::Zero(dim_, dim_);
    for (const auto& e : kraus_) out += e * rho * e.adjoint();
    return out;
  }

  int dim_;
  double efficiency_;
  bool compensate_;
  double half_ = 0.0;
  double total_ = 0.0;
  Eigen::MatrixXd overlaps_;
  std::vector<PhaseData> phases_;
  std::vector<CMatrix> kraus_;
};

CMatrix sandwich(const CMatrix& m, const CMatrix& rho) {
  CMatrix out = m * rho * m.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  out /= out.trace().real();
  return out;
}

}  // namespace

std::string to_string(LossHandling mode) {
  return mode == LossHandling::simulate ? "simulate" : "compensate";
}

LossHandling parse_loss_handling(const std::string& name) {
  if (name == "simulate") return LossHandling::simulate;
  if (name == "compensate") return LossHandling::compensate;
  throw std::invalid_argument("loss handling must be 'simulate' or 'compensate', got '" + name + "'");
}

void ReconstructionConfig::validate() const {
  if (fock_dim < 2) throw std::invalid_argument("reconstruction: fock_dim must be >= 2");
  if (max_iterations < 1) throw std::invalid_argument("reconstruction: max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("reconstruction: tolerance must be >= 0");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw std::invalid_argument("reconstruction: bin_width must be positive");
  }
  if (!(range_sigmas > 0.0) || !std::isfinite(range_sigmas)) {
    throw std::invalid_argument("reconstruction: range_sigmas must be positive");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("reconstruction: efficiency must be in (0, 1]");
  }
}

void TomographySampling::validate() const {
  if (phases < 1) throw std::invalid_argument("tomography: phases must be >= 1");
  if (samples_per_phase < 1) throw std::invalid_argument("tomography: samples_per_phase must be >= 1");
  if (source_dim < 2) throw std::invalid_argument("tomography: source_dim must be >= 2");
}

ReconstructionResult mle_reconstruct(std::span<const HomodyneRecord> records,
                                     const ReconstructionConfig& config) {
  config.validate();
  if (records.empty()) throw std::invalid_argument("mle_reconstruct: empty dataset");

  ReconstructionResult result;
  const BinnedLikelihood model(records, config, result);
  const int d = config.fock_dim;
  const CMatrix identity = CMatrix::Identity(d, d);

  CMatrix rho = identity / static_cast<double>(d);
  std::vector<Eigen::VectorXd> probs;
  std::vector<Eigen::VectorXd> trial_probs;
  double ll = model.evaluate(rho, probs);
  result.log_likelihood.push_back(ll);

  for (int it = 0; it < config.max_iterations; ++it) {
    const CMatrix r = model.gradient_operator(probs);
    CMatrix next = sandwich(r, rho);
    double next_ll = model.evaluate(next, trial_probs);
    // Fall back to (1 + eps R) rho (1 + eps R), which increases the
    // likelihood for small enough eps unless rho is already stationary.
    double eps = 1.0;
    while (!(next_ll >= ll) && eps > 1e-12) {
      next = sandwich(identity + eps * r, rho);
      next_ll = model.evaluate(next, trial_probs);
      eps *= 0.5;
    }
    if (!(next_ll >= ll)) {
      result.converged = true;
      break;
    }
    const double gain = next_ll - ll;
    rho = std::move(next);
    std::swap(probs, trial_probs);
    ll = next_ll;
    result.log_likelihood.push_back(ll);
    result.iterations = it + 1;
    if (gain <= config.tolerance * model.total()) {
      result.converged = true;
      break;
    }
  }

  // SingleModeState::mixed throws NumericalError on a non-PSD iterate.
  result.state = SingleModeState::mixed(std::move(rho));
  return result;
}

ReconstructionResult mle_reconstruct(const HomodyneDataset& data, Mode mode,
                                     const ReconstructionConfig& config) {
  const auto records = data.for_mode(mode);
  return mle_reconstruct(std::span<const HomodyneRecord>(records), config);
}

TomographyResult reconstruct_dataset(HomodyneDataset data, const ReconstructionConfig& config,
                                     const DegreeOptions& options) {
  TomographyResult out;
  out.dataset = std::move(data);
  out.h = mle_reconstruct(out.dataset, Mode::H, config);
  out.v = mle_reconstruct(out.dataset, Mode::V, config);
  out.reconstructed = tensor_product(out.h.state, out.v.state);
  out.report = degree_report(stokes_moments(out.reconstructed), options);
  return out;
}

TomographyResult run_tomography_pipeline(const SingleModeState& h_true,
                                         const SingleModeState& v_true,
                                         const ReconstructionConfig& config,
                                         const TomographySampling& sampling, std::uint64_t seed,
                                         const DegreeOptions& options) {
  config.validate();
  sampling.validate();
  const auto phases = default_lo_phases(sampling.phases);
  const auto measured = [&](const SingleModeState& s) {
    return config.efficiency < 1.0 ? apply_loss(s, config.efficiency) : s;
  };
  HomodyneDataset data =
      sample_homodyne(measured(h_true), Mode::H, phases, sampling.samples_per_phase, seed);
  data.append(sample_homodyne(measured(v_true), Mode::V, phases, sampling.samples_per_phase,
                              seed + kModeSeedOffset));
  return reconstruct_dataset(std::move(data), config, options);
}

TomographyResult run_experiment2_pipeline(const SqueezedThermalSpec& spec,
                                          const ReconstructionConfig& config,
                                          const TomographySampling& sampling, std::uint64_t seed,
                                          const DegreeOptions& options) {
  spec.validate();
  sampling.validate();
  return run_tomography_pipeline(squeezed_thermal(spec, sampling.source_dim),
                                 SingleModeState::vacuum(sampling.source_dim), config, sampling,
                                 seed, options);
}

}  // namespace qpol
