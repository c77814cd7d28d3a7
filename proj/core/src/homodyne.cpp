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

#include "qpol/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qpol/errors.hpp"

namespace qpol {
namespace {

constexpr double kTabulationStep = 2e-3;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double half_width_for_dim(int dim) {
  return std::max(8.0, std::sqrt(2.0 * dim + 1.0) + 6.0);
}

}  // namespace

void fock_wavefunctions(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (out.size() == 1) return;
  out[1] = std::sqrt(2.0) * x * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double nn = static_cast<double>(n);
    out[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * x * out[n] - std::sqrt(nn / (nn + 1.0)) * out[n - 1];
  }
}

std::vector<double> fock_wavefunctions(int count, double x) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  fock_wavefunctions(x, out);
  return out;
}

QuadratureDensity::QuadratureDensity(const SingleModeState& state, double lo_phase)
    : psi_(static_cast<std::size_t>(state.dim())) {
  const CMatrix rho = state.density_matrix();
  const int d = state.dim();
  kernel_.resize(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      kernel_(m, n) = (rho(m, n) * std::polar(1.0, (n - m) * lo_phase)).real();
}

double QuadratureDensity::operator()(double x) const {
  fock_wavefunctions(x, psi_);
  const Eigen::Map<const Eigen::VectorXd> p(psi_.data(), static_cast<Eigen::Index>(psi_.size()));
  return std::max(0.0, p.dot(kernel_ * p));
}

double QuadratureDensity::support_half_width() const {
  return half_width_for_dim(static_cast<int>(kernel_.rows()));
}

double quadrature_pdf(const SingleModeState& state, double lo_phase, double x) {
  return QuadratureDensity(state, lo_phase)(x);
}

double quadrature_variance(const SingleModeState& state, double lo_phase) {
  // One extra level keeps x^2 exact on the truncated support.
  const SingleModeState s = state.resized(state.dim() + 1);
  const CMatrix a = annihilation_matrix(FockCutoff(s.dim())).matrix;
  const Complex e = std::polar(1.0, -lo_phase);
  const CMatrix x = (e * a + std::conj(e) * a.adjoint()) / std::sqrt(2.0);
  const double mean = expectation(s, x).real();
  const double second = expectation(s, x * x).real();
  return second - mean * mean;
}

std::size_t HomodyneDataset::count(Mode mode) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [&](const auto& r) { return r.mode == mode; }));
}

std::vector<HomodyneRecord> HomodyneDataset::for_mode(Mode mode) const {
  std::vector<HomodyneRecord> out;
  out.reserve(count(mode));
  for (const auto& r : records)
    if (r.mode == mode) out.push_back(r);
  return out;
}

void HomodyneDataset::append(const HomodyneDataset& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

std::vector<double> default_lo_phases(int count) {
  if (count < 1) throw std::invalid_argument("default_lo_phases: need at least one phase");
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(std::numbers::pi * j / count);
  return out;
}

HomodyneDataset sample_homodyne(const SingleModeState& state, Mode mode,
                                std::span<const double> phases, int samples_per_phase,
                                std::uint64_t seed) {
  if (samples_per_phase < 0) throw std::invalid_argument("sample_homodyne: negative sample count");
  std::mt19937_64 rng(seed);
  HomodyneDataset data;
  data.records.reserve(phases.size() * static_cast<std::size_t>(samples_per_phase));

  const double half = half_width_for_dim(state.dim());
  const int cells = static_cast<int>(std::ceil(2.0 * half / kTabulationStep));
  const double h = 2.0 * half / cells;
  std::vector<double> cdf(static_cast<std::size_t>(cells) + 1);

  for (double phase : phases) {
    if (!std::isfinite(phase)) throw std::invalid_argument("sample_homodyne: non-finite phase");
    const QuadratureDensity pdf(state, phase);
    // Trapezoid CDF; sampling inverts it piecewise linearly.
    double prev = pdf(-half);
    cdf[0] = 0.0;
    for (int i = 1; i <= cells; ++i) {
      const double cur = pdf(-half + i * h);
      cdf[i] = cdf[i - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
    const double total = cdf.back();
    for (int s = 0; s < samples_per_phase; ++s) {
      const double u = uniform01(rng) * total;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const auto i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.begin(), 1, cells));
      const double lo = cdf[i - 1];
      const double width = cdf[i] - lo;
      const double frac = width > 0.0 ? (u - lo) / width : 0.5;
      data.records.push_back({mode, phase, -half + (static_cast<double>(i - 1) + frac) * h});
    }
  }
  return data;
}

std::string dataset_to_csv(const HomodyneDataset& data) {
  std::string out = "mode,lo_phase,value\n";
  out.reserve(out.size() + data.records.size() * 48);
  char buf[96];
  for (const auto& r : data.records) {
    const int n = std::snprintf(buf, sizeof buf, "%c,%.17g,%.17g\n", r.mode == Mode::H ? 'H' : 'V',
                                r.lo_phase, r.value);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

HomodyneDataset dataset_from_csv(std::string_view text) {
  HomodyneDataset data;
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line != "mode,lo_phase,value") {
    throw std::invalid_argument("dataset CSV: expected header 'mode,lo_phase,value'");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": expected 3 fields");
    }
    const std::string mode = line.substr(0, c1);
    HomodyneRecord r;
    if (mode == "H") {
      r.mode = Mode::H;
    } else if (mode == "V") {
      r.mode = Mode::V;
    } else {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": mode must be H or V");
    }
    try {
      r.lo_phase = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      r.value = std::stod(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) + ": bad number");
    }
    if (!std::isfinite(r.lo_phase) || !std::isfinite(r.value) || r.lo_phase < 0.0 ||
        r.lo_phase >= std::numbers::pi) {
      throw std::invalid_argument("dataset CSV line " + std::to_string(lineno) +
                                  ": values must be finite with lo_phase in [0, pi)");
    }
    data.records.push_back(r);
  }
  return data;
}

void write_dataset_csv(const HomodyneDataset& data, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const auto text = dataset_to_csv(data);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

HomodyneDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return dataset_from_csv(ss.str());
}

std::vector<CMatrix> loss_kraus_operators(int dim, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("loss: efficiency must be in (0, 1]");
  std::vector<CMatrix> ops;
  if (eta == 1.0) {
    ops.push_back(CMatrix::Identity(dim, dim));
    return ops;
  }
  const double log_eta = std::log(eta);
  const double log_loss = std::log1p(-eta);
  for (int k = 0; k < dim; ++k) {
    CMatrix e = CMatrix::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      e(n - k, n) = std::exp(0.5 * (log_c + (n - k) * log_eta + k * log_loss));
    }
    ops.push_back(std::move(e));
  }
  return ops;
}

CMatrix apply_loss_channel(const CMatrix& rho, double eta) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : loss_kraus_operators(static_cast<int>(rho.rows()), eta)) {
    out += e * rho * e.adjoint();
  }
  return out;
}

CMatrix apply_loss_channel_adjoint(const CMatrix& op, double eta) {
  CMatrix out = CMatrix::Zero(op.rows(), op.cols());
  for (const auto& e : loss_kraus_operators(static_cast<int>(op.rows()), eta)) {
    out += e.adjoint() * op * e;
  }
  return out;
}

SingleModeState apply_loss(const SingleModeState& state, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("apply_loss: efficiency must be in (0, 1]");
  if (eta == 1.0) return state;
  CMatrix rho = apply_loss_channel(state.density_matrix(), eta);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return SingleModeState::mixed(std::move(rho), state.tail_probability());
}

}  // namespace qpol
