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

#include "qpol/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpol/errors.hpp"

namespace qpol {
namespace {

bool all_finite(const auto& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void check_tail(double tail) {
  if (!(tail >= 0.0 && tail <= 1.0)) {
    throw std::invalid_argument("tail probability must lie in [0, 1], got " +
                                std::to_string(tail));
  }
}

void validate_pure(const CVector& v, Eigen::Index expected_dim) {
  if (v.size() != expected_dim) {
    throw DimensionError("pure state has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(expected_dim));
  }
  if (!all_finite(v)) throw NumericalError("pure state has non-finite amplitudes");
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kPureNormTolerance) {
    throw NumericalError("pure state norm deviates from 1 by " + std::to_string(norm - 1.0));
  }
}

// PSD check restricted to the rows/columns that carry any weight, which keeps
// product states such as rho (x) |0><0| cheap to validate at large cutoff.
double min_eigenvalue_on_support(const CMatrix& rho) {
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if (rho.row(i).cwiseAbs().maxCoeff() > 0.0) support.push_back(i);
  }
  if (support.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(support.size());
  CMatrix sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = rho(support[i], support[j]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void validate_hermitian_psd(const CMatrix& rho, const char* what) {
  if (!all_finite(rho)) throw NumericalError(std::string(what) + " has non-finite entries");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    throw NumericalError(std::string(what) + " is not Hermitian (max asymmetry " +
                         std::to_string(asym) + ")");
  }
  const double lambda_min = min_eigenvalue_on_support(rho);
  if (lambda_min < kEigenvalueFloor) {
    throw NumericalError(std::string(what) + " has negative eigenvalue " +
                         std::to_string(lambda_min));
  }
}

void validate_mixed(const CMatrix& rho, Eigen::Index expected_dim) {
  if (rho.rows() != expected_dim || rho.cols() != expected_dim) {
    throw DimensionError("density matrix is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", expected " +
                         std::to_string(expected_dim));
  }
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTolerance) {
    throw NumericalError("density matrix trace deviates from 1 by " +
                         std::to_string(std::abs(tr - 1.0)));
  }
  validate_hermitian_psd(rho, "density matrix");
}

std::vector<double> diagonal_of(const std::variant<CVector, CMatrix>& data) {
  std::vector<double> out;
  if (const auto* v = std::get_if<CVector>(&data)) {
    out.resize(static_cast<std::size_t>(v->size()));
    for (Eigen::Index i = 0; i < v->size(); ++i) out[i] = std::norm((*v)(i));
  } else {
    const auto& m = std::get<CMatrix>(data);
    out.resize(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] = m(i, i).real();
  }
  return out;
}

Complex expectation_impl(const std::variant<CVector, CMatrix>& data, const CMatrix& op) {
  if (const auto* v = std::get_if<CVector>(&data)) {
    if (op.rows() != v->size() || op.cols() != v->size()) {
      throw DimensionError("expectation: operator/state dimension mismatch");
    }
    return v->dot(op * (*v));
  }
  const auto& rho = std::get<CMatrix>(data);
  if (op.rows() != rho.rows() || op.cols() != rho.cols()) {
    throw DimensionError("expectation: operator/state dimension mismatch");
  }
  // tr(rho O) = sum_ij rho_ij O_ji
  return (rho.array() * op.transpose().array()).sum();
}

}  // namespace

// ---------------------------------------------------------------- single mode

SingleModeState SingleModeState::pure(CVector amplitudes, double tail_probability) {
  check_tail(tail_probability);
  if (amplitudes.size() < 1) throw DimensionError("single-mode state needs dim >= 1");
  validate_pure(amplitudes, amplitudes.size());
  return SingleModeState(std::move(amplitudes), tail_probability);
}

SingleModeState SingleModeState::mixed(CMatrix rho, double tail_probability) {
  check_tail(tail_probability);
  if (rho.rows() < 1) throw DimensionError("single-mode state needs dim >= 1");
  validate_mixed(rho, rho.rows());
  return SingleModeState(std::move(rho), tail_probability);
}

SingleModeState SingleModeState::vacuum(int dim) { return number(0, dim); }

SingleModeState SingleModeState::number(int n, int dim) {
  if (dim < 1 || n < 0 || n >= dim) {
    throw std::out_of_range("number state |" + std::to_string(n) +
                            "> not representable in dimension " + std::to_string(dim));
  }
  CVector v = CVector::Zero(dim);
  v(n) = 1.0;
  return SingleModeState(std::move(v), 0.0);
}

int SingleModeState::dim() const {
  return static_cast<int>(is_pure() ? std::get<CVector>(data_).size()
                                    : std::get<CMatrix>(data_).rows());
}

const CVector& SingleModeState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("amplitudes() called on a mixed state");
  return std::get<CVector>(data_);
}

const CMatrix& SingleModeState::matrix() const {
  if (is_pure()) throw std::logic_error("matrix() called on a pure state");
  return std::get<CMatrix>(data_);
}

CMatrix SingleModeState::density_matrix() const {
  if (is_pure()) {
    const auto& v = std::get<CVector>(data_);
    return v * v.adjoint();
  }
  return std::get<CMatrix>(data_);
}

std::vector<double> SingleModeState::photon_distribution() const { return diagonal_of(data_); }

double SingleModeState::mean_photons() const {
  const auto p = photon_distribution();
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

double SingleModeState::photon_variance() const {
  const auto p = photon_distribution();
  const double m = mean_photons();
  double v = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double dn = static_cast<double>(n) - m;
    v += dn * dn * p[n];
  }
  return v;
}

SingleModeState SingleModeState::resized(int new_dim) const {
  if (new_dim < 1) throw DimensionError("resized: dimension must be >= 1");
  const int d = dim();
  if (new_dim < d) {
    const auto p = photon_distribution();
    const double dropped = std::accumulate(p.begin() + new_dim, p.end(), 0.0);
    if (dropped > 0.0) {
      throw DimensionError("resized: truncation would drop probability " +
                           std::to_string(dropped));
    }
  }
  const int keep = std::min(d, new_dim);
  if (is_pure()) {
    CVector v = CVector::Zero(new_dim);
    v.head(keep) = std::get<CVector>(data_).head(keep);
    return SingleModeState(std::move(v), tail_);
  }
  CMatrix m = CMatrix::Zero(new_dim, new_dim);
  m.topLeftCorner(keep, keep) = std::get<CMatrix>(data_).topLeftCorner(keep, keep);
  return SingleModeState(std::move(m), tail_);
}

// ------------------------------------------------------------------- two mode

TwoModeState TwoModeState::pure(FockCutoff cutoff, CVector amplitudes, double tail_probability) {
  check_tail(tail_probability);
  validate_pure(amplitudes, cutoff.two_mode_dim());
  return TwoModeState(cutoff, std::move(amplitudes), tail_probability);
}

TwoModeState TwoModeState::mixed(FockCutoff cutoff, CMatrix rho, double tail_probability) {
  check_tail(tail_probability);
  validate_mixed(rho, cutoff.two_mode_dim());
  return TwoModeState(cutoff, std::move(rho), tail_probability);
}

TwoModeState TwoModeState::vacuum(FockCutoff cutoff) {
  CVector v = CVector::Zero(cutoff.two_mode_dim());
  v(0) = 1.0;
  return TwoModeState(cutoff, std::move(v), 0.0);
}

const CVector& TwoModeState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("amplitudes() called on a mixed state");
  return std::get<CVector>(data_);
}

const CMatrix& TwoModeState::matrix() const {
  if (is_pure()) throw std::logic_error("matrix() called on a pure state");
  return std::get<CMatrix>(data_);
}

CMatrix TwoModeState::density_matrix() const {
  if (is_pure()) {
    const auto& v = std::get<CVector>(data_);
    return v * v.adjoint();
  }
  return std::get<CMatrix>(data_);
}

double TwoModeState::population(int n_h, int n_v) const {
  if (!cutoff_.representable(n_h, n_v)) return 0.0;
  const auto i = static_cast<Eigen::Index>(cutoff_.index(n_h, n_v));
  if (is_pure()) return std::norm(std::get<CVector>(data_)(i));
  return std::get<CMatrix>(data_)(i, i).real();
}

SingleModeState TwoModeState::marginal(Mode mode) const {
  const int d = cutoff_.dim();
  CMatrix r = CMatrix::Zero(d, d);
  auto idx = [&](int own, int other) {
    return static_cast<Eigen::Index>(mode == Mode::H ? cutoff_.index(own, other)
                                                     : cutoff_.index(other, own));
  };
  if (is_pure()) {
    const auto& v = std::get<CVector>(data_);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int s = 0; s < d; ++s) r(i, j) += v(idx(i, s)) * std::conj(v(idx(j, s)));
  } else {
    const auto& m = std::get<CMatrix>(data_);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int s = 0; s < d; ++s) r(i, j) += m(idx(i, s), idx(j, s));
  }
  r = 0.5 * (r + r.adjoint()).eval();
  r /= r.trace().real();
  return SingleModeState::mixed(std::move(r), tail_);
}

TwoModeState tensor_product(const SingleModeState& h, const SingleModeState& v) {
  if (h.dim() != v.dim()) {
    throw DimensionError("tensor_product: mode dimensions differ (" + std::to_string(h.dim()) +
                         " vs " + std::to_string(v.dim()) + ")");
  }
  const FockCutoff cutoff(h.dim());
  const int d = h.dim();
  const double tail = 1.0 - (1.0 - h.tail_probability()) * (1.0 - v.tail_probability());
  if (h.is_pure() && v.is_pure()) {
    CVector psi(cutoff.two_mode_dim());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        psi(static_cast<Eigen::Index>(cutoff.index(i, j))) = h.amplitudes()(i) * v.amplitudes()(j);
    psi /= psi.norm();
    return TwoModeState::pure(cutoff, std::move(psi), tail);
  }
  const CMatrix a = h.density_matrix();
  const CMatrix b = v.density_matrix();
  CMatrix rho = CMatrix::Zero(cutoff.two_mode_dim(), cutoff.two_mode_dim());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          rho(static_cast<Eigen::Index>(cutoff.index(i, j)),
              static_cast<Eigen::Index>(cutoff.index(k, l))) = aik * b(j, l);
    }
  rho /= rho.trace().real();
  return TwoModeState::mixed(cutoff, std::move(rho), tail);
}

Complex expectation(const TwoModeState& state, const CMatrix& op) {
  if (state.is_pure()) return expectation_impl(state.amplitudes(), op);
  return expectation_impl(state.matrix(), op);
}

Complex expectation(const SingleModeState& state, const CMatrix& op) {
  if (state.is_pure()) return expectation_impl(state.amplitudes(), op);
  return expectation_impl(state.matrix(), op);
}

double fidelity(const SingleModeState& a, const SingleModeState& b) {
  const int d = std::max(a.dim(), b.dim());
  const SingleModeState x = a.resized(d);
  const SingleModeState y = b.resized(d);
  if (x.is_pure()) return std::max(0.0, expectation(y, x.amplitudes() * x.amplitudes().adjoint()).real());
  if (y.is_pure()) return std::max(0.0, expectation(x, y.amplitudes() * y.amplitudes().adjoint()).real());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(x.matrix());
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_x = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  CMatrix inner = sqrt_x * y.matrix() * sqrt_x;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es2(inner, Eigen::EigenvaluesOnly);
  const double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

// ------------------------------------------------------- polarization sector

std::vector<std::ptrdiff_t> block_indices(int photons, FockCutoff cutoff) {
  std::vector<std::ptrdiff_t> idx(static_cast<std::size_t>(photons) + 1, -1);
  for (int k = 0; k <= photons; ++k) {
    if (cutoff.representable(k, photons - k)) {
      idx[static_cast<std::size_t>(k)] = static_cast<std::ptrdiff_t>(cutoff.index(k, photons - k));
    }
  }
  return idx;
}

PolarizationSector::PolarizationSector(FockCutoff cutoff, std::vector<SectorBlock> blocks,
                                       double tail_probability)
    : cutoff_(cutoff), blocks_(std::move(blocks)), tail_(tail_probability) {
  check_tail(tail_probability);
  double total = 0.0;
  for (const auto& b : blocks_) {
    if (b.photons < 0 || b.photons > cutoff_.max_block()) {
      throw DimensionError("sector block N=" + std::to_string(b.photons) + " outside cutoff");
    }
    if (b.block.rows() != b.photons + 1 || b.block.cols() != b.photons + 1) {
      throw DimensionError("sector block N=" + std::to_string(b.photons) + " has wrong shape");
    }
    if (b.weight < 0.0) throw NumericalError("sector block has negative weight");
    const auto idx = block_indices(b.photons, cutoff_);
    for (int k = 0; k <= b.photons; ++k) {
      if (idx[static_cast<std::size_t>(k)] < 0 && b.block.row(k).cwiseAbs().maxCoeff() > 0.0) {
        throw DimensionError("sector block N=" + std::to_string(b.photons) +
                             " has weight on a state outside the cutoff");
      }
    }
    if (b.weight > 0.0) {
      if (std::abs(b.block.trace() - Complex{1.0, 0.0}) > kSectorWeightTolerance) {
        throw NumericalError("sector block N=" + std::to_string(b.photons) +
                             " is not trace-normalized");
      }
      validate_hermitian_psd(b.weight * b.block, "sector block");
    }
    total += b.weight;
  }
  if (std::abs(total - 1.0) > kSectorWeightTolerance) {
    throw NumericalError("sector weights sum to " + std::to_string(total));
  }
}

double PolarizationSector::total_weight() const {
  double total = 0.0;
  for (const auto& b : blocks_) total += b.weight;
  return total;
}

double PolarizationSector::incomplete_block_weight() const {
  double w = 0.0;
  for (const auto& b : blocks_)
    if (b.photons > cutoff_.max_complete_block()) w += b.weight;
  return w;
}

TwoModeState PolarizationSector::reassemble() const {
  CMatrix rho = CMatrix::Zero(cutoff_.two_mode_dim(), cutoff_.two_mode_dim());
  for (const auto& b : blocks_) {
    if (b.weight == 0.0) continue;
    const auto idx = block_indices(b.photons, cutoff_);
    for (int k = 0; k <= b.photons; ++k) {
      if (idx[k] < 0) continue;
      for (int l = 0; l <= b.photons; ++l) {
        if (idx[l] < 0) continue;
        rho(idx[k], idx[l]) = b.weight * b.block(k, l);
      }
    }
  }
  rho /= rho.trace().real();
  return TwoModeState::mixed(cutoff_, std::move(rho), tail_);
}

namespace {
constexpr double kNegligibleBlockWeight = 1e-200;
}  // namespace

PolarizationSector project_polarization_sector(const TwoModeState& state) {
  const FockCutoff cutoff = state.cutoff();
  std::vector<SectorBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(cutoff.max_block()) + 1);
  for (int n = 0; n <= cutoff.max_block(); ++n) {
    const auto idx = block_indices(n, cutoff);
    CMatrix b = CMatrix::Zero(n + 1, n + 1);
    if (state.is_pure()) {
      const auto& psi = state.amplitudes();
      for (int k = 0; k <= n; ++k) {
        if (idx[k] < 0) continue;
        for (int l = 0; l <= n; ++l)
          if (idx[l] >= 0) b(k, l) = psi(idx[k]) * std::conj(psi(idx[l]));
      }
    } else {
      const auto& rho = state.matrix();
      for (int k = 0; k <= n; ++k) {
        if (idx[k] < 0) continue;
        for (int l = 0; l <= n; ++l)
          if (idx[l] >= 0) b(k, l) = rho(idx[k], idx[l]);
      }
      b = 0.5 * (b + b.adjoint()).eval();
    }
    double w = b.trace().real();
    if (w < kEigenvalueFloor) {
      throw NumericalError("negative photon-number block weight " + std::to_string(w));
    }
    if (w <= kNegligibleBlockWeight) {
      // Near-subnormal blocks cannot be trace-normalized accurately.
      w = 0.0;
      b.setZero();
    } else {
      b *= 1.0 / w;  // complex division would square w and underflow
    }
    blocks.push_back({n, w, std::move(b)});
  }
  // Renormalize away the rounding drift of the block traces.
  double total = 0.0;
  for (const auto& blk : blocks) total += blk.weight;
  for (auto& blk : blocks) blk.weight /= total;
  return PolarizationSector(cutoff, std::move(blocks), state.tail_probability());
}

}  // namespace qpol
