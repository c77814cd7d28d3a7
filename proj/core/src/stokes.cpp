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

#include "qpol/stokes.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qpol/diagnostics.hpp"
#include "qpol/errors.hpp"

namespace qpol {
namespace {

constexpr double kInvariantTolerance = 1e-8;

// Spin raising operator a_H^dagger a_V on block N: |N,k> -> sqrt((k+1)(N-k)) |N,k+1>.
CMatrix block_raising(int photons) {
  CMatrix jp = CMatrix::Zero(photons + 1, photons + 1);
  for (int k = 0; k < photons; ++k) {
    jp(k + 1, k) = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(photons - k));
  }
  return jp;
}

// Re tr(B S_k S_l) for all k, l: the symmetrized second moments of one block.
Eigen::Matrix3d symmetrized_second_moments(const CMatrix& b, const std::array<const CMatrix*, 3>& s) {
  std::array<CMatrix, 3> sb;
  for (int k = 0; k < 3; ++k) sb[k] = (*s[k]) * b;
  Eigen::Matrix3d out;
  for (int k = 0; k < 3; ++k) {
    for (int l = k; l < 3; ++l) {
      // tr(B S_k S_l) = tr(S_l B S_k) = sum_ij (S_l B)_ij (S_k)_ji
      const double v = (sb[l].array() * s[k]->transpose().array()).sum().real();
      out(k, l) = v;
      out(l, k) = v;
    }
  }
  return out;
}

StokesMomentSet finish_moments(double s0, const Eigen::Vector3d& mean, const Eigen::Matrix3d& second,
                               double s0s0p2, double tail) {
  StokesMomentSet m;
  m.s0_mean = s0;
  m.mean_vector = mean;
  Eigen::Matrix3d gamma = second - mean * mean.transpose();
  m.covariance = 0.5 * (gamma + gamma.transpose());
  m.s_squared_mean = second.trace();
  m.total_variance = m.covariance.trace();
  m.s0_s0plus2_mean = s0s0p2;
  m.tail_probability = tail;
  if (tail > kTailWarningThreshold) {
    std::ostringstream os;
    os << "truncated-tail probability " << tail << " exceeds " << kTailWarningThreshold
       << "; Fock cutoff may be too small";
    warn(os.str());
  }
  return m;
}

// Padded (N+1)x(N+1) gather of rho restricted to rows of block n, columns of block m.
CMatrix gather_block(const TwoModeState& state, const std::vector<std::ptrdiff_t>& rows,
                     const std::vector<std::ptrdiff_t>& cols) {
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(cols.size()));
  if (state.is_pure()) {
    const auto& psi = state.amplitudes();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 0) continue;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j] >= 0) out(i, j) = psi(rows[i]) * std::conj(psi(cols[j]));
    }
  } else {
    const auto& rho = state.matrix();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i] < 0) continue;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j] >= 0) out(i, j) = rho(rows[i], cols[j]);
    }
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ Direction

Direction Direction::from_vector(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("Direction: vector must be finite and nonzero");
  }
  return Direction(v / norm);
}

Direction Direction::from_angles(double theta, double phi) {
  return Direction(Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                   std::cos(theta)));
}

double Direction::theta() const { return std::acos(std::clamp(n_.z(), -1.0, 1.0)); }

double Direction::phi() const {
  double p = std::atan2(n_.y(), n_.x());
  if (p < 0.0) p += 2.0 * std::numbers::pi;
  return p;
}

// ----------------------------------------------------------- operator caches

const StokesMatrices& stokes_matrices(FockCutoff cutoff) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<StokesMatrices>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[cutoff.dim()];
  if (!slot) {
    const int d = cutoff.dim();
    const Eigen::Index n = cutoff.two_mode_dim();
    CMatrix jp = CMatrix::Zero(n, n);
    auto s = std::make_unique<StokesMatrices>();
    s->s0 = CMatrix::Zero(n, n);
    s->sz = CMatrix::Zero(n, n);
    for (int nh = 0; nh < d; ++nh) {
      for (int nv = 0; nv < d; ++nv) {
        const auto i = static_cast<Eigen::Index>(cutoff.index(nh, nv));
        s->s0(i, i) = nh + nv;
        s->sz(i, i) = nh - nv;
        if (nh + 1 < d && nv >= 1) {
          const auto j = static_cast<Eigen::Index>(cutoff.index(nh + 1, nv - 1));
          jp(j, i) = std::sqrt(static_cast<double>(nh + 1) * nv);
        }
      }
    }
    const CMatrix jm = jp.adjoint();
    s->sx = jp + jm;
    s->sy = Complex{0.0, 1.0} * (jm - jp);
    slot = std::move(s);
  }
  return *slot;
}

const BlockStokes& block_stokes(int photons) {
  if (photons < 0) throw std::out_of_range("block_stokes: negative photon number");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<BlockStokes>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[photons];
  if (!slot) {
    const CMatrix jp = block_raising(photons);
    const CMatrix jm = jp.adjoint();
    auto b = std::make_unique<BlockStokes>();
    b->sx = jp + jm;
    b->sy = Complex{0.0, 1.0} * (jm - jp);
    b->sz = CMatrix::Zero(photons + 1, photons + 1);
    for (int k = 0; k <= photons; ++k) b->sz(k, k) = 2 * k - photons;
    slot = std::move(b);
  }
  return *slot;
}

CMatrix su2_block_rotation(int photons, double theta, double phi) {
  if (photons < 0) throw std::out_of_range("su2_block_rotation: negative photon number");
  if (photons == 0) return CMatrix::Identity(1, 1);
  const CMatrix jp = block_raising(photons);
  const Complex e = std::polar(1.0, -phi);
  const CMatrix generator = (0.5 * theta) * (e * jp - std::conj(e) * jp.adjoint());
  return generator.exp();
}

// -------------------------------------------------------------------- moments

StokesMomentSet stokes_moments(const PolarizationSector& sector) {
  double s0 = 0.0;
  double s0s0p2 = 0.0;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  for (const auto& blk : sector.blocks()) {
    if (blk.weight == 0.0) continue;
    const double n = blk.photons;
    s0 += blk.weight * n;
    s0s0p2 += blk.weight * n * (n + 2.0);
    if (blk.photons == 0) continue;
    const auto& bs = block_stokes(blk.photons);
    const std::array<const CMatrix*, 3> s{&bs.sx, &bs.sy, &bs.sz};
    const CMatrix b = blk.weight * blk.block;
    for (int k = 0; k < 3; ++k) {
      mean(k) += (b.array() * s[k]->transpose().array()).sum().real();
    }
    second += symmetrized_second_moments(b, s);
  }
  return finish_moments(s0, mean, second, s0s0p2, sector.tail_probability());
}

StokesMomentSet stokes_moments(const TwoModeState& state) {
  return stokes_moments(project_polarization_sector(state));
}

StokesMomentSet stokes_moments_dense(const TwoModeState& state) {
  const FockCutoff src = state.cutoff();
  const FockCutoff big(src.dim() + 1);
  const Eigen::Index n = big.two_mode_dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(src.two_mode_dim()));
  for (int nh = 0; nh < src.dim(); ++nh)
    for (int nv = 0; nv < src.dim(); ++nv)
      map[src.index(nh, nv)] = static_cast<Eigen::Index>(big.index(nh, nv));

  const auto& s = stokes_matrices(big);
  const std::array<const CMatrix*, 3> ops{&s.sx, &s.sy, &s.sz};
  Eigen::Vector3d mean;
  Eigen::Matrix3d second;
  double s0 = 0.0;
  double s0s0p2 = 0.0;

  if (state.is_pure()) {
    CVector psi = CVector::Zero(n);
    for (std::size_t i = 0; i < map.size(); ++i) psi(map[i]) = state.amplitudes()(static_cast<Eigen::Index>(i));
    std::array<CVector, 3> v;
    for (int k = 0; k < 3; ++k) {
      v[k] = (*ops[k]) * psi;
      mean(k) = psi.dot(v[k]).real();
    }
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) second(k, l) = v[k].dot(v[l]).real();
    const CVector n0 = s.s0 * psi;
    s0 = psi.dot(n0).real();
    s0s0p2 = n0.squaredNorm() + 2.0 * s0;
  } else {
    CMatrix rho = CMatrix::Zero(n, n);
    const auto& src_rho = state.matrix();
    for (std::size_t i = 0; i < map.size(); ++i)
      for (std::size_t j = 0; j < map.size(); ++j)
        rho(map[i], map[j]) = src_rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    for (int k = 0; k < 3; ++k) mean(k) = (rho.array() * ops[k]->transpose().array()).sum().real();
    second = symmetrized_second_moments(rho, ops);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ni = s.s0(i, i).real();
      s0 += ni * rho(i, i).real();
      s0s0p2 += ni * (ni + 2.0) * rho(i, i).real();
    }
  }
  return finish_moments(s0, mean, second, s0s0p2, state.tail_probability());
}

std::vector<std::string> moment_invariant_violations(const StokesMomentSet& m) {
  std::vector<std::string> out;
  const double scale = std::max(1.0, m.s_squared_mean);
  const Eigen::Matrix3d& g = m.covariance;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10) out.emplace_back("covariance not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kInvariantTolerance * scale)
    out.emplace_back("covariance not positive semidefinite");
  if (std::abs(m.total_variance - g.trace()) > kInvariantTolerance * scale)
    out.emplace_back("total variance differs from tr(Gamma)");
  if (std::abs(m.s_squared_mean - m.s0_s0plus2_mean) > kInvariantTolerance * scale)
    out.emplace_back("<S^2> differs from <S0(S0+2)>");
  if (m.total_variance < 2.0 * m.s0_mean - kInvariantTolerance * scale)
    out.emplace_back("uncertainty relation (Delta S)^2 >= 2<S0> violated");
  return out;
}

double projected_mean(const StokesMomentSet& moments, const Direction& n) {
  return n.vector().dot(moments.mean_vector);
}

double projected_variance(const StokesMomentSet& moments, const Direction& n) {
  const Eigen::Vector3d& v = n.vector();
  const double var = v.dot(moments.covariance * v);
  if (var < 0.0) {
    if (var < -1e-10) {
      std::ostringstream os;
      os << "projected variance " << var << " clamped to 0";
      warn(os.str());
    }
    return 0.0;
  }
  return var;
}

// ----------------------------------------------------------------- rotations

TwoModeState apply_su2(const TwoModeState& state, double theta, double phi) {
  const FockCutoff cutoff = state.cutoff();
  const int nmax = cutoff.max_block();
  std::vector<CMatrix> rot;
  std::vector<std::vector<std::ptrdiff_t>> idx;
  rot.reserve(static_cast<std::size_t>(nmax) + 1);
  idx.reserve(static_cast<std::size_t>(nmax) + 1);
  for (int n = 0; n <= nmax; ++n) {
    rot.push_back(su2_block_rotation(n, theta, phi));
    idx.push_back(block_indices(n, cutoff));
  }

  double dropped = 0.0;
  if (state.is_pure()) {
    const auto& psi = state.amplitudes();
    CVector out = CVector::Zero(psi.size());
    for (int n = 0; n <= nmax; ++n) {
      CVector x = CVector::Zero(n + 1);
      for (int k = 0; k <= n; ++k)
        if (idx[n][k] >= 0) x(k) = psi(idx[n][k]);
      if (x.squaredNorm() == 0.0) continue;
      const CVector y = rot[n] * x;
      for (int k = 0; k <= n; ++k) {
        if (idx[n][k] >= 0) {
          out(idx[n][k]) = y(k);
        } else {
          dropped += std::norm(y(k));
        }
      }
    }
    const double kept = out.squaredNorm();
    out /= std::sqrt(kept);
    if (dropped > kTailWarningThreshold) {
      warn("apply_su2: rotation moved probability " + std::to_string(dropped) +
           " outside the Fock cutoff");
    }
    const double tail = 1.0 - (1.0 - state.tail_probability()) * (1.0 - std::min(1.0, dropped));
    return TwoModeState::pure(cutoff, std::move(out), tail);
  }

  const auto& rho = state.matrix();
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (int n = 0; n <= nmax; ++n) {
    for (int m = 0; m <= nmax; ++m) {
      const CMatrix b = gather_block(state, idx[n], idx[m]);
      if (b.cwiseAbs().maxCoeff() == 0.0) continue;
      const CMatrix r = rot[n] * b * rot[m].adjoint();
      for (int k = 0; k <= n; ++k) {
        if (idx[n][k] < 0) {
          if (n == m) dropped += r(k, k).real();
          continue;
        }
        for (int l = 0; l <= m; ++l)
          if (idx[m][l] >= 0) out(idx[n][k], idx[m][l]) = r(k, l);
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  out /= out.trace().real();
  if (dropped > kTailWarningThreshold) {
    warn("apply_su2: rotation moved probability " + std::to_string(dropped) +
         " outside the Fock cutoff");
  }
  const double tail =
      1.0 - (1.0 - state.tail_probability()) * (1.0 - std::clamp(dropped, 0.0, 1.0));
  return TwoModeState::mixed(cutoff, std::move(out), tail);
}

// ------------------------------------------------------------- distributions

double StokesOutcomeDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) m += outcomes[i] * probabilities[i];
  return m;
}

double StokesOutcomeDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double d = outcomes[i] - m;
    v += d * d * probabilities[i];
  }
  return v;
}

double StokesOutcomeDistribution::probability_of(int outcome) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i] == outcome) return probabilities[i];
  return 0.0;
}

StokesOutcomeDistribution stokes_distribution(const TwoModeState& state, const Direction& n) {
  const FockCutoff cutoff = state.cutoff();
  const int nmax = cutoff.max_block();
  // D(theta, phi) S_z D^dagger = S_n for theta = polar angle of n, phi = its azimuth + pi.
  const double theta = n.theta();
  const double phi = std::atan2(-n.vector().y(), -n.vector().x());

  StokesOutcomeDistribution dist;
  dist.outcomes.resize(static_cast<std::size_t>(2 * nmax + 1));
  dist.probabilities.assign(dist.outcomes.size(), 0.0);
  for (int s = -nmax; s <= nmax; ++s) dist.outcomes[static_cast<std::size_t>(s + nmax)] = s;

  for (int blk = 0; blk <= nmax; ++blk) {
    const auto idx = block_indices(blk, cutoff);
    const CMatrix b = gather_block(state, idx, idx);
    if (b.trace().real() <= 0.0) continue;
    const CMatrix d = su2_block_rotation(blk, theta, phi);
    const CMatrix r = d.adjoint() * b * d;
    for (int k = 0; k <= blk; ++k) {
      dist.probabilities[static_cast<std::size_t>(2 * k - blk + nmax)] += std::max(0.0, r(k, k).real());
    }
  }
  double total = 0.0;
  for (double p : dist.probabilities) total += p;
  for (double& p : dist.probabilities) p /= total;
  return dist;
}

}  // namespace qpol
