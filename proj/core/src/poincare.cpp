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

#include "qpol/poincare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qpol/errors.hpp"
#include "qpol/numeric_format.hpp"

namespace qpol {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_half_turn(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

DarkPlanePoint make_point(const BrightBeamModel& model, double theta) {
  const double v = dark_plane_variance(model, theta);
  return {theta, v, variance_to_db(v, 1.0)};
}

}  // namespace

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) {
    throw std::invalid_argument("SphereGrid: n_theta and n_phi must be >= 1");
  }
}

double SphereGrid::theta(int row) const {
  if (n_theta_ == 1) return kPi / 2;
  return kPi * row / (n_theta_ - 1);
}

double SphereGrid::phi(int col) const { return 2.0 * kPi * col / n_phi_; }

double variance_to_db(double variance, double reference) {
  if (!(reference > 0.0)) return 0.0;
  if (!(variance > 0.0)) return kDbFloor;
  return std::max(kDbFloor, 10.0 * std::log10(variance / reference));
}

std::size_t VarianceMap::argmin() const {
  return static_cast<std::size_t>(std::min_element(variance.begin(), variance.end()) - variance.begin());
}

std::size_t VarianceMap::argmax() const {
  return static_cast<std::size_t>(std::max_element(variance.begin(), variance.end()) - variance.begin());
}

Direction VarianceMap::direction(std::size_t node) const {
  const int row = static_cast<int>(node / static_cast<std::size_t>(grid.n_phi()));
  const int col = static_cast<int>(node % static_cast<std::size_t>(grid.n_phi()));
  return grid.node(row, col);
}

VarianceMap variance_map(const StokesMomentSet& moments, const SphereGrid& grid) {
  VarianceMap map;
  map.grid = grid;
  map.shot_reference = moments.s0_mean;
  map.variance.resize(grid.size());
  map.variance_db.resize(grid.size());
  std::size_t i = 0;
  for (int row = 0; row < grid.n_theta(); ++row) {
    for (int col = 0; col < grid.n_phi(); ++col, ++i) {
      map.variance[i] = projected_variance(moments, grid.node(row, col));
      map.variance_db[i] = variance_to_db(map.variance[i], map.shot_reference);
    }
  }
  return map;
}

MapFormat parse_map_format(std::string_view name) {
  if (name == "csv") return MapFormat::csv;
  if (name == "json") return MapFormat::json;
  if (name == "ppm") return MapFormat::ppm;
  throw std::invalid_argument("unknown map format '" + std::string(name) + "' (csv|json|ppm)");
}

std::string_view extension(MapFormat format) {
  switch (format) {
    case MapFormat::csv: return "csv";
    case MapFormat::json: return "json";
    case MapFormat::ppm: return "ppm";
  }
  return "";
}

std::string export_map(const VarianceMap& map, MapFormat format) {
  const SphereGrid& g = map.grid;
  switch (format) {
    case MapFormat::csv: {
      std::string out = "theta,phi,variance,variance_db\n";
      std::size_t i = 0;
      for (int row = 0; row < g.n_theta(); ++row)
        for (int col = 0; col < g.n_phi(); ++col, ++i) {
          out += format_number(g.theta(row)) + ',' + format_number(g.phi(col)) + ',' +
                 format_number(map.variance[i]) + ',' + format_number(map.variance_db[i]) + '\n';
        }
      return out;
    }
    case MapFormat::json: {
      nlohmann::json nodes = nlohmann::json::array();
      std::size_t i = 0;
      for (int row = 0; row < g.n_theta(); ++row)
        for (int col = 0; col < g.n_phi(); ++col, ++i) {
          nodes.push_back({{"theta", round_significant(g.theta(row))},
                           {"phi", round_significant(g.phi(col))},
                           {"variance", round_significant(map.variance[i])},
                           {"variance_db", round_significant(map.variance_db[i])}});
        }
      nlohmann::json j = {{"n_theta", g.n_theta()},
                          {"n_phi", g.n_phi()},
                          {"shot_reference", round_significant(map.shot_reference)},
                          {"nodes", std::move(nodes)}};
      return j.dump(2) + "\n";
    }
    case MapFormat::ppm: {
      const double lo = map.min();
      const double hi = map.max();
      // Rounding-level spread counts as a constant map.
      const bool flat = hi - lo <= kFlatMapTolerance * std::max(1.0, std::abs(hi));
      std::string out = "P6\n" + std::to_string(g.n_phi()) + " " + std::to_string(g.n_theta()) +
                        "\n255\n";
      out.reserve(out.size() + 3 * map.variance.size());
      for (double v : map.variance) {
        const double t = flat ? 0.0 : (v - lo) / (hi - lo);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
        out.push_back(0);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (1.0 - t)))));
      }
      return out;
    }
  }
  throw std::logic_error("export_map: unhandled format");
}

void write_map(const VarianceMap& map, MapFormat format, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = export_map(map, format);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

std::vector<MapNode> parse_map_csv(std::string_view text) {
  std::vector<MapNode> nodes;
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line != "theta,phi,variance,variance_db") {
    throw std::invalid_argument("parse_map_csv: missing header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 4> f{};
    std::size_t start = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t end = k < 3 ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw std::invalid_argument("parse_map_csv: short row");
      f[k] = std::stod(line.substr(start, end - start));
      start = end + 1;
    }
    nodes.push_back({f[0], f[1], f[2], f[3]});
  }
  return nodes;
}

// ------------------------------------------------------------- bright beam

double QuadratureEllipse::variance(double theta) const {
  return 0.5 * (v_min + v_max) + 0.5 * (v_min - v_max) * std::cos(2.0 * (theta - angle));
}

void BrightBeamModel::validate() const {
  if (!(mean_photons > 0.0) || !std::isfinite(mean_photons)) {
    throw std::invalid_argument("BrightBeamModel: mean photon number must be positive");
  }
  for (const auto* e : {&h, &v}) {
    if (!(e->v_min > 0.0) || !(e->v_min <= e->v_max) || !std::isfinite(e->v_max) ||
        !std::isfinite(e->angle)) {
      throw std::invalid_argument("BrightBeamModel: need 0 < V_min <= V_max");
    }
    if (e->v_min * e->v_max < 1.0 - 1e-9) {
      throw std::invalid_argument("BrightBeamModel: V_min*V_max < 1 violates the uncertainty bound");
    }
  }
  if (std::abs(std::cos(relative_phase)) > 1e-9) {
    throw std::invalid_argument(
        "BrightBeamModel: the dark-plane formula needs relative phase pi/2 (mean along S_y)");
  }
}

BrightBeamModel BrightBeamModel::fit_to_minimum(double min_db, double theta_star, double axis_split,
                                                double v_max, double mean_photons) {
  // Averaging the two ellipses gives s - a cos(2 split) cos(2(theta - theta_star)),
  // s = (V_max+V_min)/2, a = (V_max-V_min)/2; pin its minimum to the target.
  const double target = std::pow(10.0, min_db / 10.0);
  const double c = std::cos(2.0 * axis_split);
  const double v_min = (2.0 * target - v_max * (1.0 - c)) / (1.0 + c);
  BrightBeamModel m;
  m.mean_photons = mean_photons;
  m.h = {v_min, v_max, theta_star - axis_split};
  m.v = {v_min, v_max, theta_star + axis_split};
  m.validate();
  return m;
}

double dark_plane_variance(const BrightBeamModel& model, double theta) {
  return 0.5 * (model.h.variance(theta) + model.v.variance(theta));
}

std::vector<DarkPlanePoint> dark_plane_scan(const BrightBeamModel& model, int points) {
  model.validate();
  if (points < 1) throw std::invalid_argument("dark_plane_scan: need at least one point");
  std::vector<DarkPlanePoint> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out.push_back(make_point(model, kPi * i / points));
  return out;
}

DarkPlanePoint find_dark_plane_minimum(const BrightBeamModel& model, int coarse_points) {
  if (coarse_points < 3) throw std::invalid_argument("find_dark_plane_minimum: need >= 3 points");
  const auto scan = dark_plane_scan(model, coarse_points);
  const double step = kPi / coarse_points;
  const auto n = static_cast<int>(scan.size());
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  DarkPlanePoint best = *std::min_element(
      scan.begin(), scan.end(), [](const auto& a, const auto& b) { return a.variance < b.variance; });
  for (int i = 0; i < n; ++i) {
    const double here = scan[i].variance;
    if (here > scan[(i + n - 1) % n].variance || here > scan[(i + 1) % n].variance) continue;
    // The objective is pi-periodic, so brackets may straddle 0.
    double a = scan[i].theta - step;
    double b = scan[i].theta + step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = dark_plane_variance(model, c);
    double fd = dark_plane_variance(model, d);
    while (b - a > 1e-13) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = dark_plane_variance(model, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = dark_plane_variance(model, d);
      }
    }
    const auto candidate = make_point(model, wrap_half_turn(0.5 * (a + b)));
    if (candidate.variance < best.variance) best = candidate;
  }
  return best;
}

}  // namespace qpol
