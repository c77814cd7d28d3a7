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

#include "qpol/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qpol/errors.hpp"
#include "qpol/numeric_format.hpp"

namespace qpol {
namespace {

using nlohmann::json;

json vec3(const Eigen::Vector3d& v) {
  return json::array({round_significant(v(0)), round_significant(v(1)), round_significant(v(2))});
}

json mat3_rows(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(vec3(m.row(i).transpose()));
  return rows;
}

template <typename Derived>
void split_complex(const Eigen::DenseBase<Derived>& values, json& j) {
  json re = json::array();
  json im = json::array();
  // Row-major order for matrices.
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      re.push_back(values(r, c).real());
      im.push_back(values(r, c).imag());
    }
  }
  j["real"] = std::move(re);
  j["imag"] = std::move(im);
}

std::vector<Complex> join_complex(const json& j, std::size_t expected) {
  if (!j.contains("real") || !j.contains("imag") || !j["real"].is_array() || !j["imag"].is_array()) {
    throw std::invalid_argument("state JSON: 'real' and 'imag' arrays are required");
  }
  const auto& re = j["real"];
  const auto& im = j["imag"];
  if (re.size() != expected || im.size() != expected) {
    throw DimensionError("state JSON: expected " + std::to_string(expected) + " entries, got " +
                         std::to_string(re.size()) + "/" + std::to_string(im.size()));
  }
  std::vector<Complex> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (!re[i].is_number() || !im[i].is_number()) {
      throw std::invalid_argument("state JSON: non-numeric entry");
    }
    out[i] = {re[i].get<double>(), im[i].get<double>()};
  }
  return out;
}

struct Header {
  int modes = 2;
  int cutoff = 0;
  bool pure = true;
  double tail = 0.0;
};

Header read_header(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("state JSON: expected an object");
  static const char* const kKeys[] = {"schema", "modes", "cutoff", "kind", "real", "imag", "tail_probability"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw std::invalid_argument("state JSON: unknown key '" + key + "'");
    }
  }
  if (j.contains("schema") && j["schema"] != kStateSchema) {
    throw std::invalid_argument("state JSON: unsupported schema");
  }
  Header h;
  if (j.contains("modes")) {
    if (!j["modes"].is_number_integer()) throw std::invalid_argument("state JSON: 'modes' must be an integer");
    h.modes = j["modes"].get<int>();
  }
  if (!j.contains("cutoff") || !j["cutoff"].is_number_integer()) {
    throw std::invalid_argument("state JSON: integer 'cutoff' is required");
  }
  h.cutoff = j["cutoff"].get<int>();
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("state JSON: kind must be 'pure' or 'mixed'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "pure") {
    h.pure = true;
  } else if (kind == "mixed") {
    h.pure = false;
  } else {
    throw std::invalid_argument("state JSON: kind must be 'pure' or 'mixed'");
  }
  if (j.contains("tail_probability")) {
    const auto& t = j["tail_probability"];
    if (!t.is_number() || t.get<double>() < 0.0 || t.get<double>() > 1.0) {
      throw std::invalid_argument("state JSON: tail_probability must be a number in [0,1]");
    }
    h.tail = t.get<double>();
  }
  return h;
}

json header(int modes, int cutoff, StateKind kind, double tail) {
  return json{{"schema", kStateSchema},
              {"modes", modes},
              {"cutoff", cutoff},
              {"kind", kind == StateKind::pure ? "pure" : "mixed"},
              {"tail_probability", tail}};
}

}  // namespace

json to_json(const TwoModeState& state) {
  json j = header(2, state.cutoff().dim(), state.kind(), state.tail_probability());
  if (state.is_pure()) {
    split_complex(state.amplitudes(), j);
  } else {
    split_complex(state.matrix(), j);
  }
  return j;
}

json to_json(const SingleModeState& state) {
  json j = header(1, state.dim(), state.kind(), state.tail_probability());
  if (state.is_pure()) {
    split_complex(state.amplitudes(), j);
  } else {
    split_complex(state.matrix(), j);
  }
  return j;
}

TwoModeState two_mode_state_from_json(const json& j) {
  const Header h = read_header(j);
  if (h.modes != 2) throw std::invalid_argument("state JSON: expected a two-mode state");
  const FockCutoff cutoff(h.cutoff);
  const auto n = static_cast<std::size_t>(cutoff.two_mode_dim());
  if (h.pure) {
    const auto v = join_complex(j, n);
    return TwoModeState::pure(cutoff, Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(n)), h.tail);
  }
  const auto v = join_complex(j, n * n);
  CMatrix rho(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) rho(r, c) = v[r * n + c];
  return TwoModeState::mixed(cutoff, std::move(rho), h.tail);
}

SingleModeState single_mode_state_from_json(const json& j) {
  const Header h = read_header(j);
  if (h.modes != 1) throw std::invalid_argument("state JSON: expected a single-mode state");
  if (h.cutoff < 1) throw DimensionError("state JSON: cutoff must be >= 1");
  const auto n = static_cast<std::size_t>(h.cutoff);
  if (h.pure) {
    const auto v = join_complex(j, n);
    return SingleModeState::pure(Eigen::Map<const CVector>(v.data(), static_cast<Eigen::Index>(n)), h.tail);
  }
  const auto v = join_complex(j, n * n);
  CMatrix rho(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) rho(r, c) = v[r * n + c];
  return SingleModeState::mixed(std::move(rho), h.tail);
}

json to_json(const DegreeReport& r) {
  return json{
      {"p1", round_significant(r.p1)},
      {"p2_prime", round_significant(r.p2_prime)},
      {"p2", round_significant(r.p2)},
      {"eigenvalues", vec3(r.eigenvalues)},
      {"principal_axes", mat3_rows(r.principal_axes)},
      {"min_variance_direction", vec3(r.min_variance_direction)},
      {"semi_axes", vec3(r.semi_axes)},
      {"degenerate", r.degenerate},
      {"unpolarized", r.unpolarized},
      {"s0_mean", round_significant(r.s0_mean)},
      {"mean_vector", vec3(r.mean_vector)},
      {"s_squared_mean", round_significant(r.s_squared_mean)},
      {"total_variance", round_significant(r.total_variance)},
      {"tail_probability", round_significant(r.tail_probability)},
      {"warnings", r.warnings},
  };
}

json to_json(const ReconstructionResult& r) {
  return json{
      {"fock_dim", r.state.dim()},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"log_likelihood", round_significant(r.log_likelihood.empty() ? 0.0 : r.log_likelihood.back())},
      {"samples_used", r.samples_used},
      {"samples_dropped", r.samples_dropped},
      {"phases", r.phases},
      {"bins_per_phase", r.bins_per_phase},
      {"range_half_width", round_significant(r.range_half_width)},
      {"mean_photons", round_significant(r.state.mean_photons())},
  };
}

json to_json(const VarianceMap& map, bool include_nodes) {
  const auto lo = map.argmin();
  const auto hi = map.argmax();
  const auto dir = [&](std::size_t node) {
    const Direction d = map.direction(node);
    return json{{"theta", round_significant(d.theta())},
                {"phi", round_significant(d.phi())},
                {"vector", vec3(d.vector())}};
  };
  json j{{"n_theta", map.grid.n_theta()},
         {"n_phi", map.grid.n_phi()},
         {"shot_reference", round_significant(map.shot_reference)},
         {"min", {{"variance", round_significant(map.variance[lo])},
                  {"variance_db", round_significant(map.variance_db[lo])},
                  {"direction", dir(lo)}}},
         {"max", {{"variance", round_significant(map.variance[hi])},
                  {"variance_db", round_significant(map.variance_db[hi])},
                  {"direction", dir(hi)}}}};
  if (include_nodes) j["nodes"] = nlohmann::json::parse(export_map(map, MapFormat::json))["nodes"];
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) throw IoError("failed reading " + path.string());
  return ss.str();
}

}  // namespace qpol
