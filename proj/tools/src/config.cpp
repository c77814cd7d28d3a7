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

#include "config.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "qpol/errors.hpp"
#include "qpol/serialization.hpp"
#include "qpol/state_factory.hpp"

namespace qpol::cli {
namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

// Reads keys of one JSON object and rejects whatever was not read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!take(key)) return fallback;
    const auto& v = j_[key];
    if (!v.is_number()) fail(key + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key + " must be finite");
    return x;
  }

  double required_number(const std::string& key) {
    if (!has(key)) fail(key + " is required");
    return number(key, 0.0);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!take(key)) return fallback;
    const auto& v = j_[key];
    if (!v.is_number_integer()) fail(key + " must be an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    take(key);
    const auto& v = j_[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    fail(key + " must be a non-negative integer");
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const auto& v = j_[key];
    if (!v.is_string()) fail(key + " must be a string");
    return v.get<std::string>();
  }

  Complex complex(const std::string& key) {
    if (!take(key)) return {0.0, 0.0};
    const auto& v = j_[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(key + " must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Section child(const std::string& key) {
    take(key);
    return Section(j_[key], path_ + "." + key);
  }

  int bounded(const std::string& key, int fallback, int lo, int hi) {
    const auto v = integer(key, fallback);
    if (v < lo || v > hi) {
      fail(key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config " + path_ + ": " + what);
  }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Mode parse_mode(Section& s) {
  const auto name = s.string("mode", "H");
  if (name == "H") return Mode::H;
  if (name == "V") return Mode::V;
  s.fail("mode must be \"H\" or \"V\"");
}

StateSpec parse_state(Section s, const std::filesystem::path& base_dir) {
  StateSpec spec;
  const auto family = s.string("family", "");
  if (family == "vacuum") {
    spec.family = StateFamily::vacuum;
  } else if (family == "coherent") {
    spec.family = StateFamily::coherent;
    spec.alpha = s.complex("alpha");
    spec.beta = s.complex("beta");
  } else if (family == "fock") {
    spec.family = StateFamily::fock;
    spec.n_h = s.bounded("n_h", 0, 0, 1000);
    spec.n_v = s.bounded("n_v", 0, 0, 1000);
  } else if (family == "su2_coherent") {
    spec.family = StateFamily::su2_coherent;
    spec.su2.photons = s.bounded("photons", 1, 0, 1000);
    spec.su2.theta = s.number("theta_deg", 0.0) * kDeg;
    spec.su2.phi = s.number("phi_deg", 0.0) * kDeg;
  } else if (family == "squeezed_vacuum") {
    spec.family = StateFamily::squeezed_vacuum;
    spec.squeeze.r = s.required_number("r");
    spec.squeeze.axis_angle = s.number("axis_angle_deg", 0.0) * kDeg;
    spec.mode = parse_mode(s);
  } else if (family == "thermal") {
    spec.family = StateFamily::thermal;
    spec.squeeze.n_th = s.required_number("n_th");
    spec.mode = parse_mode(s);
  } else if (family == "squeezed_thermal") {
    spec.family = StateFamily::squeezed_thermal;
    const bool db = s.has("squeeze_db") || s.has("antisqueeze_db");
    const bool raw = s.has("r") || s.has("n_th");
    if (db == raw) s.fail("give either squeeze_db/antisqueeze_db or r/n_th");
    const double axis = s.number("axis_angle_deg", 0.0) * kDeg;
    if (db) {
      const double lo = s.required_number("squeeze_db");
      const double hi = s.required_number("antisqueeze_db");
      try {
        spec.squeeze = SqueezedThermalSpec::from_db(lo, hi, axis);
      } catch (const std::invalid_argument& e) {
        s.fail(e.what());
      }
    } else {
      spec.squeeze.r = s.required_number("r");
      spec.squeeze.n_th = s.required_number("n_th");
      spec.squeeze.axis_angle = axis;
    }
    spec.mode = parse_mode(s);
  } else if (family == "file") {
    spec.family = StateFamily::file;
    const auto p = s.string("path", "");
    if (p.empty()) s.fail("path is required");
    spec.path = base_dir / p;
  } else {
    s.fail("unknown family '" + family + "'");
  }
  if (spec.squeeze.r < 0.0 || spec.squeeze.n_th < 0.0) s.fail("r and n_th must be >= 0");
  s.finish();
  return spec;
}

QuadratureEllipse parse_ellipse(Section s) {
  QuadratureEllipse e;
  e.v_min = s.required_number("v_min");
  e.v_max = s.required_number("v_max");
  e.angle = s.number("angle_deg", 0.0) * kDeg;
  s.finish();
  return e;
}

BrightBeamModel parse_bright_beam(Section s) {
  BrightBeamModel m;
  if (s.has("fit")) {
    if (s.has("h") || s.has("v") || s.has("relative_phase_deg")) {
      s.fail("fit cannot be combined with h, v, or relative_phase_deg");
    }
    auto f = s.child("fit");
    const double min_db = f.required_number("min_db");
    const double theta = f.number("theta_star_deg", 0.0) * kDeg;
    const double split = f.number("axis_split_deg", 0.0) * kDeg;
    const double v_max = f.required_number("v_max");
    const double photons = f.number("mean_photons", 1.0);
    f.finish();
    try {
      m = BrightBeamModel::fit_to_minimum(min_db, theta, split, v_max, photons);
    } catch (const std::invalid_argument& e) {
      s.fail(e.what());
    }
  } else {
    m.mean_photons = s.number("mean_photons", 1.0);
    if (s.has("h")) m.h = parse_ellipse(s.child("h"));
    if (s.has("v")) m.v = parse_ellipse(s.child("v"));
    m.relative_phase = s.number("relative_phase_deg", 90.0) * kDeg;
  }
  s.finish();
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    s.fail(e.what());
  }
  return m;
}

}  // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  Section root(j, "root");
  if (!j.contains("schema_version")) root.fail("schema_version is required");
  if (root.integer("schema_version", 0) != kSchemaVersion) {
    root.fail("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  RunConfig cfg;
  if (!j.contains("state")) root.fail("state is required");
  cfg.state = parse_state(root.child("state"), base_dir);
  cfg.cutoff = root.bounded("cutoff", cfg.cutoff, 1, 200);
  if (j.contains("seed")) cfg.seed = root.unsigned_integer("seed");

  if (j.contains("grid")) {
    auto g = root.child("grid");
    cfg.n_theta = g.bounded("n_theta", cfg.n_theta, 1, 10000);
    cfg.n_phi = g.bounded("n_phi", cfg.n_phi, 1, 10000);
    g.finish();
  }
  if (j.contains("output")) {
    auto o = root.child("output");
    const auto dir = o.string("directory", ".");
    o.finish();
    cfg.output_dir = base_dir / dir;
  }
  if (j.contains("degrees")) {
    auto d = root.child("degrees");
    cfg.degrees.unpolarized_tolerance = d.number("unpolarized_tolerance", cfg.degrees.unpolarized_tolerance);
    cfg.degrees.vacuum_threshold = d.number("vacuum_threshold", cfg.degrees.vacuum_threshold);
    d.finish();
    if (cfg.degrees.unpolarized_tolerance <= 0.0 || cfg.degrees.vacuum_threshold < 0.0) {
      d.fail("unpolarized_tolerance must be > 0 and vacuum_threshold >= 0");
    }
  }
  if (j.contains("bright_beam")) cfg.bright_beam = parse_bright_beam(root.child("bright_beam"));
  if (j.contains("scan")) {
    auto s = root.child("scan");
    cfg.scan_points = s.bounded("points", cfg.scan_points, 2, 10000000);
    s.finish();
  }
  cfg.sampling.source_dim = cfg.cutoff;
  if (j.contains("tomography")) {
    auto t = root.child("tomography");
    auto& r = cfg.reconstruction;
    r.fock_dim = t.bounded("fock_dim", r.fock_dim, 1, 200);
    r.max_iterations = t.bounded("max_iterations", r.max_iterations, 1, 10000000);
    r.tolerance = t.number("tolerance", r.tolerance);
    r.bin_width = t.number("bin_width", r.bin_width);
    r.range_sigmas = t.number("range_sigmas", r.range_sigmas);
    r.efficiency = t.number("efficiency", r.efficiency);
    const auto loss = t.string("loss_handling", to_string(r.loss_handling));
    auto& s = cfg.sampling;
    s.phases = t.bounded("phases", s.phases, 1, 100000);
    s.samples_per_phase = t.bounded("samples_per_phase", s.samples_per_phase, 1, 100000000);
    const auto dataset = t.string("dataset", "");
    t.finish();
    try {
      r.loss_handling = parse_loss_handling(loss);
      r.validate();
      s.validate();
    } catch (const std::invalid_argument& e) {
      t.fail(e.what());
    }
    if (!dataset.empty()) cfg.dataset = base_dir / dataset;
  }
  root.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j, path.parent_path().empty() ? "." : path.parent_path());
}

TwoModeState build_state(const StateSpec& spec, int cutoff) {
  const FockCutoff fc(cutoff);
  auto single = [&](const SingleModeState& s) { return tensor_with_vacuum(s, spec.mode, fc); };
  switch (spec.family) {
    case StateFamily::vacuum:
      return TwoModeState::vacuum(fc);
    case StateFamily::coherent:
      return two_mode_coherent(spec.alpha, spec.beta, fc);
    case StateFamily::fock:
      return two_mode_number(spec.n_h, spec.n_v, fc);
    case StateFamily::su2_coherent:
      return su2_coherent(spec.su2, fc);
    case StateFamily::squeezed_vacuum:
      return single(single_mode_squeezed_vacuum(spec.squeeze.r, spec.squeeze.axis_angle, cutoff));
    case StateFamily::thermal:
      return single(thermal_state(spec.squeeze.n_th, cutoff));
    case StateFamily::squeezed_thermal:
      return single(squeezed_thermal(spec.squeeze, cutoff));
    case StateFamily::file: {
      json j;
      try {
        j = json::parse(read_text_file(spec.path));
      } catch (const json::parse_error& e) {
        throw ConfigError("state file " + spec.path.string() + ": " + e.what());
      }
      auto s = two_mode_state_from_json(j);
      if (s.cutoff().dim() != cutoff) {
        throw ConfigError("state file cutoff " + std::to_string(s.cutoff().dim()) +
                          " does not match config cutoff " + std::to_string(cutoff));
      }
      return s;
    }
  }
  throw ConfigError("unhandled state family");
}

}  // namespace qpol::cli
