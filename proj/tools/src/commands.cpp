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

#include "commands.hpp"

#include <numbers>
#include <sstream>
#include <system_error>

#include "qpol/errors.hpp"
#include "qpol/homodyne.hpp"
#include "qpol/numeric_format.hpp"
#include "qpol/serialization.hpp"
#include "qpol/stokes.hpp"

namespace qpol::cli {
namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string pick_format(const std::optional<std::string>& format, const std::string& fallback,
                        std::initializer_list<const char*> allowed, const char* command) {
  const std::string f = format.value_or(fallback);
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  throw ConfigError(std::string(command) + ": unsupported --format '" + f + "' (" + list + ")");
}

std::string scan_csv(const std::vector<DarkPlanePoint>& scan) {
  std::ostringstream os;
  os << "theta,variance,variance_db\n";
  for (const auto& p : scan) {
    os << format_number(p.theta) << ',' << format_number(p.variance) << ','
       << format_number(p.variance_db) << '\n';
  }
  return os.str();
}

json point_json(const DarkPlanePoint& p) {
  return json{{"theta", round_significant(p.theta)},
              {"theta_deg", round_significant(p.theta / kDeg)},
              {"variance", round_significant(p.variance)},
              {"variance_db", round_significant(p.variance_db)}};
}

}  // namespace

CommandOutput cmd_degrees(const RunConfig& cfg, const std::optional<std::string>& format) {
  pick_format(format, "json", {"json"}, "degrees");
  const auto state = build_state(cfg.state, cfg.cutoff);
  const auto report = degree_report(stokes_moments(state), cfg.degrees);
  CommandOutput out;
  out.summary = dump(to_json(report));
  out.files.emplace_back(cfg.output_dir / "degrees.json", out.summary);
  return out;
}

CommandOutput cmd_sphere_map(const RunConfig& cfg, const std::optional<std::string>& format) {
  const auto fmt = parse_map_format(pick_format(format, "csv", {"csv", "json", "ppm"}, "sphere-map"));
  const auto state = build_state(cfg.state, cfg.cutoff);
  const auto map = variance_map(stokes_moments(state), SphereGrid(cfg.n_theta, cfg.n_phi));
  const auto file = cfg.output_dir / ("sphere_map." + std::string(extension(fmt)));
  json summary = to_json(map, false);
  summary["min_max_ratio"] = round_significant(map.max() > 0.0 ? map.min() / map.max() : 1.0);
  summary["file"] = file.filename().string();
  CommandOutput out;
  out.summary = dump(summary);
  out.files.emplace_back(file, export_map(map, fmt));
  return out;
}

CommandOutput cmd_bright_scan(const RunConfig& cfg, const std::optional<std::string>& format) {
  const auto fmt = pick_format(format, "csv", {"csv", "json"}, "bright-scan");
  if (!cfg.bright_beam) throw ConfigError("bright-scan: config needs a bright_beam section");
  const auto& model = *cfg.bright_beam;
  const auto scan = dark_plane_scan(model, cfg.scan_points);
  const auto best = find_dark_plane_minimum(model, cfg.scan_points);

  json summary{{"minimum", point_json(best)},
               {"points", cfg.scan_points},
               {"file", "bright_scan." + fmt}};
  CommandOutput out;
  out.summary = dump(summary);
  std::string table;
  if (fmt == "csv") {
    table = scan_csv(scan);
  } else {
    json rows = json::array();
    for (const auto& p : scan) rows.push_back(point_json(p));
    table = dump(json{{"minimum", point_json(best)}, {"scan", std::move(rows)}});
  }
  out.files.emplace_back(cfg.output_dir / ("bright_scan." + fmt), std::move(table));
  return out;
}

CommandOutput cmd_tomo(const RunConfig& cfg, const std::optional<std::string>& format) {
  pick_format(format, "json", {"json"}, "tomo");
  TomographyResult result;
  json meta;
  CommandOutput out;
  if (cfg.dataset) {
    result = reconstruct_dataset(read_dataset_csv(*cfg.dataset), cfg.reconstruction, cfg.degrees);
    meta["dataset"] = cfg.dataset->filename().string();
  } else {
    if (!cfg.seed) throw ConfigError("tomo: a seed is required (config \"seed\" or --seed)");
    const auto state = build_state(cfg.state, cfg.cutoff);
    result = run_tomography_pipeline(state.marginal(Mode::H), state.marginal(Mode::V),
                                     cfg.reconstruction, cfg.sampling, *cfg.seed, cfg.degrees);
    meta["seed"] = *cfg.seed;
    meta["phases"] = cfg.sampling.phases;
    meta["samples_per_phase"] = cfg.sampling.samples_per_phase;
    out.files.emplace_back(cfg.output_dir / "homodyne.csv", dataset_to_csv(result.dataset));
  }
  meta["efficiency"] = round_significant(cfg.reconstruction.efficiency);
  meta["loss_handling"] = to_string(cfg.reconstruction.loss_handling);

  json report{{"degrees", to_json(result.report)},
              {"reconstruction", {{"h", to_json(result.h)}, {"v", to_json(result.v)}}},
              {"run", meta}};
  out.summary = dump(report);
  out.files.emplace_back(cfg.output_dir / "tomo_report.json", out.summary);
  out.files.emplace_back(cfg.output_dir / "reconstructed_state.json",
                         dump(to_json(result.reconstructed)));
  return out;
}

void write_outputs(const CommandOutput& out) {
  for (const auto& [path, text] : out.files) {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
      if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    write_text_file(path, text);
  }
}

}  // namespace qpol::cli
