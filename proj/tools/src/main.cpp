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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "qpol/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace qpol::cli;

  CLI::App app{"Quantum polarization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qpol 0.1.0");

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;

  const struct {
    const char* name;
    const char* help;
    CommandOutput (*run)(const RunConfig&, const std::optional<std::string>&);
  } commands[] = {
      {"degrees", "Degree-of-polarization report", cmd_degrees},
      {"sphere-map", "Projected Stokes variance over the Poincare sphere", cmd_sphere_map},
      {"bright-scan", "Dark-plane variance scan of a bright-beam model", cmd_bright_scan},
      {"tomo", "Homodyne sampling, reconstruction, and degrees", cmd_tomo},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "RNG seed (overrides seed)");
    sub->add_option("--format", format, "csv|json|ppm, per command");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg = load_run_config(config_path);
    if (out_dir) cfg.output_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    for (const auto& c : commands) {
      if (!app.got_subcommand(c.name)) continue;
      const auto out = c.run(cfg, format);
      write_outputs(out);
      std::cout << out.summary;
    }
    return kOk;
  } catch (const qpol::IoError& e) {
    std::cerr << "qpol: i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const qpol::NumericalError& e) {
    std::cerr << "qpol: numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::logic_error& e) {
    std::cerr << "qpol: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qpol: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "qpol: error: " << e.what() << "\n";
    return kFailure;
  }
}
