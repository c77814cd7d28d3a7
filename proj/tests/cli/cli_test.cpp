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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qpol/state_factory.hpp"
#include "qpol/stokes.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("qpol_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path write_config(const std::string& name, const json& j) { return write_config(name, j.dump()); }

  Result run(const std::string& args) {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(QPOL_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

json base(json state, int cutoff = 20) {
  return json{{"schema_version", 1}, {"state", std::move(state)}, {"cutoff", cutoff}};
}

TEST_F(Cli, DegreesCoherent) {
  const auto cfg = write_config("c.json", base({{"family", "coherent"}, {"alpha", {1.0, 0.0}}}));
  const auto r = run("degrees --config " + cfg.string() + " --out " + (dir_ / "o").string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["p2"].get<double>(), 0.5, 1e-6);
  EXPECT_NEAR(j["p1"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(slurp(dir_ / "o" / "degrees.json"), r.out);
  for (const char* key : {"p2_prime", "eigenvalues", "min_variance_direction", "tail_probability"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(Cli, DegreesHiddenPolarization) {
  const auto cfg = write_config("c.json", base({{"family", "fock"}, {"n_h", 1}, {"n_v", 1}}, 4));
  const auto r = run("degrees --config " + cfg.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["p1"].get<double>(), 0.0);
  EXPECT_NEAR(j["p2"].get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, MalformedConfigsExitTwoWithoutOutput) {
  const auto out = dir_ / "o";
  const std::string bad[] = {
      "{not json",
      base({{"family", "vacuum"}}).dump().replace(1, 0, "\"extra\": 1, "),
      json{{"state", {{"family", "vacuum"}}}}.dump(),
      json{{"schema_version", 2}, {"state", {{"family", "vacuum"}}}}.dump(),
      base({{"family", "laser"}}).dump(),
      base({{"family", "coherent"}, {"alpha", {1.0}}}).dump(),
      base({{"family", "vacuum"}, {"r", 0.1}}).dump(),
      base({{"family", "fock"}, {"n_h", 30}}).dump(),
      json{{"schema_version", 1}, {"state", {{"family", "vacuum"}}}, {"grid", {{"n_theta", 0}}}}.dump(),
  };
  int i = 0;
  for (const auto& text : bad) {
    const auto cfg = write_config("bad" + std::to_string(i++) + ".json", text);
    const auto r = run("degrees --config " + cfg.string() + " --out " + out.string());
    EXPECT_EQ(r.code, 2) << text;
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(out)) << text;
  }
}

TEST_F(Cli, FlagErrors) {
  const auto cfg = write_config("c.json", base({{"family", "vacuum"}}));
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("polarize --config " + cfg.string()).code, 2);
  EXPECT_EQ(run("degrees").code, 2);
  EXPECT_EQ(run("degrees --config " + cfg.string() + " --format ppm --out " + dir_.string()).code, 2);
  EXPECT_EQ(run("degrees --config " + cfg.string() + " --seed -3").code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "degrees.json"));
}

TEST_F(Cli, IoAndNumericalExitCodes) {
  EXPECT_EQ(run("degrees --config " + (dir_ / "missing.json").string()).code, 4);

  const auto cfg = write_config("c.json", base({{"family", "vacuum"}}));
  write_config("blocker", std::string("x"));
  EXPECT_EQ(run("degrees --config " + cfg.string() + " --out " + (dir_ / "blocker" / "o").string()).code, 4);

  json state{{"schema", "qpol.state/1"}, {"modes", 2}, {"cutoff", 1}, {"kind", "pure"},
             {"real", {0.5}}, {"imag", {0.0}}};
  write_config("state.json", state);
  const auto bad = write_config("n.json", base({{"family", "file"}, {"path", "state.json"}}, 1));
  const auto r = run("degrees --config " + bad.string() + " --out " + dir_.string());
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(Cli, StateFileFamily) {
  json state{{"schema", "qpol.state/1"}, {"modes", 2}, {"cutoff", 2}, {"kind", "pure"},
             {"real", {0.0, 1.0, 0.0, 0.0}}, {"imag", {0.0, 0.0, 0.0, 0.0}}};
  write_config("state.json", state);
  const auto cfg = write_config("c.json", base({{"family", "file"}, {"path", "state.json"}}, 2));
  const auto r = run("degrees --config " + cfg.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["p1"].get<double>(), 1.0, 1e-12);
}

TEST_F(Cli, SphereMapCoherentIsFlat) {
  const auto cfg = write_config("c.json", base({{"family", "coherent"}, {"alpha", {1.0, 0.5}}, {"beta", {0.3, 0.0}}}));
  const auto r = run("sphere-map --config " + cfg.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["min"]["variance"].get<double>(), j["max"]["variance"].get<double>(), 1e-6);
  EXPECT_NEAR(j["min_max_ratio"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(j["file"], "sphere_map.csv");
  EXPECT_TRUE(fs::exists(dir_ / "sphere_map.csv"));
}

TEST_F(Cli, SphereMapExperimentTwoRatio) {
  json cfg_json = base({{"family", "squeezed_thermal"}, {"squeeze_db", -3.8}, {"antisqueeze_db", 8.6}}, 40);
  cfg_json["grid"] = {{"n_theta", 37}, {"n_phi", 72}};
  const auto cfg = write_config("c.json", cfg_json);
  const auto r = run("sphere-map --config " + cfg.string() + " --format json --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto h = qpol::squeezed_thermal(qpol::SqueezedThermalSpec::from_db(-3.8, 8.6), 40);
  // V in vacuum: equatorial variance N, polar variance Var(n_H).
  const double expected = h.mean_photons() / h.photon_variance();
  EXPECT_NEAR(json::parse(r.out)["min_max_ratio"].get<double>(), expected, 1e-7);
  EXPECT_NEAR(expected, 1.4153 / 6.3318, 1e-3);
  EXPECT_EQ(json::parse(slurp(dir_ / "sphere_map.json"))["nodes"].size(), 37u * 72u);
}

TEST_F(Cli, SphereMapSingleNodePpm) {
  json cfg_json = base({{"family", "fock"}, {"n_h", 2}}, 3);
  cfg_json["grid"] = {{"n_theta", 1}, {"n_phi", 1}};
  const auto cfg = write_config("c.json", cfg_json);
  const auto r = run("sphere-map --config " + cfg.string() + " --format ppm --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ppm = slurp(dir_ / "sphere_map.ppm");
  EXPECT_EQ(ppm.substr(0, 2), "P6");
  EXPECT_EQ(ppm.size(), std::string("P6\n1 1\n255\n").size() + 3);
}

TEST_F(Cli, BrightScanVacuumIsFlat) {
  json cfg_json = base({{"family", "vacuum"}}, 1);
  cfg_json["bright_beam"] = json::object();
  cfg_json["scan"] = {{"points", 90}};
  const auto cfg = write_config("c.json", cfg_json);
  const auto r = run("bright-scan --config " + cfg.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir_ / "bright_scan.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "theta,variance,variance_db");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0") << line;
  }
  EXPECT_EQ(rows, 90);
}

TEST_F(Cli, BrightScanRecoversFittedMinimum) {
  json cfg_json = base({{"family", "vacuum"}}, 1);
  cfg_json["bright_beam"] = {{"fit", {{"min_db", -5.0}, {"theta_star_deg", 2.0}, {"axis_split_deg", 1.0}, {"v_max", 10.0}}}};
  double previous = 0.0;
  for (int points : {720, 360}) {
    cfg_json["scan"] = {{"points", points}};
    const auto cfg = write_config("c.json", cfg_json);
    const auto r = run("bright-scan --config " + cfg.string() + " --format json --out " + dir_.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto m = json::parse(r.out)["minimum"];
    EXPECT_NEAR(m["theta_deg"].get<double>(), 2.0, 1e-4);
    EXPECT_NEAR(m["variance_db"].get<double>(), -5.0, 1e-6);
    if (points == 360) EXPECT_NEAR(m["theta_deg"].get<double>(), previous, 180.0 / points);
    previous = m["theta_deg"].get<double>();
  }
  EXPECT_EQ(json::parse(slurp(dir_ / "bright_scan.json"))["scan"].size(), 360u);
}

TEST_F(Cli, BrightScanNeedsModel) {
  const auto cfg = write_config("c.json", base({{"family", "vacuum"}}, 1));
  EXPECT_EQ(run("bright-scan --config " + cfg.string() + " --out " + dir_.string()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "bright_scan.csv"));
}

TEST_F(Cli, TomoExperimentTwoDeterministic) {
  json cfg_json = base({{"family", "squeezed_thermal"}, {"squeeze_db", -3.8}, {"antisqueeze_db", 8.6}}, 40);
  cfg_json["tomography"] = {{"fock_dim", 16}, {"phases", 12}, {"samples_per_phase", 100000}};
  cfg_json["degrees"] = {{"vacuum_threshold", 0.01}};
  const auto cfg = write_config("c.json", cfg_json);
  const auto a = run("tomo --config " + cfg.string() + " --seed 7 --out " + (dir_ / "a").string());
  ASSERT_EQ(a.code, 0) << a.err;
  const double p2 = json::parse(a.out)["degrees"]["p2"].get<double>();
  EXPECT_GE(p2, 0.77);
  EXPECT_LE(p2, 0.81);
  const auto b = run("tomo --config " + cfg.string() + " --seed 7 --out " + (dir_ / "b").string());
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"tomo_report.json", "reconstructed_state.json", "homodyne.csv"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;

  json again = cfg_json;
  again["tomography"]["dataset"] = "a/homodyne.csv";
  const auto cfg2 = write_config("d.json", again);
  const auto c = run("tomo --config " + cfg2.string() + " --out " + (dir_ / "c").string());
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json::parse(c.out)["degrees"], json::parse(a.out)["degrees"]);
}

TEST_F(Cli, TomoVacuumAndSeedRequirement) {
  json cfg_json = base({{"family", "vacuum"}}, 8);
  cfg_json["tomography"] = {{"fock_dim", 8}, {"samples_per_phase", 5000}};
  cfg_json["degrees"] = {{"vacuum_threshold", 0.01}};
  const auto cfg = write_config("c.json", cfg_json);
  EXPECT_EQ(run("tomo --config " + cfg.string() + " --out " + dir_.string()).code, 2);
  EXPECT_FALSE(fs::exists(dir_ / "tomo_report.json"));

  cfg_json["seed"] = 3;
  const auto seeded = write_config("s.json", cfg_json);
  const auto r = run("tomo --config " + seeded.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = json::parse(r.out)["degrees"];
  EXPECT_EQ(d["p1"].get<double>(), 0.0);
  EXPECT_EQ(d["p2"].get<double>(), 0.0);
  EXPECT_EQ(d["p2_prime"].get<double>(), 0.0);
}

}  // namespace
