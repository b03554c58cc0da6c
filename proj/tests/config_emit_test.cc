// Copyright 2026 The wristfic Authors
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


#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "wristfic/config.hpp"
#include "wristfic/emit.hpp"

namespace wristfic {
namespace {

namespace fs = std::filesystem;

std::string ErrorOf(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string WhereOf(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "<none>";
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() /
              (tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
               "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(ConfigTest, BlankInputGivesDefaults) {
  for (const char* text : {"", "  \n\t", "{}"}) {
    const ExperimentConfig cfg = parse_config(text);
    ASSERT_EQ(cfg.conditions.size(), 8u);
    EXPECT_EQ(cfg.conditions[0].name, "gravity_off_K10000_phi0");
    EXPECT_FALSE(cfg.conditions[0].schedule.gravity);
    EXPECT_EQ(cfg.conditions[1].name, "gravity_on_K10000_phi0");
    EXPECT_EQ(cfg.conditions[2].name, "gravity_on_K10000_phi-25");
    EXPECT_NEAR(cfg.conditions[2].schedule.torsion.at(0.0),
                -25.0 * std::numbers::pi / 180.0, 1e-15);
    EXPECT_EQ(cfg.conditions[6].name, "gravity_on_K1000_phi-25");
    EXPECT_EQ(cfg.conditions[7].name, "retune");
    EXPECT_EQ(cfg.conditions[1].schedule.targets,
              (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_EQ(cfg.output_dir, "out");
    EXPECT_EQ(cfg.band.a_max, 3.2);
    EXPECT_EQ(cfg.task.dwell, 0.5);
  }
}

TEST(ConfigTest, RetuneStepsLandMidReach) {
  const ParamSchedule s = retune_schedule();
  ClockTask task;
  const double reach = reach_duration(BandParams{});
  // Reach windows for two round trips to the top target.
  std::vector<std::pair<double, double>> windows;
  double t = task.dwell;
  for (int i = 0; i < 4; ++i) {
    windows.emplace_back(t, t + reach);
    t += reach + task.dwell;
  }
  auto inside = [&](double step) {
    for (const auto& [a, b] : windows) {
      if (step > a && step < b) return true;
    }
    return false;
  };
  for (const auto& [ts, k] : s.stiffness.points()) {
    if (ts > 0.0) {
      EXPECT_TRUE(inside(ts)) << "K step at " << ts;
    }
  }
  for (const auto& [ts, phi] : s.torsion.points()) {
    if (ts > 0.0) {
      EXPECT_TRUE(inside(ts)) << "phi step at " << ts;
    }
  }
}

TEST(ConfigTest, SweepExpandsCartesianProduct) {
  ExperimentConfig cfg = parse_config(R"({"sweep": {"K": [10000, 8000, 1000]}})");
  ASSERT_EQ(cfg.conditions.size(), 3u);
  EXPECT_EQ(cfg.conditions[2].name, "gravity_on_K1000_phi0");
  EXPECT_EQ(cfg.conditions[2].schedule.stiffness.at(0.0), 1000.0);

  cfg = parse_config(
      R"({"sweep": {"gravity": [true, false], "K": [1, 2, 3], "phi_deg": [0, -25]}})");
  EXPECT_EQ(cfg.conditions.size(), 12u);
}

TEST(ConfigTest, ExplicitConditionsAndSchedules) {
  const ExperimentConfig cfg = parse_config(R"({
    "task": {"dwell": 0.2, "order": [3, 1]},
    "integrator": {"kind": "adaptive", "sample_rate": 500, "rel_tol": 1e-7},
    "controller": {"torque_axis": "raw", "torsion_order": "global"},
    "band": {"mode": "spring"},
    "conditions": [
      {"name": "steps", "gravity": false, "K": [[0, 1000], [0.5, 2000]],
       "phi": [[0, 0], [0.3, 0.1]], "targets": [2]},
      {"K": 500, "phi_deg": 10}
    ]})");
  ASSERT_EQ(cfg.conditions.size(), 2u);
  const ParamSchedule& s = cfg.conditions[0].schedule;
  EXPECT_EQ(cfg.conditions[0].name, "steps");
  EXPECT_FALSE(s.gravity);
  EXPECT_EQ(s.stiffness.at(0.49), 1000.0);
  EXPECT_EQ(s.stiffness.at(0.5), 2000.0);
  EXPECT_EQ(s.torsion.at(0.3), 0.1);
  EXPECT_EQ(s.targets, std::vector<int>{2});
  EXPECT_EQ(cfg.conditions[1].name, "gravity_on_K500_phi10");
  EXPECT_EQ(cfg.conditions[1].schedule.targets, (std::vector<int>{3, 1}));
  EXPECT_EQ(cfg.integrator.kind, IntegratorKind::kAdaptive);
  EXPECT_EQ(cfg.integrator.sample_dt, 1.0 / 500.0);
  EXPECT_EQ(cfg.controller.axis, TorqueAxis::kRaw);
  EXPECT_EQ(cfg.controller.order, TorsionOrder::kGlobalPremultiply);
  EXPECT_EQ(cfg.band.mode, BandMode::kSpring);
}

TEST(ConfigTest, ErrorsNameTheOffendingValue) {
  EXPECT_EQ(WhereOf(R"({"body": {"mass": -1}})"), "/body/mass");
  EXPECT_EQ(ErrorOf(R"({"body": {"masss": 1}})"), "/body/masss: unknown key");
  EXPECT_EQ(WhereOf(R"({"conditions": [{"K": 10}, {"K": -1}]})"), "/conditions/1/K");
  EXPECT_EQ(WhereOf(R"({"conditions": [{"targets": [8]}]})"), "/conditions/0/targets/0");
  EXPECT_EQ(WhereOf(R"({"conditions": [{"phi": 0, "phi_deg": 0}]})"),
            "/conditions/0/phi");
  EXPECT_EQ(WhereOf(R"({"conditions": [{"name": "a"}, {"name": "a"}]})"),
            "/conditions");  // names may also come from the sweep
  EXPECT_EQ(WhereOf(R"({"integrator": {"kind": "euler"}})"), "/integrator/kind");
  EXPECT_EQ(WhereOf(R"({"integrator": {"rel_tol": 1}})"), "/integrator/rel_tol");
  EXPECT_EQ(WhereOf(R"({"task": {"n_targets": 0}})"), "/task/n_targets");
  EXPECT_EQ(WhereOf(R"({"sweep": {"K": []}})"), "/sweep/K");
  EXPECT_EQ(WhereOf("{"), "");
  EXPECT_NE(ErrorOf("{").find("parse error"), std::string::npos);
  EXPECT_EQ(WhereOf("[]"), "");
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(ConfigTest, ShippedConfigsParse) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(WRISTFIC_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    SCOPED_TRACE(entry.path().string());
    EXPECT_FALSE(load_config(entry.path()).conditions.empty());
    ++n;
  }
  EXPECT_GE(n, 4u);
}

constexpr const char* kSmallConfig = R"({
  "task": {"dwell": 0.05},
  "conditions": [{"name": "top", "K": 1000, "targets": [0]},
                 {"name": "side", "K": 1000, "phi_deg": -25, "targets": [2]}]
})";

TEST(EmitTest, WritesDocumentedOutputs) {
  TempDir dir("wristfic_emit");
  const ExperimentConfig cfg = parse_config(kSmallConfig);
  std::ostringstream err;
  ASSERT_EQ(run_and_emit(cfg, {dir.path().string(), "", 2}, err), 0) << err.str();

  std::ifstream csv(dir.path() / "top" / "trajectory.csv");
  std::string line;
  ASSERT_TRUE(std::getline(csv, line));
  EXPECT_EQ(line, kTrajectoryHeader);
  const std::size_t columns = Split(line).size();
  EXPECT_EQ(columns, 24u);
  std::size_t rows = 0;
  double t_prev = -1.0;
  while (std::getline(csv, line)) {
    const auto cells = Split(line);
    ASSERT_EQ(cells.size(), columns);
    const double t = std::stod(cells[0]);
    EXPECT_GT(t, t_prev);
    t_prev = t;
    ++rows;
  }
  EXPECT_GT(rows, 400u);

  std::ifstream listing(dir.path() / "top" / "listing.csv");
  ASSERT_TRUE(std::getline(listing, line));
  EXPECT_EQ(line, kListingHeader);

  const auto metrics = nlohmann::json::parse(Slurp(dir.path() / "top" / "metrics.json"));
  EXPECT_EQ(metrics.at("condition"), "top");
  EXPECT_EQ(metrics.at("samples").get<std::size_t>(), rows);
  const auto summary = nlohmann::json::parse(Slurp(dir.path() / "summary.json"));
  ASSERT_EQ(summary.at("conditions").size(), 2u);
  EXPECT_EQ(summary["conditions"][1]["condition"], "side");
}

TEST(EmitTest, OutputsAreDeterministic) {
  TempDir a("wristfic_det_a"), b("wristfic_det_b");
  const ExperimentConfig cfg = parse_config(kSmallConfig);
  std::ostringstream err;
  ASSERT_EQ(run_and_emit(cfg, {a.path().string(), "", 1}, err), 0);
  ASSERT_EQ(run_and_emit(cfg, {b.path().string(), "", 2}, err), 0);
  for (const char* f : {"top/trajectory.csv", "top/listing.csv", "top/metrics.json",
                        "side/trajectory.csv", "summary.json"}) {
    EXPECT_EQ(Slurp(a.path() / f), Slurp(b.path() / f)) << f;
  }
}

TEST(EmitTest, ConditionFilterAndFailures) {
  TempDir dir("wristfic_filter");
  const ExperimentConfig cfg = parse_config(kSmallConfig);
  std::ostringstream err;
  EXPECT_EQ(run_and_emit(cfg, {dir.path().string(), "side", 1}, err), 0);
  EXPECT_TRUE(fs::exists(dir.path() / "side" / "trajectory.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "top"));

  EXPECT_EQ(run_and_emit(cfg, {dir.path().string(), "missing", 1}, err), 2);
  EXPECT_NE(err.str().find("missing"), std::string::npos);

  std::ofstream(dir.path() / "blocker") << "x";
  EXPECT_EQ(run_and_emit(cfg, {(dir.path() / "blocker").string(), "", 1}, err), 1);
}

}  // namespace
}  // namespace wristfic
