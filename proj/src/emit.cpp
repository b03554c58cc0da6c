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


#include "wristfic/emit.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <future>
#include <numbers>
#include <vector>

#include <json.hpp>

namespace wristfic {

namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void put(std::string& line, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  if (!line.empty()) line.push_back(',');
  line.append(buf, static_cast<std::size_t>(n));
}

void put(std::string& line, const Vec3& v) {
  put(line, v.x());
  put(line, v.y());
  put(line, v.z());
}

void put(std::string& line, const Quat& q) {
  put(line, q.s);
  put(line, q.v);
}

json fit_json(const std::optional<PlaneFit>& fit) {
  if (!fit) return nullptr;
  return {{"a", fit->a},
          {"b", fit->b},
          {"c", fit->c},
          {"rms_residual", fit->rms_residual}};
}

std::optional<PlaneFit> try_fit(const Trajectory& traj, PoseSource source) {
  try {
    return fit_plane(extract_listing(traj, source));
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

json report_object(const ConditionReport& r) {
  const TrialMetrics& m = r.metrics;
  return {{"condition", r.name},
          {"rmse_y", m.rmse_y},
          {"rmse_z", m.rmse_z},
          {"effort_mean", m.effort_mean},
          {"effort_std", m.effort_std},
          {"rmse_target_dwell_y", m.rmse_dwell_y},
          {"rmse_target_dwell_z", m.rmse_dwell_z},
          {"listing_measured", fit_json(r.listing_measured)},
          {"listing_desired", fit_json(r.listing_desired)},
          {"samples", r.samples},
          {"substeps", r.substeps},
          {"max_norm_drift", r.max_norm_drift}};
}

struct Outcome {
  ConditionReport report;
  std::string error;
};

Outcome run_one(const ExperimentConfig& cfg, const Condition& cond,
                const std::filesystem::path& root) {
  Outcome out;
  out.report.name = cond.name;
  try {
    const Trajectory traj = run_trial(cond.schedule, cfg.task, cfg.body,
                                      cfg.band, cfg.integrator, cfg.controller);
    out.report = summarize(cond.name, traj);

    const std::filesystem::path dir = root / cond.name;
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(csv, traj);
    std::ofstream listing(dir / "listing.csv");
    write_listing_csv(listing, traj);
    std::ofstream metrics(dir / "metrics.json");
    metrics << report_json(out.report);
    if (!csv || !listing || !metrics) {
      throw std::runtime_error("cannot write outputs in " + dir.string());
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

ConditionReport summarize(const std::string& name, const Trajectory& traj) {
  ConditionReport r;
  r.name = name;
  r.metrics = compute_metrics(traj);
  r.listing_measured = try_fit(traj, PoseSource::kMeasured);
  r.listing_desired = try_fit(traj, PoseSource::kDesired);
  r.samples = traj.samples.size();
  r.substeps = traj.substeps;
  r.max_norm_drift = traj.max_norm_drift;
  return r;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  std::string line;
  for (const auto& s : traj.samples) {
    line.clear();
    put(line, s.t);
    put(line, s.x_d);
    put(line, s.q_d);
    put(line, s.q);
    put(line, s.omega);
    put(line, s.tau_c);
    put(line, s.tau_g);
    put(line, s.x);
    out << line << '\n';
  }
}

void write_listing_csv(std::ostream& out, const Trajectory& traj) {
  out << kListingHeader << '\n';
  for (PoseSource source : {PoseSource::kMeasured, PoseSource::kDesired}) {
    ListingSurface surface;
    try {
      surface = extract_listing(traj, source);
    } catch (const std::domain_error&) {
      continue;
    }
    const char* label = source == PoseSource::kMeasured ? "measured" : "desired";
    std::string line;
    for (const Vec3& p : surface.points) {
      line.clear();
      put(line, p.x() * kRadToDeg);
      put(line, p.y() * kRadToDeg);
      put(line, p.z() * kRadToDeg);
      out << label << ',' << line << '\n';
    }
  }
}

std::string report_json(const ConditionReport& report) {
  return report_object(report).dump(2) + "\n";
}

int run_and_emit(const ExperimentConfig& config, const EmitOptions& options,
                 std::ostream& err) {
  std::vector<const Condition*> selected;
  for (const auto& c : config.conditions) {
    if (options.condition.empty() || c.name == options.condition) {
      selected.push_back(&c);
    }
  }
  if (selected.empty()) {
    err << "error: no condition named \"" << options.condition << "\"\n";
    return 2;
  }

  const std::filesystem::path root =
      options.output_dir.empty() ? config.output_dir : options.output_dir;
  try {
    std::filesystem::create_directories(root);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::vector<Outcome> outcomes(selected.size());
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  for (std::size_t begin = 0; begin < selected.size(); begin += jobs) {
    const std::size_t end = std::min(selected.size(), begin + jobs);
    std::vector<std::future<Outcome>> running;
    for (std::size_t i = begin; i < end; ++i) {
      running.push_back(std::async(std::launch::async, run_one,
                                   std::cref(config), std::cref(*selected[i]),
                                   std::cref(root)));
    }
    for (std::size_t i = begin; i < end; ++i) {
      outcomes[i] = running[i - begin].get();
    }
  }

  int status = 0;
  json summary = json::array();
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      err << "error: condition " << o.report.name << ": " << o.error << '\n';
      status = 1;
      continue;
    }
    summary.push_back(report_object(o.report));
  }
  std::ofstream out(root / "summary.json");
  out << json{{"conditions", summary}}.dump(2) << '\n';
  if (!out) {
    err << "error: cannot write " << (root / "summary.json").string() << '\n';
    status = 1;
  }
  return status;
}

}  // namespace wristfic
