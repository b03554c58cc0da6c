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


// Runs configured conditions and writes their outputs. Each condition gets
// its own directory under the output root:
//
//   trajectory.csv  one row per sample, SI units named in the header
//   metrics.json    tracking, effort and Listing plane fits
//   listing.csv     Listing point clouds in degrees
//
// summary.json in the root collects every condition's metrics.

#ifndef WRISTFIC_EMIT_HPP_
#define WRISTFIC_EMIT_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "wristfic/config.hpp"
#include "wristfic/experiments.hpp"

namespace wristfic {

inline constexpr const char* kTrajectoryHeader =
    "t[s],Xd_x[m],Xd_y[m],Xd_z[m],"
    "qd_w[-],qd_x[-],qd_y[-],qd_z[-],"
    "q_w[-],q_x[-],q_y[-],q_z[-],"
    "omega_x[rad/s],omega_y[rad/s],omega_z[rad/s],"
    "tauc_x[N*m],tauc_y[N*m],tauc_z[N*m],"
    "taug_x[N*m],taug_y[N*m],taug_z[N*m],"
    "X_x[m],X_y[m],X_z[m]";

inline constexpr const char* kListingHeader =
    "source,theta_y[deg],theta_z[deg],theta_x[deg]";

struct ConditionReport {
  std::string name;
  TrialMetrics metrics;
  std::optional<PlaneFit> listing_measured;
  std::optional<PlaneFit> listing_desired;
  std::size_t samples = 0;
  int substeps = 0;
  double max_norm_drift = 0.0;
};

ConditionReport summarize(const std::string& name, const Trajectory& traj);

// omega is body frame, tau_c world frame, tau_g body frame.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_listing_csv(std::ostream& out, const Trajectory& traj);
std::string report_json(const ConditionReport& report);

struct EmitOptions {
  std::string output_dir;  // overrides the config when non-empty
  std::string condition;   // run only this condition when non-empty
  unsigned jobs = 1;       // conditions simulated concurrently
};

// Returns 0 on success. Failures are reported on `err` with a nonzero code.
int run_and_emit(const ExperimentConfig& config, const EmitOptions& options,
                 std::ostream& err);

}  // namespace wristfic

#endif  // WRISTFIC_EMIT_HPP_
