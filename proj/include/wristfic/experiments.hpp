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

// Clock pointing task: closed-loop trials, tracking metrics and Listing
// surfaces.

#ifndef WRISTFIC_EXPERIMENTS_HPP_
#define WRISTFIC_EXPERIMENTS_HPP_

#include <span>
#include <utility>
#include <vector>

#include "wristfic/dynamics.hpp"
#include "wristfic/fic.hpp"
#include "wristfic/planner.hpp"
#include "wristfic/rotations.hpp"

namespace wristfic {

// Targets on a circle in the plane x = plane_x, centred on (plane_x, 0, 0).
// Target i sits at angle pi/2 + 2 pi i / n in the y-z plane (measured from +y
// toward +z), so index 0 is the top target.
struct ClockTask {
  double plane_x = 0.30;
  double radius = 0.10;
  int n_targets = 8;
  double dwell = 0.5;       // s, hold at every reach endpoint
  Vec3 origin = Vec3::Zero();  // joint centre

  Vec3 center() const { return {plane_x, 0.0, 0.0}; }
  Vec3 target(int index) const;
  std::vector<Vec3> targets() const;
  void validate() const;
};

// Right-continuous piecewise-constant signal. The first value also applies
// before the first breakpoint.
class PiecewiseConstant {
 public:
  PiecewiseConstant(double value = 0.0);  // NOLINT(google-explicit-constructor)
  explicit PiecewiseConstant(std::vector<std::pair<double, double>> points);

  double at(double t) const;
  double min() const;
  double max() const;
  const std::vector<std::pair<double, double>>& points() const {
    return points_;
  }

 private:
  std::vector<std::pair<double, double>> points_;
};

struct ParamSchedule {
  PiecewiseConstant stiffness{10000.0};  // K, N m / rad
  PiecewiseConstant torsion{0.0};        // phi, rad
  std::vector<int> targets;  // visited in order, centre-out and back
  bool gravity = true;

  void validate(const ClockTask& task) const;
};

enum class IntegratorKind { kFixedRk4, kAdaptive };

struct IntegratorSettings {
  IntegratorKind kind = IntegratorKind::kFixedRk4;
  double sample_dt = 1e-3;  // recording and scheduling period
  int substeps = 0;         // RK4 steps per sample; 0 picks from stiffness
  double rel_tol = 1e-8;    // adaptive only
};

struct ControllerSettings {
  TorqueAxis axis = TorqueAxis::kUnit;
  TorsionOrder order = TorsionOrder::kPointerTwist;
};

struct TrialSample {
  double t = 0.0;
  Vec3 x_d = Vec3::Zero();    // planned point on the target plane
  Quat q_d;                   // desired pose
  Quat q;                     // measured pose
  Vec3 omega = Vec3::Zero();  // body frame
  Vec3 tau_c = Vec3::Zero();  // commanded torque, world frame
  Vec3 tau_g = Vec3::Zero();  // gravity torque, body frame
  Vec3 x = Vec3::Zero();      // pointer / plane intersection

  Vec3 target = Vec3::Zero();  // current reach endpoint
  int reach = -1;              // reach index, -1 before the first
  bool moving = false;         // band still travelling
  double stiffness = 0.0;
  double torsion = 0.0;
  double error_angle = 0.0;
  FicPhase phase;
};

struct Trajectory {
  std::vector<TrialSample> samples;
  double sample_dt = 1e-3;
  int substeps = 1;
  double max_norm_drift = 0.0;
};

// Substeps that keep RK4 well inside its stability region for the stiffest
// convergence spring on the smallest principal inertia.
int auto_substeps(double max_stiffness, const BodyModel& body, double dt);

// Closed-loop trial: hold at the centre for one dwell, then for every target
// reach out, dwell, return, dwell. Gravity acts only if schedule.gravity.
// The band stiffness of each reach is computed from band.a_max.
Trajectory run_trial(const ParamSchedule& schedule, const ClockTask& task,
                     const BodyModel& body, const BandParams& band,
                     const IntegratorSettings& integrator = {},
                     const ControllerSettings& controller = {});

// Throws GeometryError when |r_x| <= 1e-6.
Vec3 pointer_intersection(const Quat& q, double plane_x,
                          const Vec3& origin = Vec3::Zero());
// Time derivative of pointer_intersection for body-frame rate omega.
Vec3 pointer_velocity(const Quat& q, const Vec3& omega, double plane_x,
                      const Vec3& origin = Vec3::Zero());

struct TrialMetrics {
  double rmse_y = 0.0;  // m, pointer vs planned
  double rmse_z = 0.0;
  double effort_mean = 0.0;  // N m, |tau_c|
  double effort_std = 0.0;
  // Pointer vs reach endpoint, dwell samples only.
  double rmse_dwell_y = 0.0;
  double rmse_dwell_z = 0.0;
};

TrialMetrics compute_metrics(const Trajectory& traj);

enum class PoseSource { kMeasured, kDesired };

// Points are (theta_y, theta_z, theta_x) in radians.
struct ListingSurface {
  std::vector<Vec3> points;
  std::size_t skipped = 0;  // gimbal-degenerate samples
};

ListingSurface extract_listing(std::span<const Trajectory> trajs,
                               PoseSource source = PoseSource::kMeasured);
ListingSurface extract_listing(const Trajectory& traj,
                               PoseSource source = PoseSource::kMeasured);

// theta_x = a theta_y + b theta_z + c
struct PlaneFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
};

PlaneFit fit_plane(const ListingSurface& surface);

}  // namespace wristfic

#endif  // WRISTFIC_EXPERIMENTS_HPP_
