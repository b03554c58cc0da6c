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

#include "wristfic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace wristfic {

namespace {

constexpr double kMaxStepPhase = 0.3;  // h * omega per RK4 substep

bool finite(const WristState& s) {
  return std::isfinite(s.q.s) && s.q.v.allFinite() && s.omega.allFinite();
}

}  // namespace

Vec3 ClockTask::target(int index) const {
  const double angle =
      0.5 * std::numbers::pi + 2.0 * std::numbers::pi * index / n_targets;
  return {plane_x, radius * std::cos(angle), radius * std::sin(angle)};
}

std::vector<Vec3> ClockTask::targets() const {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n_targets));
  for (int i = 0; i < n_targets; ++i) out.push_back(target(i));
  return out;
}

void ClockTask::validate() const {
  if (!(plane_x > 0.0)) throw std::invalid_argument("plane_x must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (n_targets < 1) throw std::invalid_argument("need at least one target");
  if (!(dwell >= 0.0)) throw std::invalid_argument("dwell must be >= 0");
}

PiecewiseConstant::PiecewiseConstant(double value) : points_{{0.0, value}} {}

PiecewiseConstant::PiecewiseConstant(
    std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].first > points_[i - 1].first)) {
      throw std::invalid_argument(
          "schedule breakpoints must be strictly increasing");
    }
  }
}

double PiecewiseConstant::at(double t) const {
  auto it = std::upper_bound(
      points_.begin(), points_.end(), t,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  if (it == points_.begin()) return points_.front().second;
  return std::prev(it)->second;
}

double PiecewiseConstant::min() const {
  double m = points_.front().second;
  for (const auto& p : points_) m = std::min(m, p.second);
  return m;
}

double PiecewiseConstant::max() const {
  double m = points_.front().second;
  for (const auto& p : points_) m = std::max(m, p.second);
  return m;
}

void ParamSchedule::validate(const ClockTask& task) const {
  if (!(stiffness.min() > 0.0)) {
    throw std::invalid_argument("stiffness schedule must stay positive");
  }
  for (const auto& p : torsion.points()) {
    if (!std::isfinite(p.second)) {
      throw std::invalid_argument("torsion schedule must be finite");
    }
  }
  for (int idx : targets) {
    if (idx < 0 || idx >= task.n_targets) {
      throw std::invalid_argument("target index " + std::to_string(idx) +
                                  " out of range");
    }
  }
}

int auto_substeps(double max_stiffness, const BodyModel& body, double dt) {
  const double i_min =
      Eigen::SelfAdjointEigenSolver<Mat3>(body.inertia).eigenvalues().minCoeff();
  const double omega = std::sqrt(2.0 * max_stiffness / i_min);
  return std::max(1, static_cast<int>(std::ceil(dt * omega / kMaxStepPhase)));
}

Vec3 pointer_intersection(const Quat& q, double plane_x, const Vec3& origin) {
  const Vec3 r = pointer_axis(q);
  if (std::abs(r.x()) <= 1e-6) {
    throw GeometryError("pointer does not intersect target plane");
  }
  return origin + r * ((plane_x - origin.x()) / r.x());
}

Vec3 pointer_velocity(const Quat& q, const Vec3& omega, double plane_x,
                      const Vec3& origin) {
  const Vec3 r = pointer_axis(q);
  if (std::abs(r.x()) <= 1e-6) {
    throw GeometryError("pointer does not intersect target plane");
  }
  const Vec3 r_dot = rotate_vec(q, omega).cross(r);
  return (plane_x - origin.x()) * (r_dot * r.x() - r * r_dot.x()) /
         (r.x() * r.x());
}

Trajectory run_trial(const ParamSchedule& schedule, const ClockTask& task,
                     const BodyModel& body_in, const BandParams& band_params,
                     const IntegratorSettings& integrator,
                     const ControllerSettings& controller) {
  task.validate();
  schedule.validate(task);
  band_params.validate();
  if (!(integrator.sample_dt > 0.0)) {
    throw std::invalid_argument("sample_dt must be positive");
  }

  BodyModel body = body_in;
  if (!schedule.gravity) body.gravity = Vec3::Zero();

  const double dt = integrator.sample_dt;
  Trajectory traj;
  traj.sample_dt = dt;
  traj.substeps = integrator.substeps > 0
                      ? integrator.substeps
                      : auto_substeps(schedule.stiffness.max(), body, dt);
  const double h = dt / traj.substeps;

  std::vector<Vec3> waypoints;
  for (int idx : schedule.targets) {
    waypoints.push_back(task.target(idx));
    waypoints.push_back(task.center());
  }

  ElasticBand band(task.center(), band_params, 0.0);
  auto desired = [&](double t, double phi) {
    return project_to_sphere(band.sample(t).position, task.origin, phi,
                             controller.order);
  };

  QuatFic fic(controller.axis);
  WristState state{desired(0.0, schedule.torsion.at(0.0)), Vec3::Zero(), 0.0};
  fic.reset(state.q, state.q);

  std::optional<AdaptiveIntegrator> adaptive;
  if (integrator.kind == IntegratorKind::kAdaptive) {
    adaptive.emplace(integrator.rel_tol);
  }

  std::size_t next_waypoint = 0;
  int reach = -1;
  double dwell_end = task.dwell;
  Vec3 endpoint = task.center();

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;

    if (t >= dwell_end - 1e-9) {
      if (next_waypoint == waypoints.size()) break;
      const Vec3& goal = waypoints[next_waypoint++];
      ++reach;
      const double d0 = (goal - band.sample(t).position).norm();
      const double kd =
          d0 > 0.0 ? compute_kd(band_params.a_max, d0, band_params.mass) : 0.0;
      band.retarget(goal, kd);
      fic.reset(state.q, desired(t, schedule.torsion.at(t)));
      endpoint = goal;
      const auto arrival = band.arrival_time();
      dwell_end = (arrival ? *arrival : t) + task.dwell;
    }

    const double k_now = schedule.stiffness.at(t);
    const double phi_now = schedule.torsion.at(t);
    const PlanSample plan = band.sample(t);
    const Quat q_d = desired(t, phi_now);
    const FicTorque cmd = fic.command(state.q, q_d, k_now);

    TrialSample s;
    s.t = t;
    s.x_d = plan.position;
    s.q_d = q_d;
    s.q = state.q;
    s.omega = state.omega;
    s.tau_c = cmd.torque;
    s.tau_g = gravity_torque(state.q, body);
    s.x = pointer_intersection(state.q, task.plane_x, task.origin);
    s.target = endpoint;
    s.reach = reach;
    s.moving = !band.arrived();
    s.stiffness = k_now;
    s.torsion = phi_now;
    s.error_angle = cmd.angle;
    s.phase = fic.phase();
    traj.samples.push_back(s);

    // Advance one sample period.
    if (adaptive) {
      const TorqueFn torque = [&](double ti, const WristState& st) {
        return rotate_vec_inverse(
            st.q, fic.command(st.q, desired(ti, phi_now), k_now).torque);
      };
      double last = t;
      state = adaptive->advance(
          state, torque, body, t + dt, [&](const WristState& st) {
            band.advance_to(st.t);
            fic.commit(st.q, desired(st.t, phi_now), st.t - last);
            last = st.t;
          });
      state.t = static_cast<double>(k + 1) * dt;
    } else {
      for (int j = 0; j < traj.substeps; ++j) {
        const double t0 = t + j * h;
        const double k_sub = schedule.stiffness.at(t0);
        const double phi_sub = schedule.torsion.at(t0);
        const TorqueFn torque = [&](double ti, const WristState& st) {
          return rotate_vec_inverse(
              st.q, fic.command(st.q, desired(ti, phi_sub), k_sub).torque);
        };
        state.t = t0;
        const StepResult r = rk4_step(state, torque, body, h);
        state = r.state;
        traj.max_norm_drift = std::max(traj.max_norm_drift, r.norm_drift);
        band.advance_to(state.t);
        fic.commit(state.q, desired(state.t, phi_sub), h);
      }
      state.t = static_cast<double>(k + 1) * dt;
    }
    if (!finite(state)) throw IntegrationError("non-finite plant state");
  }
  return traj;
}

TrialMetrics compute_metrics(const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  TrialMetrics m;
  double sy = 0.0, sz = 0.0, effort = 0.0, effort2 = 0.0;
  double dy = 0.0, dz = 0.0;
  std::size_t n_dwell = 0;
  for (const auto& s : traj.samples) {
    const Vec3 e = s.x - s.x_d;
    sy += e.y() * e.y();
    sz += e.z() * e.z();
    const double tau = s.tau_c.norm();
    effort += tau;
    effort2 += tau * tau;
    if (!s.moving) {
      const Vec3 et = s.x - s.target;
      dy += et.y() * et.y();
      dz += et.z() * et.z();
      ++n_dwell;
    }
  }
  const double n = static_cast<double>(traj.samples.size());
  m.rmse_y = std::sqrt(sy / n);
  m.rmse_z = std::sqrt(sz / n);
  m.effort_mean = effort / n;
  m.effort_std = std::sqrt(std::max(0.0, effort2 / n - m.effort_mean * m.effort_mean));
  if (n_dwell > 0) {
    m.rmse_dwell_y = std::sqrt(dy / static_cast<double>(n_dwell));
    m.rmse_dwell_z = std::sqrt(dz / static_cast<double>(n_dwell));
  }
  return m;
}

ListingSurface extract_listing(std::span<const Trajectory> trajs,
                               PoseSource source) {
  ListingSurface out;
  for (const auto& traj : trajs) {
    for (const auto& s : traj.samples) {
      try {
        const EulerXYZ e = euler_xyz_from_quat(
            source == PoseSource::kMeasured ? s.q : s.q_d);
        out.points.emplace_back(e.y, e.z, e.x);
      } catch (const GimbalLockError&) {
        ++out.skipped;
      }
    }
  }
  if (out.points.empty()) {
    throw std::domain_error("no non-degenerate Listing samples");
  }
  return out;
}

ListingSurface extract_listing(const Trajectory& traj, PoseSource source) {
  return extract_listing(std::span<const Trajectory>(&traj, 1), source);
}

PlaneFit fit_plane(const ListingSurface& surface) {
  const auto n = static_cast<Eigen::Index>(surface.points.size());
  if (n < 3) throw std::domain_error("plane fit needs at least 3 samples");
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& p = surface.points[static_cast<std::size_t>(i)];
    design(i, 0) = p.x();
    design(i, 1) = p.y();
    design(i, 2) = 1.0;
    rhs(i) = p.z();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw std::domain_error("rank-deficient plane fit");
  const Eigen::Vector3d coef = qr.solve(rhs);
  const Eigen::VectorXd resid = design * coef - rhs;
  return {coef(0), coef(1), coef(2),
          std::sqrt(resid.squaredNorm() / static_cast<double>(n))};
}

}  // namespace wristfic
