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


#include "wristfic/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wristfic/rotations.hpp"

namespace wristfic {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Distance between rotations, insensitive to the double cover.
double quat_distance(const Quat& a, const Quat& b) {
  const Eigen::Vector4d va(a.s, a.v.x(), a.v.y(), a.v.z());
  const Eigen::Vector4d vb(b.s, b.v.x(), b.v.y(), b.v.z());
  return std::min((va - vb).norm(), (va + vb).norm());
}

Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Quat(n(rng), n(rng), n(rng), n(rng)).normalized();
}

// Random pointing direction away from the antipode of x.
Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec3 r(n(rng), n(rng), n(rng));
    if (r.norm() < 1e-3) continue;
    r.normalize();
    if (r.x() > -0.99) return r;
  }
}

double signed_angle_about(const Quat& q, const Vec3& axis) {
  return 2.0 * std::atan2(q.v.dot(axis), q.s);
}

}  // namespace

ReleaseArrival find_arrival(std::span<const double> t,
                            std::span<const double> disp,
                            std::span<const double> velocity) {
  const std::size_t n = t.size();
  if (n < 3 || disp.size() != n || velocity.size() != n) {
    throw std::invalid_argument("need at least three aligned samples");
  }
  ReleaseArrival out;
  for (double v : velocity) out.peak_speed = std::max(out.peak_speed, std::abs(v));

  auto velocity_at = [&](double tq, std::size_t i) {
    // Linear through samples i and i + 1, extrapolating past the ends.
    const double w = (tq - t[i]) / (t[i + 1] - t[i]);
    return velocity[i] + w * (velocity[i + 1] - velocity[i]);
  };

  for (std::size_t i = 1; i < n; ++i) {
    if ((disp[i - 1] > 0.0) != (disp[i] > 0.0)) {
      const double w = disp[i - 1] / (disp[i - 1] - disp[i]);
      out.time = t[i - 1] + w * (t[i] - t[i - 1]);
      out.terminal_speed = std::abs(velocity_at(out.time, i - 1));
      return out;
    }
  }

  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(disp[i]) < std::abs(disp[m])) m = i;
  }
  const std::size_t c = std::clamp<std::size_t>(m, 1, n - 2);
  const double t0 = t[c - 1], t1 = t[c], t2 = t[c + 1];
  const double y0 = disp[c - 1], y1 = disp[c], y2 = disp[c + 1];
  // Newton form of the interpolating parabola.
  const double d01 = (y1 - y0) / (t1 - t0);
  const double d12 = (y2 - y1) / (t2 - t1);
  const double a = (d12 - d01) / (t2 - t0);
  double tv = t[m];
  if (a != 0.0) tv = 0.5 * (t0 + t1) - d01 / (2.0 * a);
  out.time = tv;
  out.terminal_speed = std::abs(velocity_at(tv, std::min(c, n - 2)));
  return out;
}

ReleaseArrival linear_release_arrival(const FicParams& params, double mass,
                                      double disp_max, int steps) {
  const auto samples = simulate_release(params, mass, disp_max, steps);
  std::vector<double> t, d, v;
  for (const auto& s : samples) {
    t.push_back(s.t);
    d.push_back(s.disp);
    v.push_back(s.velocity);
  }
  return find_arrival(t, d, v);
}

ReleaseArrival rotational_release_arrival(const BodyModel& body_in,
                                          const Vec3& axis_in,
                                          double stiffness, double theta_max,
                                          int steps) {
  BodyModel body = body_in;
  body.gravity = Vec3::Zero();
  const Vec3 axis = axis_in.normalized();
  const double inertia = axis.dot(body.inertia * axis);
  const double h =
      std::numbers::pi * std::sqrt(inertia / (2.0 * stiffness)) / steps;

  const Quat goal = Quat::identity();
  WristState state{Quat::from_axis_angle(axis, theta_max), Vec3::Zero(), 0.0};
  QuatFic fic;
  fic.reset(state.q, goal);
  fic.set_phase({FicMode::kConvergence, theta_max});

  const TorqueFn torque = [&](double, const WristState& st) {
    return rotate_vec_inverse(st.q, fic.command(st.q, goal, stiffness).torque);
  };

  std::vector<double> t{0.0}, d{theta_max}, v{0.0};
  for (int i = 0; i < 2 * steps; ++i) {
    state = rk4_step(state, torque, body, h).state;
    fic.commit(state.q, goal, h);
    t.push_back(state.t);
    d.push_back(signed_angle_about(state.q, axis));
    // omega is body frame; about a principal axis it equals the world rate.
    v.push_back(state.omega.dot(axis));
    if (fic.phase().mode != FicMode::kConvergence || v.back() >= 0.0 ||
        d.back() <= 0.0) {
      break;
    }
  }
  return find_arrival(t, d, v);
}

double rk4_error_ratio(const BodyModel& body, double h, double horizon) {
  const WristState start{Quat::from_axis_angle(Vec3(0.3, -0.5, 0.8), 0.7),
                         Vec3(3.0, -2.0, 5.0), 0.0};
  const TorqueFn no_torque = [](double, const WristState&) {
    return Vec3::Zero().eval();
  };
  auto integrate = [&](double step) {
    const long n = std::lround(horizon / step);
    WristState s = start;
    for (long i = 0; i < n; ++i) s = rk4_step(s, no_torque, body, step).state;
    return s;
  };
  const WristState ref = integrate(h / 64.0);
  auto error = [&](const WristState& s) {
    return quat_distance(s.q, ref.q) + (s.omega - ref.omega).norm() * h;
  };
  return error(integrate(h)) / error(integrate(0.5 * h));
}

CheckResult check_phi_equivariance(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phi_dist(-3.0, 3.0);
  double worst_pose = 0.0, worst_angle = 0.0, worst_torsion = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 r = random_direction(rng);
    const double phi = phi_dist(rng);
    const Quat q0 = project_to_sphere(r, Vec3::Zero(), 0.0);
    const Quat qp = project_to_sphere(r, Vec3::Zero(), phi);
    const Quat expected = q0 * Quat::from_axis_angle(Vec3::UnitX(), phi);
    worst_pose = std::max(worst_pose, quat_distance(qp, expected));
    worst_angle =
        std::max(worst_angle, std::abs(relative_angle(q0, qp) - std::abs(phi)));
    worst_torsion =
        std::max(worst_torsion, std::abs(torsion_about_pointer(qp) - phi));
  }
  const bool ok = worst_pose <= 1e-12 && worst_angle <= 1e-9 &&
                  worst_torsion <= 1e-9;
  return {"phi_equivariance", ok,
          format("max pose error %.3g, max twist-angle error %.3g",
                 worst_pose, std::max(worst_angle, worst_torsion))};
}

CheckResult check_pointing_consistency(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phi_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> scale(0.05, 2.0);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 r = random_direction(rng);
    const Vec3 x0(0.01, -0.02, 0.03);
    const Quat q = project_to_sphere(x0 + scale(rng) * r, x0, phi_dist(rng));
    worst = std::max(worst, (pointer_axis(q) - r).norm());
  }
  return {"pointing_consistency", worst <= 1e-12,
          format("max pointer error %.3g", worst)};
}

CheckResult check_euler_round_trip(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int degenerate = 0;
  for (int i = 0; i < n; ++i) {
    const Quat q = random_quat(rng);
    try {
      worst = std::max(worst,
                       quat_distance(quat_from_euler_xyz(euler_xyz_from_quat(q)), q));
    } catch (const GimbalLockError&) {
      ++degenerate;
    }
  }
  return {"euler_round_trip", worst <= 1e-9,
          format("max error %.3g, %.0f gimbal-degenerate samples", worst,
                 degenerate)};
}

CheckResult check_rk4_order() {
  const double ratio = rk4_error_ratio(BodyModel::hand_default(true), 4e-3, 0.5);
  return {"rk4_order", ratio >= 13.0 && ratio <= 19.0,
          format("global error ratio for h/2 = %.3f (16 expected)", ratio)};
}

CheckResult check_norm_drift(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  const BodyModel body = BodyModel::hand_default(true);
  const TorqueFn torque = [](double t, const WristState&) {
    return Vec3(0.05 * std::sin(3.0 * t), 0.02, -0.03 * std::cos(t));
  };
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    WristState s{random_quat(rng), Vec3(w(rng), w(rng), w(rng)), 0.0};
    for (int i = 0; i < 1000; ++i) {
      const StepResult r = rk4_step(s, torque, body, 1e-3);
      worst = std::max(worst, r.norm_drift);
      s = r.state;
    }
  }
  return {"quaternion_norm_drift", worst <= 1e-9,
          format("max per-step drift %.3g", worst)};
}

CheckResult check_switch_energy() {
  const std::vector<FicParams> cases{
      {1000.0, {}},
      {1000.0, [](double d) { return 1000.0 * d + 5e4 * d * d * d; }}};
  double worst = 0.0;
  for (const auto& p : cases) {
    for (double d : {1e-3, 0.05, 0.1, 0.4}) {
      const double div = fic_potential_energy(d, p, {FicMode::kDivergence, d});
      const double conv = fic_potential_energy(d, p, {FicMode::kConvergence, d});
      worst = std::max(worst, std::abs(div - conv) / div);
    }
  }
  return {"switch_energy", worst <= 1e-9,
          format("max relative energy jump %.3g", worst)};
}

CheckResult check_release_timing() {
  const ReleaseArrival lin = linear_release_arrival({1000.0, {}}, 1.0, 0.1);
  const double t_lin = std::numbers::pi * std::sqrt(1.0 / 2000.0);
  const BodyModel body = BodyModel::hand_default(false);
  const ReleaseArrival rot =
      rotational_release_arrival(body, Vec3::UnitY(), 1000.0, 0.1);
  const double t_rot =
      std::numbers::pi * std::sqrt(body.inertia(1, 1) / 2000.0);
  const double err = std::max(std::abs(lin.time / t_lin - 1.0),
                              std::abs(rot.time / t_rot - 1.0));
  const double speed = std::max(lin.terminal_speed / lin.peak_speed,
                                rot.terminal_speed / rot.peak_speed);
  return {"release_timing", err <= 1e-3 && speed <= 1e-6,
          format("max relative timing error %.3g, terminal/peak speed %.3g",
                 err, speed)};
}

CheckResult check_vpo_linear() {
  const VpoEquivalence eq = vpo_mu(0.1, {1000.0, {}}, 1.0);
  const bool ok = std::isfinite(eq.mu) && eq.mu > 0.0 &&
                  std::abs(eq.virtual_antagonist) <= 1e-12;
  return {"vpo_linear", ok,
          format("mu = %.6g, E_va = %.3g", eq.mu, eq.virtual_antagonist)};
}

std::vector<CheckResult> run_property_checks(std::uint64_t seed) {
  return {check_phi_equivariance(seed),
          check_pointing_consistency(seed + 1),
          check_euler_round_trip(seed + 2),
          check_rk4_order(),
          check_norm_drift(seed + 3),
          check_switch_energy(),
          check_release_timing(),
          check_vpo_linear()};
}

}  // namespace wristfic
