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

#include "wristfic/fic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wristfic {

namespace {

constexpr double kMinTorqueAngle = 1e-12;
constexpr double kMinDampingIntegral = 1e-12;
constexpr int kProfileQuadratureIntervals = 2000;  // even, Simpson

}  // namespace

double FicParams::effort(double disp) const {
  return profile ? profile(disp) : stiffness * disp;
}

double FicParams::profile_energy(double disp) const {
  if (!profile) return 0.5 * stiffness * disp * disp;
  if (disp <= 0.0) return 0.0;
  const int n = kProfileQuadratureIntervals;
  const double h = disp / n;
  double sum = profile(0.0) + profile(disp);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * profile(i * h);
  return sum * h / 3.0;
}

double FicParams::secant_stiffness(double disp) const {
  if (disp <= 0.0) return stiffness;
  return effort(disp) / disp;
}

void FicParams::validate() const {
  if (!(stiffness > 0.0)) {
    throw std::invalid_argument("FIC stiffness must be positive");
  }
  if (profile && profile(0.0) != 0.0) {
    throw std::invalid_argument("FIC effort profile must vanish at the goal");
  }
}

FicPhase update_phase(const FicPhase& phase, double disp, double disp_rate,
                      double deadband) {
  if (phase.mode == FicMode::kDivergence) {
    if (disp_rate > 0.0) return {FicMode::kDivergence, std::max(phase.disp_max, disp)};
    // Resting at the goal is not a turning point.
    if (disp <= deadband) return {FicMode::kDivergence, disp};
    // Turning point. Latching the current displacement keeps the effort
    // continuous across the switch.
    return {FicMode::kConvergence, disp};
  }
  if (disp <= deadband) return {FicMode::kDivergence, 0.0};
  // Pushed outward again: a new excursion starts from here.
  if (disp > phase.disp_max || disp_rate > 0.0) {
    return {FicMode::kDivergence, disp};
  }
  return phase;
}

double fic_effort(double disp, const FicParams& params, const FicPhase& phase) {
  if (phase.mode == FicMode::kDivergence) return params.effort(disp);
  if (phase.disp_max <= 0.0) return 0.0;
  const double k_conv = 2.0 * params.effort(phase.disp_max) / phase.disp_max;
  return k_conv * (disp - 0.5 * phase.disp_max);
}

double fic_potential_energy(double disp, const FicParams& params,
                            const FicPhase& phase) {
  if (phase.mode == FicMode::kDivergence) return params.profile_energy(disp);
  const double d_max = phase.disp_max;
  if (d_max <= 0.0) return 0.0;
  const double k_conv = 2.0 * params.effort(d_max) / d_max;
  const double mid = 0.5 * d_max;
  return 0.5 * k_conv * (disp - mid) * (disp - mid) +
         params.profile_energy(d_max) - 0.5 * k_conv * mid * mid;
}

Quat error_rotation(const Quat& q, const Quat& q_d) {
  return (q_d.normalized() * q.normalized().conjugate()).canonical();
}

FicTorque fic_torque_quat(const Quat& q, const Quat& q_d, double stiffness,
                          const FicPhase& phase, TorqueAxis axis) {
  const Quat err = error_rotation(q, q_d);
  const double vnorm = err.v.norm();
  const double theta = 2.0 * std::atan2(vnorm, err.s);
  FicTorque out;
  out.angle = theta;
  if (theta < kMinTorqueAngle) return out;

  double magnitude = 0.0;
  if (phase.mode == FicMode::kDivergence) {
    magnitude = stiffness * theta;
  } else if (phase.disp_max > 0.0) {
    magnitude = 2.0 * stiffness * (theta - 0.5 * phase.disp_max);
  }
  // err is canonical, so sign(err.s) = +1.
  out.torque = axis == TorqueAxis::kUnit ? Vec3(err.v * (magnitude / vnorm))
                                         : Vec3(err.v * magnitude);
  return out;
}

const FicPhase& QuatFic::commit(const Quat& q, const Quat& q_d, double dt) {
  const double theta = error_angle(q, q_d);
  phase_ = update_phase(phase_, theta, (theta - prev_angle_) / dt);
  prev_angle_ = theta;
  return phase_;
}

void QuatFic::reset(const Quat& q, const Quat& q_d) {
  phase_ = FicPhase{};
  prev_angle_ = error_angle(q, q_d);
}

std::vector<AutonomousSample> simulate_release(const FicParams& params,
                                               double mass, double disp_max,
                                               int steps) {
  const double k_conv = 2.0 * params.secant_stiffness(disp_max);
  const double period_half = std::numbers::pi * std::sqrt(mass / k_conv);
  const double h = period_half / steps;

  FicPhase phase{FicMode::kConvergence, disp_max};
  // Signed coordinate so that a numerical overshoot past the goal is visible.
  auto accel = [&](double x) {
    const double f = fic_effort(std::abs(x), params, phase);
    return -(x >= 0.0 ? 1.0 : -1.0) * f / mass;
  };

  std::vector<AutonomousSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 2);
  double x = disp_max, v = 0.0, t = 0.0;
  out.push_back({t, x, v, phase});
  for (int i = 0; i < 2 * steps; ++i) {
    const double k1x = v, k1v = accel(x);
    const double k2x = v + 0.5 * h * k1v, k2v = accel(x + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v, k3v = accel(x + 0.5 * h * k2x);
    const double k4x = v + h * k3v, k4v = accel(x + h * k3x);
    const double x_new = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const double v_new = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double rate = (std::abs(x_new) - std::abs(x)) / h;
    x = x_new;
    v = v_new;
    t += h;
    phase = update_phase(phase, std::abs(x), rate);
    out.push_back({t, x, v, phase});
    if (phase.mode != FicMode::kConvergence || v >= 0.0) break;
  }
  return out;
}

VpoEquivalence vpo_mu(double disp_max, const FicParams& params, double mass,
                      int steps) {
  if (!(disp_max > 0.0)) throw std::invalid_argument("disp_max must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  params.validate();

  VpoEquivalence out;
  const double k = params.secant_stiffness(disp_max);
  out.omega_n = std::sqrt(k / (2.0 * mass));
  out.virtual_antagonist =
      params.profile_energy(disp_max) - 0.5 * params.effort(disp_max) * disp_max;
  out.numerator = mass * out.omega_n * out.omega_n * disp_max * disp_max +
                  k * disp_max * disp_max + out.virtual_antagonist;

  const auto traj = simulate_release(params, mass, disp_max, steps);
  double integral = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const auto& a = traj[i - 1];
    const auto& b = traj[i];
    const double fa = (1.0 - a.disp * a.disp) * std::abs(a.velocity);
    const double fb = (1.0 - b.disp * b.disp) * std::abs(b.velocity);
    integral += 0.5 * (fa + fb) * std::abs(b.disp - a.disp);
  }
  out.damping_integral = integral;
  if (!(std::abs(integral) > kMinDampingIntegral)) {
    throw DegenerateIntegralError("degenerate Lienard damping integral");
  }
  out.mu = out.numerator / (2.0 * integral);
  return out;
}

}  // namespace wristfic
