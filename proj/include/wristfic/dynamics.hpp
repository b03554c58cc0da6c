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

// Box-shaped hand on an ideal spherical joint, and its integrators.
//
// Body axes: x along H (the pointer), y along L, z along T. The joint is the
// body origin; the centre of mass sits at com_offset.

#ifndef WRISTFIC_DYNAMICS_HPP_
#define WRISTFIC_DYNAMICS_HPP_

#include <functional>
#include <stdexcept>

#include "wristfic/rotations.hpp"

namespace wristfic {

// Inertia about the joint: central box inertia plus the parallel-axis term.
Mat3 inertia_box(double mass, double h, double l, double t,
                 const Vec3& com_offset);

struct BodyModel {
  double mass = 1.0;
  double h = 0.1;
  double l = 0.08;
  double t = 0.02;
  Vec3 com_offset{0.05, 0.0, 0.0};
  Vec3 gravity{0.0, 0.0, -9.81};
  Mat3 inertia = Mat3::Identity();
  Mat3 inertia_inv = Mat3::Identity();

  // Validated model with the inertia computed from the box geometry.
  static BodyModel box(double mass, double h, double l, double t,
                       const Vec3& com_offset, const Vec3& gravity);
  static BodyModel hand_default(bool with_gravity = true);
};

struct WristState {
  Quat q;                      // body -> world
  Vec3 omega = Vec3::Zero();   // body frame, rad/s
  double t = 0.0;              // s
};

struct StateDerivative {
  Quat q_dot{0.0, Vec3::Zero()};
  Vec3 omega_dot = Vec3::Zero();
};

// Body-frame gravity moment about the joint.
Vec3 gravity_torque(const Quat& q, const BodyModel& body);

// Euler rigid-body equations; gravity is added internally.
StateDerivative dynamics_rhs(const WristState& state, const Vec3& tau_applied,
                             const BodyModel& body);

// Applied body-frame torque as a function of time and state.
using TorqueFn = std::function<Vec3(double, const WristState&)>;

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  WristState state;
  double norm_drift = 0.0;  // | |q| - 1 | before renormalisation
};

// Classic fourth-order Runge-Kutta step; q renormalised afterwards.
StepResult rk4_step(const WristState& state, const TorqueFn& torque,
                    const BodyModel& body, double h);

// Dormand-Prince 5(4) with per-component mixed tolerance and elementary step
// control. Steps never cross t_end; on_accept runs after every accepted step.
class AdaptiveIntegrator {
 public:
  explicit AdaptiveIntegrator(double rel_tol = 1e-8, double abs_tol = -1.0);

  WristState advance(const WristState& state, const TorqueFn& torque,
                     const BodyModel& body, double t_end,
                     const std::function<void(const WristState&)>& on_accept =
                         nullptr);

  double rel_tol() const { return rel_tol_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }

  static constexpr double kMinStep = 1e-9;

 private:
  double rel_tol_;
  double abs_tol_;
  double h_ = 1e-4;
  long accepted_ = 0;
  long rejected_ = 0;
};

// Kinetic energy 0.5 w^T I w.
double kinetic_energy(const WristState& state, const BodyModel& body);
// World-frame angular momentum.
Vec3 angular_momentum(const WristState& state, const BodyModel& body);

}  // namespace wristfic

#endif  // WRISTFIC_DYNAMICS_HPP_
