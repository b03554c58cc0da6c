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

// Fractal impedance controller.
//
// While the displacement from the goal grows (divergence) the effort follows
// the stiffness profile F(d). Once it turns back (convergence) the effort is a
// spring of stiffness 2 F(d_max) / d_max centred on d_max / 2, which brings a
// free inertia back to the goal at rest after half a period. The largest
// displacement of the current excursion is the controller's only memory.

#ifndef WRISTFIC_FIC_HPP_
#define WRISTFIC_FIC_HPP_

#include <functional>
#include <stdexcept>
#include <vector>

#include "wristfic/rotations.hpp"

namespace wristfic {

enum class FicMode { kDivergence, kConvergence };

struct FicPhase {
  FicMode mode = FicMode::kDivergence;
  double disp_max = 0.0;

  bool operator==(const FicPhase&) const = default;
};

// Displacements at or below this are treated as "at the goal".
inline constexpr double kFicDeadband = 1e-6;

// Stiffness K and effort profile F(d). An empty profile means F(d) = K d.
struct FicParams {
  double stiffness = 0.0;
  std::function<double(double)> profile;

  double effort(double disp) const;
  // Integral of F from 0 to disp.
  double profile_energy(double disp) const;
  // F(d) / d, or K at d = 0.
  double secant_stiffness(double disp) const;
  void validate() const;  // throws std::invalid_argument
};

FicPhase update_phase(const FicPhase& phase, double disp, double disp_rate,
                      double deadband = kFicDeadband);

// Restoring effort magnitude for a displacement (positive pulls toward the
// goal). Negative values occur in the first half of a convergence.
double fic_effort(double disp, const FicParams& params, const FicPhase& phase);

// Linear-profile shorthand.
inline double fic_force_linear(double disp, const FicParams& params,
                               const FicPhase& phase) {
  return fic_effort(disp, params, phase);
}

// Energy stored by the active branch. Equal on both branches at the
// divergence/convergence switch, so total energy of a free inertia is constant
// within an excursion and drops only when the controller resets.
double fic_potential_energy(double disp, const FicParams& params,
                            const FicPhase& phase);

enum class TorqueAxis {
  kUnit,  // torque along the unit error axis, |tau| = |tau_cq|
  kRaw    // torque along the raw vector part of the error quaternion
};

struct FicTorque {
  Vec3 torque = Vec3::Zero();  // world frame, N m
  double angle = 0.0;          // error angle, rad
};

// Error rotation (q_d q^-1), hemisphere-canonical.
Quat error_rotation(const Quat& q, const Quat& q_d);
inline double error_angle(const Quat& q, const Quat& q_d) {
  return error_rotation(q, q_d).angle();
}

// Quaternion torque law with constant stiffness K. Zero below 1e-12 rad.
FicTorque fic_torque_quat(const Quat& q, const Quat& q_d, double stiffness,
                          const FicPhase& phase,
                          TorqueAxis axis = TorqueAxis::kUnit);

// Stateful rotational controller. The phase is frozen between commits; the
// displacement rate is the backward difference of the error angle over the
// committed step.
class QuatFic {
 public:
  explicit QuatFic(TorqueAxis axis = TorqueAxis::kUnit) : axis_(axis) {}

  FicTorque command(const Quat& q, const Quat& q_d, double stiffness) const {
    return fic_torque_quat(q, q_d, stiffness, phase_, axis_);
  }
  // Returns the updated phase.
  const FicPhase& commit(const Quat& q, const Quat& q_d, double dt);
  // Fresh excursion, used when a new target is commanded.
  void reset(const Quat& q, const Quat& q_d);

  const FicPhase& phase() const { return phase_; }
  void set_phase(const FicPhase& phase) { phase_ = phase; }
  TorqueAxis axis() const { return axis_; }

 private:
  TorqueAxis axis_;
  FicPhase phase_;
  double prev_angle_ = 0.0;
};

// Point mass under the linear-coordinate controller, sampled at a fixed step.
struct AutonomousSample {
  double t = 0.0;
  double disp = 0.0;
  double velocity = 0.0;  // d(disp)/dt
  FicPhase phase;
};

// Releases mass `mass` at rest at `disp_max` in the convergence branch and
// integrates (RK4, `steps` per nominal half period) until it turns at the goal.
std::vector<AutonomousSample> simulate_release(const FicParams& params,
                                               double mass, double disp_max,
                                               int steps = 20000);

class DegenerateIntegralError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Equivalent van der Pol / Lienard damping for one excursion.
struct VpoEquivalence {
  double mu = 0.0;                // N s / m
  double omega_n = 0.0;           // sqrt(K(d_max) / (2 M))
  double numerator = 0.0;         // M wn^2 d^2 + K d^2 + E_va
  double damping_integral = 0.0;  // int_0^dmax (1 - d^2) |v| dd
  double virtual_antagonist = 0.0;  // E_va
};

VpoEquivalence vpo_mu(double disp_max, const FicParams& params, double mass,
                      int steps = 20000);

}  // namespace wristfic

#endif  // WRISTFIC_FIC_HPP_
