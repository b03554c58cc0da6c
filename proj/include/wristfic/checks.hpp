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

// Property and invariant suite behind `wristsim --check`.

#ifndef WRISTFIC_CHECKS_HPP_
#define WRISTFIC_CHECKS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wristfic/dynamics.hpp"
#include "wristfic/fic.hpp"

namespace wristfic {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Arrival of a released excursion at the goal.
struct ReleaseArrival {
  double time = 0.0;            // s
  double terminal_speed = 0.0;  // |velocity| at the arrival instant
  double peak_speed = 0.0;
};

// Locates the instant a monotone approach reaches the goal: the first sign
// change of the displacement, or else the vertex of the parabola through the
// three samples of smallest |displacement|.
ReleaseArrival find_arrival(std::span<const double> t,
                            std::span<const double> disp,
                            std::span<const double> velocity);

// Linear-coordinate release from rest at disp_max.
ReleaseArrival linear_release_arrival(const FicParams& params, double mass,
                                      double disp_max, int steps = 20000);

// Plant release from rest at angle theta_max about a body principal axis,
// gravity off, under the quaternion controller with constant stiffness.
ReleaseArrival rotational_release_arrival(const BodyModel& body,
                                          const Vec3& axis, double stiffness,
                                          double theta_max, int steps = 20000);

// Ratio of global RK4 errors at step h and h/2 on a gravity-driven tumbling
// body; close to 16 for a fourth-order method.
double rk4_error_ratio(const BodyModel& body, double h, double horizon);

CheckResult check_phi_equivariance(std::uint64_t seed, int n = 10000);
CheckResult check_pointing_consistency(std::uint64_t seed, int n = 10000);
CheckResult check_euler_round_trip(std::uint64_t seed, int n = 100000);
CheckResult check_rk4_order();
CheckResult check_norm_drift(std::uint64_t seed);
CheckResult check_switch_energy();
CheckResult check_release_timing();
CheckResult check_vpo_linear();

std::vector<CheckResult> run_property_checks(std::uint64_t seed = 1);

}  // namespace wristfic

#endif  // WRISTFIC_CHECKS_HPP_
