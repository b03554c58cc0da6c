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

// Elastic band reference generator.
//
// The reference X_d is a particle of mass M_d attracted to the target X_t by a
// linear fractal impedance field of stiffness K_d. Released at rest it stays
// in the convergence branch for the whole reach: a half cycle of a spring
// of stiffness 2 K_d centred on the midpoint, with a bell-shaped speed
// profile and arrival at rest after pi * sqrt(M_d / (2 K_d)).
//
// Each branch is a linear spring about a fixed centre, so every segment is
// propagated in closed form; sampling is exact and does not depend on how
// often the band is advanced.

#ifndef WRISTFIC_PLANNER_HPP_
#define WRISTFIC_PLANNER_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include "wristfic/rotations.hpp"

namespace wristfic {

enum class BandMode {
  kFic,    // convergence branch, arrives at rest
  kSpring  // plain spring, clamped when it first reaches the target
};

struct BandParams {
  double stiffness = 32.0;  // K_d, N/m
  double mass = 1.0;        // M_d, kg
  double a_max = 3.2;       // m/s^2
  BandMode mode = BandMode::kFic;

  void validate() const;  // throws std::invalid_argument
};

class AlreadyAtTargetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Band stiffness whose reach from rest at distance d0 peaks at a_max:
// K_d = M_d a_max / d0.
double compute_kd(double a_max, double d0, double mass);

// Duration of an uninterrupted reach from rest.
double reach_duration(const BandParams& params);

struct PlanSample {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

class ElasticBand {
 public:
  ElasticBand(const Vec3& start, const BandParams& params, double t0 = 0.0);

  // Commands a new target from the current committed state. Position and
  // velocity carry over. An optional new stiffness applies from now on.
  void retarget(const Vec3& target, std::optional<double> stiffness = {});

  // State at t >= time(); does not modify the band.
  PlanSample sample(double t) const;
  // Commits the state at t and handles branch switches.
  void advance_to(double t);

  bool arrived() const { return branch_ == Branch::kIdle; }
  // Absolute time the current segment reaches the target, if it will.
  std::optional<double> arrival_time() const;

  double time() const { return time_; }
  const Vec3& target() const { return target_; }
  const BandParams& params() const { return params_; }

 private:
  enum class Branch { kIdle, kDivergence, kConvergence, kSpring };

  void begin_segment(double t, const Vec3& x, const Vec3& v);
  void begin_branch(Branch branch);

  BandParams params_;
  Vec3 target_;
  double time_;

  Branch branch_ = Branch::kIdle;
  double seg_t0_ = 0.0;
  Vec3 seg_x0_ = Vec3::Zero();
  Vec3 seg_v0_ = Vec3::Zero();
  Vec3 center_ = Vec3::Zero();
  double omega_ = 0.0;
  std::optional<double> arrive_after_;  // relative to seg_t0_
};

// Samples one reach from rest at `start` every dt, starting at t = 0. With
// horizon < 0 sampling stops at the first sample on the target; a band that
// never moves yields the single initial sample.
std::vector<PlanSample> plan_reach(const Vec3& start, const Vec3& target,
                                   const BandParams& params, double dt,
                                   double horizon = -1.0);

}  // namespace wristfic

#endif  // WRISTFIC_PLANNER_HPP_
