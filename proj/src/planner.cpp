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

#include "wristfic/planner.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wristfic {

namespace {

constexpr double kAtTarget = 1e-12;

}  // namespace

void BandParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("band mass must be positive");
  if (!(stiffness >= 0.0)) {
    throw std::invalid_argument("band stiffness must be non-negative");
  }
  if (!(a_max >= 0.0)) {
    throw std::invalid_argument("band a_max must be non-negative");
  }
}

double compute_kd(double a_max, double d0, double mass) {
  if (!(d0 > 0.0)) throw AlreadyAtTargetError("already at target");
  if (!(mass > 0.0)) throw std::invalid_argument("band mass must be positive");
  if (!(a_max >= 0.0)) throw std::invalid_argument("a_max must be non-negative");
  return mass * a_max / d0;
}

double reach_duration(const BandParams& params) {
  if (params.stiffness <= 0.0) return std::numeric_limits<double>::infinity();
  if (params.mode == BandMode::kSpring) {
    return 0.5 * std::numbers::pi * std::sqrt(params.mass / params.stiffness);
  }
  return std::numbers::pi * std::sqrt(params.mass / (2.0 * params.stiffness));
}

ElasticBand::ElasticBand(const Vec3& start, const BandParams& params,
                         double t0)
    : params_(params), target_(start), time_(t0) {
  params_.validate();
  begin_segment(t0, start, Vec3::Zero());
  begin_branch(Branch::kIdle);
}

void ElasticBand::begin_segment(double t, const Vec3& x, const Vec3& v) {
  seg_t0_ = t;
  seg_x0_ = x;
  seg_v0_ = v;
}

void ElasticBand::begin_branch(Branch branch) {
  branch_ = branch;
  arrive_after_.reset();
  center_ = target_;
  omega_ = 0.0;
  const double k = params_.stiffness;
  const double m = params_.mass;
  switch (branch) {
    case Branch::kIdle:
      return;
    case Branch::kDivergence:
      omega_ = std::sqrt(k / m);
      return;
    case Branch::kConvergence: {
      const double d = (seg_x0_ - target_).norm();
      if (d <= kAtTarget) {
        begin_segment(seg_t0_, target_, Vec3::Zero());
        branch_ = Branch::kIdle;
        return;
      }
      omega_ = std::sqrt(2.0 * k / m);
      const Vec3 u = (target_ - seg_x0_) / d;
      // Centre chosen so the approach along u ends at the target at rest.
      const double vr = seg_v0_.dot(u) / omega_;
      const double half = (d * d + vr * vr) / (2.0 * d);
      center_ = target_ - u * half;
      double angle = std::atan2(vr, half - d);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      const double s = angle / omega_;
      // Off-axis velocity keeps the particle from landing on the target; it
      // then overshoots and the divergence branch takes over.
      const Vec3 y0 = seg_x0_ - center_;
      const Vec3 x = center_ + y0 * std::cos(angle) +
                     seg_v0_ / omega_ * std::sin(angle);
      if ((x - target_).norm() <= 1e-9 + 2e-6 * half) arrive_after_ = s;
      return;
    }
    case Branch::kSpring: {
      const double d = (seg_x0_ - target_).norm();
      if (d <= kAtTarget) {
        begin_segment(seg_t0_, target_, Vec3::Zero());
        branch_ = Branch::kIdle;
        return;
      }
      omega_ = std::sqrt(k / m);
      if (omega_ == 0.0) return;
      const Vec3 u = (seg_x0_ - target_) / d;
      const double psi = std::atan2(seg_v0_.dot(u) / omega_, d);
      arrive_after_ = (0.5 * std::numbers::pi + psi) / omega_;
      return;
    }
  }
}

void ElasticBand::retarget(const Vec3& target,
                           std::optional<double> stiffness) {
  const PlanSample now = sample(time_);
  target_ = target;
  if (stiffness) {
    params_.stiffness = *stiffness;
    params_.validate();
  }
  begin_segment(time_, now.position, now.velocity);
  const Vec3 e = now.position - target;
  if (e.norm() <= kAtTarget && now.velocity.norm() <= kAtTarget) {
    begin_segment(time_, target, Vec3::Zero());
    begin_branch(Branch::kIdle);
  } else if (params_.mode == BandMode::kSpring) {
    begin_branch(Branch::kSpring);
  } else if (e.dot(now.velocity) > 0.0) {
    begin_branch(Branch::kDivergence);
  } else {
    begin_branch(Branch::kConvergence);
  }
}

PlanSample ElasticBand::sample(double t) const {
  PlanSample p;
  p.t = t;
  const double s = t - seg_t0_;
  if (branch_ == Branch::kIdle) {
    p.position = seg_x0_;
    return p;
  }
  if (arrive_after_ && s >= *arrive_after_) {
    p.position = target_;
    return p;
  }
  if (omega_ == 0.0) {
    p.position = seg_x0_ + seg_v0_ * s;
    p.velocity = seg_v0_;
    return p;
  }
  const double c = std::cos(omega_ * s);
  const double sn = std::sin(omega_ * s);
  const Vec3 y0 = seg_x0_ - center_;
  p.position = center_ + y0 * c + seg_v0_ * (sn / omega_);
  p.velocity = -y0 * (omega_ * sn) + seg_v0_ * c;
  p.acceleration = -omega_ * omega_ * (p.position - center_);
  return p;
}

std::optional<double> ElasticBand::arrival_time() const {
  if (!arrive_after_) return std::nullopt;
  return seg_t0_ + *arrive_after_;
}

void ElasticBand::advance_to(double t) {
  if (t < time_) throw std::invalid_argument("band cannot move backwards");
  if (arrive_after_ && t - seg_t0_ >= *arrive_after_) {
    begin_segment(seg_t0_ + *arrive_after_, target_, Vec3::Zero());
    begin_branch(Branch::kIdle);
    time_ = t;
    return;
  }
  const PlanSample p = sample(t);
  time_ = t;
  const Vec3 e = p.position - target_;
  const double rate = e.dot(p.velocity);
  if (branch_ == Branch::kDivergence && omega_ > 0.0 && rate <= 0.0 &&
      e.norm() > kAtTarget) {
    begin_segment(t, p.position, p.velocity);
    begin_branch(Branch::kConvergence);
  } else if (branch_ == Branch::kConvergence && !arrive_after_ && rate > 0.0) {
    begin_segment(t, p.position, p.velocity);
    begin_branch(Branch::kDivergence);
  }
}

std::vector<PlanSample> plan_reach(const Vec3& start, const Vec3& target,
                                   const BandParams& params, double dt,
                                   double horizon) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  ElasticBand band(start, params, 0.0);
  band.retarget(target);
  std::vector<PlanSample> out{band.sample(0.0)};
  if (horizon < 0.0 && !band.arrival_time()) return out;
  for (long k = 1;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (horizon >= 0.0 && t > horizon + 1e-12) break;
    band.advance_to(t);
    out.push_back(band.sample(t));
    if (horizon < 0.0 && band.arrived()) break;
  }
  return out;
}

}  // namespace wristfic
