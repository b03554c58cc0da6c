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

#include "wristfic/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Cholesky>

namespace wristfic {

namespace {

using Vec7 = Eigen::Matrix<double, 7, 1>;

Vec7 pack(const WristState& s) {
  Vec7 y;
  y << s.q.s, s.q.v, s.omega;
  return y;
}

WristState unpack(const Vec7& y, double t) {
  return {Quat{y(0), y.segment<3>(1)}, y.segment<3>(4), t};
}

Vec7 derivative(const WristState& s, const Vec3& tau, const BodyModel& body) {
  const StateDerivative d = dynamics_rhs(s, tau, body);
  Vec7 out;
  out << d.q_dot.s, d.q_dot.v, d.omega_dot;
  return out;
}

}  // namespace

Mat3 inertia_box(double mass, double h, double l, double t,
                 const Vec3& com_offset) {
  if (!(mass > 0.0) || !(h > 0.0) || !(l > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("box mass and dimensions must be positive");
  }
  Mat3 central = Mat3::Zero();
  central(0, 0) = mass / 12.0 * (l * l + t * t);
  central(1, 1) = mass / 12.0 * (h * h + t * t);
  central(2, 2) = mass / 12.0 * (h * h + l * l);
  const Vec3& d = com_offset;
  return central +
         mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
}

BodyModel BodyModel::box(double mass, double h, double l, double t,
                         const Vec3& com_offset, const Vec3& gravity) {
  BodyModel b;
  b.mass = mass;
  b.h = h;
  b.l = l;
  b.t = t;
  b.com_offset = com_offset;
  b.gravity = gravity;
  b.inertia = inertia_box(mass, h, l, t, com_offset);
  Eigen::LLT<Mat3> llt(b.inertia);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("joint inertia is not positive definite");
  }
  b.inertia_inv = llt.solve(Mat3::Identity());
  return b;
}

BodyModel BodyModel::hand_default(bool with_gravity) {
  return box(1.0, 0.1, 0.08, 0.02, Vec3(0.05, 0.0, 0.0),
             with_gravity ? Vec3(0.0, 0.0, -9.81) : Vec3::Zero());
}

Vec3 gravity_torque(const Quat& q, const BodyModel& body) {
  if (body.gravity.isZero(0.0)) return Vec3::Zero();
  return body.com_offset.cross(body.mass * rotate_vec_inverse(q, body.gravity));
}

StateDerivative dynamics_rhs(const WristState& state, const Vec3& tau_applied,
                             const BodyModel& body) {
  const Vec3& w = state.omega;
  const Vec3 tau =
      tau_applied + gravity_torque(state.q, body) - w.cross(body.inertia * w);
  StateDerivative d;
  d.omega_dot = body.inertia_inv * tau;
  d.q_dot = state.q * Quat{0.0, 0.5 * w};
  return d;
}

StepResult rk4_step(const WristState& state, const TorqueFn& torque,
                    const BodyModel& body, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  const double t = state.t;
  auto eval = [&](const Vec7& y, double ti) {
    const WristState s = unpack(y, ti);
    return derivative(s, torque(ti, s), body);
  };
  const Vec7 y0 = pack(state);
  const Vec7 k1 = eval(y0, t);
  const Vec7 k2 = eval(y0 + 0.5 * h * k1, t + 0.5 * h);
  const Vec7 k3 = eval(y0 + 0.5 * h * k2, t + 0.5 * h);
  const Vec7 k4 = eval(y0 + h * k3, t + h);
  const Vec7 y1 = y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  StepResult out;
  out.state = unpack(y1, t + h);
  out.norm_drift = std::abs(out.state.q.norm() - 1.0);
  out.state.q = out.state.q.normalized();
  return out;
}

AdaptiveIntegrator::AdaptiveIntegrator(double rel_tol, double abs_tol)
    : rel_tol_(rel_tol), abs_tol_(abs_tol < 0.0 ? rel_tol : abs_tol) {
  if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3)) {
    throw std::invalid_argument("rel_tol must lie in [1e-12, 1e-3]");
  }
}

WristState AdaptiveIntegrator::advance(
    const WristState& state, const TorqueFn& torque, const BodyModel& body,
    double t_end, const std::function<void(const WristState&)>& on_accept) {
  // Dormand-Prince tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto eval = [&](const Vec7& y, double ti) {
    const WristState s = unpack(y, ti);
    return derivative(s, torque(ti, s), body);
  };

  double t = state.t;
  Vec7 y = pack(state);
  Vec7 k1 = eval(y, t);
  while (t < t_end) {
    const double remaining = t_end - t;
    if (remaining <= 1e-13 * std::max(1.0, std::abs(t_end))) break;
    const bool clipped = h_ >= remaining;
    const double h = clipped ? remaining : h_;

    const Vec7 k2 = eval(y + h * a21 * k1, t + c2 * h);
    const Vec7 k3 = eval(y + h * (a31 * k1 + a32 * k2), t + c3 * h);
    const Vec7 k4 = eval(y + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h);
    const Vec7 k5 =
        eval(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h);
    const Vec7 k6 = eval(
        y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h);
    const Vec7 y_new =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec7 k7 = eval(y_new, t + h);
    const Vec7 err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
      const double sc =
          abs_tol_ + rel_tol_ * std::max(std::abs(y(i)), std::abs(y_new(i)));
      sum += (err(i) / sc) * (err(i) / sc);
    }
    const double err_norm = std::sqrt(sum / 7.0);
    // A non-finite estimate is rejected with the smallest step factor.
    double factor = 0.2;
    if (err_norm == 0.0) {
      factor = 5.0;
    } else if (std::isfinite(err_norm)) {
      factor = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    }

    if (err_norm <= 1.0) {
      t = clipped ? t_end : t + h;
      y = y_new;
      const double n = y.head<4>().norm();
      y.head<4>() /= n;
      ++accepted_;
      if (on_accept) on_accept(unpack(y, t));
      // The callback may change the controller (phase switches), so the
      // first-same-as-last derivative cannot be reused.
      k1 = eval(y, t);
      if (!clipped) h_ = h * factor;
    } else {
      ++rejected_;
      h_ = h * factor;
      if (h_ < kMinStep) {
        throw IntegrationError("stiff dynamics, integration failed");
      }
    }
  }
  return unpack(y, t_end);
}

double kinetic_energy(const WristState& state, const BodyModel& body) {
  return 0.5 * state.omega.dot(body.inertia * state.omega);
}

Vec3 angular_momentum(const WristState& state, const BodyModel& body) {
  return rotate_vec(state.q, body.inertia * state.omega);
}

}  // namespace wristfic
