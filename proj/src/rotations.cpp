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

#include "wristfic/rotations.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wristfic {

namespace {

constexpr double kMinPointingDistance = 1e-9;
constexpr double kGimbalMargin = 1e-6;

}  // namespace

Quat Quat::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n == 0.0) return identity();
  return {std::cos(0.5 * angle), axis * (std::sin(0.5 * angle) / n)};
}

double Quat::norm() const { return std::sqrt(s * s + v.squaredNorm()); }

Quat Quat::normalized() const {
  const double n = norm();
  return {s / n, v / n};
}

Quat Quat::inverse() const {
  const double n2 = s * s + v.squaredNorm();
  return {s / n2, -v / n2};
}

Quat Quat::canonical() const { return s < 0.0 ? -*this : *this; }

double Quat::angle() const { return 2.0 * std::atan2(v.norm(), std::abs(s)); }

Quat quat_mul(const Quat& a, const Quat& b) {
  return {a.s * b.s - a.v.dot(b.v), a.s * b.v + b.s * a.v + a.v.cross(b.v)};
}

Vec3 rotate_vec(const Quat& q, const Vec3& u) {
  const Vec3 t = 2.0 * q.v.cross(u);
  return u + q.s * t + q.v.cross(t);
}

Vec3 rotate_vec_inverse(const Quat& q, const Vec3& u) {
  return rotate_vec(q.conjugate(), u);
}

double relative_angle(const Quat& a, const Quat& b) {
  return (a.conjugate() * b).angle();
}

Quat swing_to(const Vec3& r) {
  const double c = r.x();
  if (1.0 + c <= std::numeric_limits<double>::epsilon()) {
    // Any axis orthogonal to r works; z keeps the result deterministic.
    return {0.0, 0.0, 0.0, 1.0};
  }
  return Quat{1.0 + c, Vec3::UnitX().cross(r)}.normalized();
}

Quat project_to_sphere(const Vec3& x, const Vec3& x0, double phi,
                       TorsionOrder order) {
  const Vec3 d = x - x0;
  const double dist = d.norm();
  if (!(dist > kMinPointingDistance)) {
    throw GeometryError("undefined pointing direction");
  }
  const Quat swing = swing_to(d / dist);
  const Quat roll{std::cos(0.5 * phi), std::sin(0.5 * phi), 0.0, 0.0};
  const Quat q =
      order == TorsionOrder::kPointerTwist ? swing * roll : roll * swing;
  return q.normalized().canonical();
}

EulerXYZ euler_xyz_from_quat(const Quat& q_in) {
  const Quat q = q_in.normalized();
  const double s = q.s, x = q.v.x(), y = q.v.y(), z = q.v.z();
  const double r00 = 1.0 - 2.0 * (y * y + z * z);
  const double r01 = 2.0 * (x * y - s * z);
  const double r02 = 2.0 * (x * z + s * y);
  const double r12 = 2.0 * (y * z - s * x);
  const double r22 = 1.0 - 2.0 * (x * x + y * y);

  const double cos_y = std::hypot(r00, r01);
  if (cos_y < std::sin(kGimbalMargin)) {
    std::ostringstream os;
    os << "gimbal lock: q = (" << q.s << ", " << x << ", " << y << ", " << z
       << ")";
    throw GimbalLockError(os.str(), q_in);
  }
  return {std::atan2(-r12, r22), std::atan2(r02, cos_y),
          std::atan2(-r01, r00)};
}

Quat quat_from_euler_xyz(const EulerXYZ& e) {
  return Quat::from_axis_angle(Vec3::UnitX(), e.x) *
         Quat::from_axis_angle(Vec3::UnitY(), e.y) *
         Quat::from_axis_angle(Vec3::UnitZ(), e.z);
}

double torsion_about_pointer(const Quat& q_in) {
  const Quat q = q_in.normalized();
  const Quat twist = (swing_to(pointer_axis(q).normalized()).conjugate() * q)
                         .canonical();
  return 2.0 * std::atan2(twist.v.x(), twist.s);
}

}  // namespace wristfic
