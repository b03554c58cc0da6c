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

// Quaternion algebra, spherical projection of planar targets, XYZ Euler
// decomposition and torsion about the pointer axis.
//
// The pointer is the body x-axis. A pose q maps body vectors to the world
// frame, so the pointing direction of q is rotate_vec(q, x).

#ifndef WRISTFIC_ROTATIONS_HPP_
#define WRISTFIC_ROTATIONS_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wristfic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Hamilton quaternion (s, v). Not normalized implicitly.
struct Quat {
  double s = 1.0;
  Vec3 v = Vec3::Zero();

  Quat() = default;
  Quat(double s_, const Vec3& v_) : s(s_), v(v_) {}
  Quat(double s_, double x, double y, double z) : s(s_), v(x, y, z) {}

  static Quat identity() { return {}; }
  // Rotation of `angle` rad about `axis`; axis need not be unit.
  static Quat from_axis_angle(const Vec3& axis, double angle);

  double norm() const;
  Quat normalized() const;
  Quat conjugate() const { return {s, -v}; }
  Quat inverse() const;
  // Representative with s >= 0.
  Quat canonical() const;
  // Rotation angle in [0, pi], sign-insensitive.
  double angle() const;

  Quat operator-() const { return {-s, -v}; }
};

Quat quat_mul(const Quat& a, const Quat& b);
inline Quat operator*(const Quat& a, const Quat& b) { return quat_mul(a, b); }

Vec3 rotate_vec(const Quat& q, const Vec3& u);
// Applies q^-1 (world to body for a body->world pose).
Vec3 rotate_vec_inverse(const Quat& q, const Vec3& u);
// Angle of the relative rotation a^-1 b, in [0, pi].
double relative_angle(const Quat& a, const Quat& b);

inline Vec3 pointer_axis(const Quat& q) { return rotate_vec(q, Vec3::UnitX()); }

class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Where the torsion factor is composed in the projection.
enum class TorsionOrder {
  kPointerTwist,      // twist about the pointer axis r (default)
  kGlobalPremultiply  // roll quaternion about the world x-axis on the left
};

// Minimal rotation carrying the body x-axis onto unit vector r. For r = -x
// the rotation is pi about z.
Quat swing_to(const Vec3& r);

// Orientation that points the body x-axis from x0 toward x with torsion phi
// about the pointer. Output is unit and has s >= 0. Throws GeometryError when
// |x - x0| <= 1e-9.
Quat project_to_sphere(const Vec3& x, const Vec3& x0, double phi,
                       TorsionOrder order = TorsionOrder::kPointerTwist);

// Intrinsic X-Y-Z angles: q = qx(x) * qy(y) * qz(z).
struct EulerXYZ {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

class GimbalLockError : public std::domain_error {
 public:
  GimbalLockError(const std::string& what, const Quat& q)
      : std::domain_error(what), quat(q) {}
  Quat quat;
};

// Throws GimbalLockError within 1e-6 rad of y = +-pi/2.
EulerXYZ euler_xyz_from_quat(const Quat& q);
Quat quat_from_euler_xyz(const EulerXYZ& e);

// Twist of q about its own pointer axis, relative to the minimal (swing)
// rotation that produces the same pointing direction. Range (-pi, pi].
double torsion_about_pointer(const Quat& q);

}  // namespace wristfic

#endif  // WRISTFIC_ROTATIONS_HPP_
