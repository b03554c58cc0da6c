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


#include "wristfic/experiments.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace wristfic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

TEST(ClockTaskTest, TargetsOnCircle) {
  const ClockTask task;
  ASSERT_EQ(task.targets().size(), 8u);
  for (const Vec3& t : task.targets()) {
    EXPECT_EQ(t.x(), 0.30);
    EXPECT_NEAR(std::hypot(t.y(), t.z()), 0.10, 1e-12);
  }
  EXPECT_NEAR((task.target(0) - Vec3(0.3, 0.0, 0.1)).norm(), 0.0, 1e-12);
  // Counter-clockwise seen from the joint: the second target is up-left.
  EXPECT_NEAR((task.target(2) - Vec3(0.3, -0.1, 0.0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((task.target(1) - task.target(0)).norm(),
              2 * 0.1 * std::sin(kPi / 8), 1e-12);
  EXPECT_EQ(task.center(), Vec3(0.3, 0.0, 0.0));
}

TEST(ClockTaskTest, Validation) {
  ClockTask t;
  t.radius = 0.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = ClockTask{};
  t.n_targets = 0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = ClockTask{};
  t.dwell = -1.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

TEST(PiecewiseConstantTest, RightContinuous) {
  const PiecewiseConstant k({{0.0, 1.0}, {0.5, 2.0}, {1.0, 3.0}});
  EXPECT_EQ(k.at(-1.0), 1.0);
  EXPECT_EQ(k.at(0.4999), 1.0);
  EXPECT_EQ(k.at(0.5), 2.0);
  EXPECT_EQ(k.at(7.0), 3.0);
  EXPECT_EQ(k.min(), 1.0);
  EXPECT_EQ(k.max(), 3.0);
  EXPECT_EQ(PiecewiseConstant(4.0).at(100.0), 4.0);
  EXPECT_THROW(PiecewiseConstant({{0.0, 1.0}, {0.0, 2.0}}), std::invalid_argument);
  EXPECT_THROW(PiecewiseConstant(std::vector<std::pair<double, double>>{}),
               std::invalid_argument);
}

TEST(ParamScheduleTest, Validation) {
  const ClockTask task;
  ParamSchedule s;
  s.targets = {0, 7};
  EXPECT_NO_THROW(s.validate(task));
  s.targets = {8};
  EXPECT_THROW(s.validate(task), std::invalid_argument);
  s.targets = {};
  s.stiffness = PiecewiseConstant({{0.0, 100.0}, {1.0, 0.0}});
  EXPECT_THROW(s.validate(task), std::invalid_argument);
}

TEST(PointerIntersectionTest, Values) {
  EXPECT_NEAR((pointer_intersection(Quat::identity(), 0.3) - Vec3(0.3, 0, 0)).norm(),
              0.0, 1e-15);
  for (double phi : {0.0, -25 * kDeg, 1.0}) {
    const Vec3 x(0.3, 0.0, 0.1);
    EXPECT_NEAR((pointer_intersection(project_to_sphere(x, Vec3::Zero(), phi), 0.3) - x)
                    .norm(),
                0.0, 1e-12);
  }
  const Vec3 o(0.01, 0.02, 0.0), x(0.3, -0.05, 0.07);
  EXPECT_NEAR((pointer_intersection(project_to_sphere(x, o, 0.2), 0.3, o) - x).norm(),
              0.0, 1e-12);
  const Quat sideways = Quat::from_axis_angle(Vec3::UnitZ(), 0.5 * kPi);
  try {
    pointer_intersection(sideways, 0.3);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_STREQ(e.what(), "pointer does not intersect target plane");
  }
}

TEST(PointerVelocityTest, MatchesFiniteDifference) {
  const Quat q = project_to_sphere({0.3, 0.04, -0.06}, Vec3::Zero(), 0.3);
  const Vec3 w(0.5, -1.2, 2.0);
  const double h = 1e-7;
  const Quat q2 = (q * Quat::from_axis_angle(w, w.norm() * h)).normalized();
  const Vec3 fd = (pointer_intersection(q2, 0.3) - pointer_intersection(q, 0.3)) / h;
  EXPECT_NEAR((pointer_velocity(q, w, 0.3) - fd).norm(), 0.0, 1e-6);
}

TrialSample Sample(double t, const Vec3& x, const Vec3& x_d, const Vec3& tau) {
  TrialSample s;
  s.t = t;
  s.x = x;
  s.x_d = x_d;
  s.tau_c = tau;
  s.target = x_d;
  return s;
}

TEST(MetricsTest, PerfectTrackingAndZeroEffort) {
  Trajectory tr;
  for (int i = 0; i < 10; ++i) {
    tr.samples.push_back(Sample(i * 1e-3, Vec3(0.3, 0.01 * i, 0), Vec3(0.3, 0.01 * i, 0),
                                Vec3::Zero()));
  }
  const TrialMetrics m = compute_metrics(tr);
  EXPECT_EQ(m.rmse_y, 0.0);
  EXPECT_EQ(m.rmse_z, 0.0);
  EXPECT_EQ(m.effort_mean, 0.0);
  EXPECT_EQ(m.effort_std, 0.0);
}

TEST(MetricsTest, ConstantOffsetAndEffortMoments) {
  Trajectory tr;
  const double mags[] = {1.0, 2.0, 3.0, 4.0};
  for (int i = 0; i < 4; ++i) {
    tr.samples.push_back(Sample(i * 1e-3, Vec3(0.3, 0.0, 0.002 + 0.01 * i),
                                Vec3(0.3, 0.0, 0.01 * i), Vec3(0.0, mags[i], 0.0)));
  }
  const TrialMetrics m = compute_metrics(tr);
  EXPECT_NEAR(m.rmse_z, 0.002, 1e-17);
  EXPECT_EQ(m.rmse_y, 0.0);
  EXPECT_DOUBLE_EQ(m.effort_mean, 2.5);
  EXPECT_DOUBLE_EQ(m.effort_std, std::sqrt(1.25));  // population moments
  EXPECT_NEAR(m.rmse_dwell_z, 0.002, 1e-17);
  EXPECT_THROW(compute_metrics(Trajectory{}), std::invalid_argument);
}

Trajectory FromPoses(const std::vector<Quat>& poses) {
  Trajectory tr;
  for (const Quat& q : poses) {
    TrialSample s;
    s.q = q;
    s.q_d = q;
    tr.samples.push_back(s);
  }
  return tr;
}

TEST(ListingTest, IdentityTrajectory) {
  const ListingSurface s =
      extract_listing(FromPoses(std::vector<Quat>(5, Quat::identity())));
  ASSERT_EQ(s.points.size(), 5u);
  for (const Vec3& p : s.points) EXPECT_EQ(p, Vec3::Zero());
}

TEST(ListingTest, SyntheticPlaneRecovered) {
  std::vector<Quat> poses;
  for (int i = -5; i <= 5; ++i) {
    for (int j = -5; j <= 5; ++j) {
      const double ty = 0.05 * i, tz = 0.04 * j;
      poses.push_back(quat_from_euler_xyz({0.1 * ty - 0.2 * tz, ty, tz}));
    }
  }
  poses.push_back(Quat::from_axis_angle(Vec3::UnitY(), 0.5 * kPi));  // degenerate
  const ListingSurface s = extract_listing(FromPoses(poses));
  EXPECT_EQ(s.skipped, 1u);
  ASSERT_EQ(s.points.size(), 121u);
  for (const Vec3& p : s.points) {
    EXPECT_NEAR(p.z(), 0.1 * p.x() - 0.2 * p.y(), 1e-12);
  }
  const PlaneFit f = fit_plane(s);
  EXPECT_NEAR(f.a, 0.1, 1e-12);
  EXPECT_NEAR(f.b, -0.2, 1e-12);
  EXPECT_NEAR(f.c, 0.0, 1e-12);
  EXPECT_LE(f.rms_residual, 1e-12);
}

TEST(ListingTest, ResidualOfNoisyPlane) {
  ListingSurface s;
  // Plane plus alternating +-e offsets: the fit keeps the plane and the
  // residual equals e.
  const double e = 1e-3;
  int sign = 1;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      s.points.emplace_back(0.01 * i, 0.01 * j, 0.3 * 0.01 * i + sign * e);
      sign = -sign;
    }
    sign = -sign;
  }
  const PlaneFit f = fit_plane(s);
  EXPECT_NEAR(f.rms_residual, e, 1e-12);
  EXPECT_NEAR(f.a, 0.3, 1e-9);
}

TEST(ListingTest, DegenerateInputs) {
  EXPECT_THROW(
      extract_listing(FromPoses({Quat::from_axis_angle(Vec3::UnitY(), 0.5 * kPi)})),
      std::domain_error);
  ListingSurface s;
  s.points = {Vec3::Zero(), Vec3::Zero(), Vec3(0.1, 0.1, 0.0), Vec3(0.2, 0.2, 0.0)};
  EXPECT_THROW(fit_plane(s), std::domain_error);
  s.points = {Vec3::Zero(), Vec3(0.1, 0.0, 0.0)};
  EXPECT_THROW(fit_plane(s), std::domain_error);
}

TEST(AutoSubstepsTest, ScalesWithStiffness) {
  const BodyModel b = BodyModel::hand_default();
  const double w = std::sqrt(2.0 * 1e4 / 5.6667e-4);
  EXPECT_EQ(auto_substeps(1e4, b, 1e-3), static_cast<int>(std::ceil(1e-3 * w / 0.3)));
  EXPECT_GE(auto_substeps(1e4, b, 1e-3), 19);
  EXPECT_LT(auto_substeps(1e3, b, 1e-3), auto_substeps(1e4, b, 1e-3));
  EXPECT_EQ(auto_substeps(1e-6, b, 1e-3), 1);
}

ParamSchedule Schedule(bool gravity, double k, double phi, std::vector<int> targets) {
  ParamSchedule s;
  s.gravity = gravity;
  s.stiffness = k;
  s.torsion = phi;
  s.targets = std::move(targets);
  return s;
}

TEST(RunTrialTest, NoTargetsHoldsCentre) {
  ClockTask task;
  const Trajectory tr =
      run_trial(Schedule(true, 1e4, 0.0, {}), task, BodyModel::hand_default(), BandParams{});
  ASSERT_EQ(tr.samples.size(), 500u);  // [0, dwell), end exclusive
  for (const auto& s : tr.samples) {
    EXPECT_EQ(s.x_d, task.center());
    EXPECT_EQ(s.reach, -1);
    EXPECT_LT((s.x - task.center()).norm(), 1e-4);
  }
  // Steady state: the commanded torque carries the gravity moment.
  const TrialSample& last = tr.samples.back();
  const Vec3 tau_g_world = rotate_vec(last.q, last.tau_g);
  EXPECT_LT((last.tau_c + tau_g_world).norm(), 0.05 * tau_g_world.norm());
}

TEST(RunTrialTest, SingleReachInvariants) {
  ClockTask task;
  task.dwell = 0.1;
  const double phi = -25 * kDeg;
  const Trajectory tr = run_trial(Schedule(true, 1e4, phi, {0}), task,
                                  BodyModel::hand_default(), BandParams{});
  ASSERT_GT(tr.samples.size(), 500u);
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const TrialSample& s = tr.samples[i];
    EXPECT_EQ(s.t, static_cast<double>(i) * 1e-3);
    EXPECT_NEAR(s.q.norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.q_d.norm(), 1.0, 1e-12);
    EXPECT_NEAR(torsion_about_pointer(s.q_d), phi, 1e-10);
    EXPECT_NEAR((pointer_intersection(s.q_d, 0.3) - s.x_d).norm(), 0.0, 1e-12);
  }
  EXPECT_LE(tr.max_norm_drift, 1e-9);
  const TrialSample& end = tr.samples.back();
  EXPECT_LT((end.x - task.center()).norm(), 1e-3);
}

TEST(RunTrialTest, PlanDoesNotDependOnGravityOrStiffness) {
  ClockTask task;
  task.dwell = 0.1;
  const Trajectory a = run_trial(Schedule(false, 1e4, 0.0, {0, 3}), task,
                                 BodyModel::hand_default(), BandParams{});
  const Trajectory b = run_trial(Schedule(true, 1e3, 0.0, {0, 3}), task,
                                 BodyModel::hand_default(), BandParams{});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  bool measured_differs = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].q_d.s, b.samples[i].q_d.s);
    EXPECT_EQ(a.samples[i].q_d.v, b.samples[i].q_d.v);
    measured_differs |= a.samples[i].q.v != b.samples[i].q.v;
  }
  EXPECT_TRUE(measured_differs);
}

TEST(RunTrialTest, TorsionTwistsDesiredPoseOnly) {
  ClockTask task;
  task.dwell = 0.1;
  const Trajectory a = run_trial(Schedule(true, 1e4, 0.0, {1}), task,
                                 BodyModel::hand_default(), BandParams{});
  const Trajectory b = run_trial(Schedule(true, 1e4, -25 * kDeg, {1}), task,
                                 BodyModel::hand_default(), BandParams{});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const Quat& q0 = a.samples[i].q_d;
    const Quat& q1 = b.samples[i].q_d;
    EXPECT_NEAR(relative_angle(q0, q1), 25 * kDeg, 1e-10);
    const Quat rel = q0.conjugate() * q1;  // body-frame twist
    EXPECT_NEAR(std::abs(rel.v.normalized().x()), 1.0, 1e-10);
  }
}

TEST(RunTrialTest, AdaptiveAgreesWithFixedStep) {
  ClockTask task;
  task.dwell = 0.05;
  const ParamSchedule s = Schedule(true, 1e3, 0.0, {2});
  const Trajectory fixed =
      run_trial(s, task, BodyModel::hand_default(), BandParams{});
  IntegratorSettings adaptive;
  adaptive.kind = IntegratorKind::kAdaptive;
  adaptive.rel_tol = 1e-8;
  const Trajectory adapt =
      run_trial(s, task, BodyModel::hand_default(), BandParams{}, adaptive);
  ASSERT_EQ(fixed.samples.size(), adapt.samples.size());
  EXPECT_LT(relative_angle(fixed.samples.back().q, adapt.samples.back().q), 1e-5);
}

// The raw vector part scales the torque by sin(theta / 2), so the restoring
// torque is K theta^2 / 2 near the goal and the gravity sag grows to
// sqrt(2 |tau_g| / K) instead of |tau_g| / K.
TEST(RunTrialTest, RawTorqueAxisSagsQuadratically) {
  ClockTask task;
  task.dwell = 0.1;
  ControllerSettings c;
  c.axis = TorqueAxis::kRaw;
  const Trajectory raw = run_trial(Schedule(true, 1e4, 0.0, {0}), task,
                                   BodyModel::hand_default(), BandParams{}, {}, c);
  const Trajectory unit = run_trial(Schedule(true, 1e4, 0.0, {0}), task,
                                    BodyModel::hand_default(), BandParams{});
  const double e_raw = (raw.samples.back().x - task.center()).norm();
  const double e_unit = (unit.samples.back().x - task.center()).norm();
  const double g = raw.samples.back().tau_g.norm();
  EXPECT_NEAR(e_raw / 0.3, std::sqrt(2.0 * g / 1e4), 0.05 * std::sqrt(2.0 * g / 1e4));
  EXPECT_NEAR(e_unit / 0.3, g / 1e4, 0.05 * g / 1e4);
}

TEST(RunTrialTest, RejectsInvalidInputs) {
  ClockTask task;
  EXPECT_THROW(run_trial(Schedule(true, 1e4, 0.0, {9}), task,
                         BodyModel::hand_default(), BandParams{}),
               std::invalid_argument);
  IntegratorSettings bad;
  bad.sample_dt = 0.0;
  EXPECT_THROW(run_trial(Schedule(true, 1e4, 0.0, {}), task,
                         BodyModel::hand_default(), BandParams{}, bad),
               std::invalid_argument);
}

TEST(RunTrialTest, OnlineStepsStayBounded) {
  ClockTask task;
  ParamSchedule s = Schedule(true, 1e4, 0.0, {0, 4});
  // Steps land inside the reaches: [0.5, 0.89] and [1.39, 1.79] s out,
  // [2.29, 2.68] and [3.18, 3.57] s back.
  s.stiffness = PiecewiseConstant({{0.0, 1e4}, {0.7, 8e3}, {1.6, 1e3}});
  s.torsion = PiecewiseConstant({{0.0, 0.0}, {2.5, -25 * kDeg}});
  const Trajectory tr = run_trial(s, task, BodyModel::hand_default(), BandParams{});
  double theta_max = 0.0;
  for (const auto& x : tr.samples) theta_max = std::max(theta_max, x.error_angle);
  const double nominal = reach_duration(BandParams{});
  int reach = -1;
  double reach_start = 0.0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const TrialSample& x = tr.samples[i];
    ASSERT_TRUE(x.q.v.allFinite() && x.omega.allFinite() && x.tau_c.allFinite());
    EXPECT_LE(x.tau_c.norm(), 2.0 * x.stiffness * theta_max * (1 + 1e-12));
    if (x.reach != reach) {
      reach = x.reach;
      reach_start = x.t;
    }
    if (reach >= 0 && !x.moving && i > 0 && tr.samples[i - 1].moving) {
      EXPECT_LE(x.t - reach_start, 3.0 * nominal);
      EXPECT_LT((x.x - x.target).norm(), 0.02);
    }
  }
}

}  // namespace
}  // namespace wristfic
