#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quadtrot/errors.hpp"
#include "quadtrot/kinematics.hpp"

using namespace quadtrot;

namespace {

const RobotGeometry kGeo;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x(), b.x(), tol);
  EXPECT_NEAR(a.y(), b.y(), tol);
  EXPECT_NEAR(a.z(), b.z(), tol);
}

// Rotation-composition oracle, written independently of fk_foot.
Vec3 fk_oracle(Leg leg, const JointAngles& q, const RobotGeometry& g) {
  const double s = lateral_sign(leg);
  const Eigen::Matrix3d rx = Eigen::AngleAxisd(q.roll, Vec3::UnitX()).toRotationMatrix();
  // Pitch about +y in the planar leg plane; +q swings the foot toward +x
  // for a foot below the joint, i.e. rotation by -q about y.
  const auto ry = [](double a) { return Eigen::AngleAxisd(-a, Vec3::UnitY()).toRotationMatrix(); };
  const Vec3 knee = ry(q.hip_pitch) * Vec3(0, 0, -g.thigh);
  const Vec3 foot = knee + ry(q.hip_pitch + q.knee_pitch) * Vec3(0, 0, -g.crus);
  return rx * (Vec3(0, s * g.hip_link, 0) + foot);
}

}  // namespace

TEST(Kinematics, HipOriginValues) {
  expect_vec_near(hip_origin(Leg::LF, kGeo).position, {0.0835, 0.081, 0.0}, 1e-12);
  expect_vec_near(hip_origin(Leg::RH, kGeo).position, {-0.0835, -0.071, 0.0}, 1e-12);
  EXPECT_DOUBLE_EQ(hip_origin(Leg::LF, kGeo).position.y(), -hip_origin(Leg::RF, kGeo).position.y());
  EXPECT_EQ(hip_origin(Leg::LF, kGeo).frame, Frame::Body);
}

TEST(Kinematics, BodyLengthShiftsOnlyX) {
  RobotGeometry g = kGeo;
  g.body_length = 0.3;
  for (Leg leg : kAllLegs) {
    const Vec3 a = hip_origin(leg, kGeo).position;
    const Vec3 b = hip_origin(leg, g).position;
    EXPECT_NE(a.x(), b.x());
    EXPECT_EQ(a.y(), b.y());
    EXPECT_EQ(a.z(), b.z());
  }
}

TEST(Kinematics, GroupsPartitionLegs) {
  EXPECT_EQ(group_of(Leg::LF), LegGroup::L);
  EXPECT_EQ(group_of(Leg::RH), LegGroup::L);
  EXPECT_EQ(group_of(Leg::RF), LegGroup::R);
  EXPECT_EQ(group_of(Leg::LH), LegGroup::R);
  EXPECT_EQ(leg_number(Leg::LF), 1);
  EXPECT_EQ(leg_number(Leg::RH), 4);
}

TEST(Kinematics, GeometryValidation) {
  RobotGeometry g;
  g.thigh = 0.0;
  EXPECT_THROW(g.validate(), ValidationError);
  g = RobotGeometry{};
  g.mass = -1.0;
  EXPECT_THROW(g.validate(), ValidationError);
  EXPECT_NO_THROW(RobotGeometry{}.validate());
}

TEST(Kinematics, ForwardExamples) {
  expect_vec_near(fk_foot(Leg::LF, {0, 0, 0}, kGeo).position, {0, 0.046, -0.131}, 1e-12);
  expect_vec_near(fk_foot(Leg::LF, {0, 0, M_PI / 2}, kGeo).position, {0.065, 0.046, -0.066}, 1e-12);
  expect_vec_near(fk_foot(Leg::LF, {M_PI / 2, 0, 0}, kGeo).position, {0, 0.131, 0.046}, 1e-12);
}

TEST(Kinematics, ForwardMatchesCompositionOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int k = 0; k < 200; ++k) {
    const JointAngles q{u(rng), u(rng), u(rng)};
    for (Leg leg : kAllLegs) expect_vec_near(fk_foot(leg, q, kGeo).position, fk_oracle(leg, q, kGeo), 1e-12);
  }
}

TEST(Kinematics, MirrorSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const JointAngles q{u(rng), u(rng), u(rng)};
    const JointAngles mirrored{-q.roll, q.hip_pitch, q.knee_pitch};
    const Vec3 l = fk_foot(Leg::LF, q, kGeo).position;
    const Vec3 r = fk_foot(Leg::RF, mirrored, kGeo).position;
    EXPECT_DOUBLE_EQ(l.x(), r.x());
    EXPECT_DOUBLE_EQ(l.y(), -r.y());
    EXPECT_DOUBLE_EQ(l.z(), r.z());
  }
}

TEST(Kinematics, InverseExamples) {
  const IkSolution zero = ik_leg(Leg::LF, {0, 0.046, -0.131}, kGeo);
  EXPECT_NEAR(zero.q.roll, 0.0, 1e-9);
  EXPECT_NEAR(zero.q.hip_pitch, 0.0, 1e-6);
  EXPECT_NEAR(zero.q.knee_pitch, 0.0, 1e-6);
  EXPECT_TRUE(zero.near_singular);
  EXPECT_THROW(ik_leg(Leg::LF, {0, 0.046, -0.50}, kGeo), UnreachableError);
}

TEST(Kinematics, RoundTripRandomTargets) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> roll(-0.8, 0.8), hip(-1.5, 1.5), knee(0.05, 2.8);
  double worst = 0.0;
  double worst_q = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const JointAngles q{roll(rng), hip(rng), knee(rng)};
    // ik_leg returns the branch with the foot below the roll axis.
    if (kGeo.thigh * std::cos(q.hip_pitch) + kGeo.crus * std::cos(q.hip_pitch + q.knee_pitch) <= 0.0) {
      continue;
    }
    for (Leg leg : kAllLegs) {
      const Vec3 p = fk_foot(leg, q, kGeo).position;
      const IkSolution s = ik_leg(leg, p, kGeo);
      worst = std::max(worst, (fk_foot(leg, s.q, kGeo).position - p).norm());
      worst_q = std::max(worst_q, (s.q.as_vector() - q.as_vector()).cwiseAbs().maxCoeff());
      EXPECT_GE(s.q.knee_pitch, 0.0);
    }
  }
  EXPECT_LT(worst, 1e-9);
  EXPECT_LT(worst_q, 1e-9);
}

TEST(Kinematics, ProjectionKeepsReachablePoints) {
  bool projected = true;
  const Vec3 p(0.01, 0.046, -0.12);
  EXPECT_EQ(project_to_workspace(Leg::LF, p, kGeo, &projected), p);
  EXPECT_FALSE(projected);
  const Vec3 far = project_to_workspace(Leg::LF, {0, 0.046, -0.5}, kGeo, &projected);
  EXPECT_TRUE(projected);
  EXPECT_NO_THROW(ik_leg(Leg::LF, far, kGeo));
}

TEST(Kinematics, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double h = 1e-6;
  for (int k = 0; k < 200; ++k) {
    const JointAngles q{u(rng), u(rng), u(rng)};
    for (Leg leg : kAllLegs) {
      const Mat3 J = jacobian(leg, q, kGeo);
      for (int j = 0; j < 3; ++j) {
        Vec3 qp = q.as_vector(), qm = q.as_vector();
        qp[j] += h;
        qm[j] -= h;
        const Vec3 fd = (fk_foot(leg, JointAngles::from_vector(qp), kGeo).position -
                         fk_foot(leg, JointAngles::from_vector(qm), kGeo).position) /
                        (2 * h);
        EXPECT_LT((J.col(j) - fd).cwiseAbs().maxCoeff(), 1e-5);
      }
    }
  }
}

TEST(Kinematics, JacobianRollColumnAtZeroPose) {
  // omega x r with omega = +x and r the zero-pose foot point.
  const Vec3 r = fk_foot(Leg::LF, {}, kGeo).position;
  const Mat3 J = jacobian(Leg::LF, {}, kGeo);
  expect_vec_near(J.col(0), Vec3::UnitX().cross(r), 1e-12);
  expect_vec_near(J.col(0), {0, 0.131, 0.046}, 1e-12);
  expect_vec_near(J * Vec3::Zero(), Vec3::Zero(), 0.0);
}

TEST(Kinematics, JointLimits) {
  JointLimits lim;
  EXPECT_TRUE(lim.contains({0.1, 0.2, 0.3}));
  EXPECT_FALSE(lim.contains({2.0, 0.0, 0.0}));
}
