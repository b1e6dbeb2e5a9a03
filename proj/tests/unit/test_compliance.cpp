#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quadtrot/compliance.hpp"
#include "quadtrot/gait_clock.hpp"

using namespace quadtrot;

namespace {

const RobotGeometry kGeo;

// Mass on the tuned spring-damper released from rest length with a downward
// speed; returns the time it takes to come back up through the release
// height. RK4 at the requested step, crossing located by linear interpolation.
double half_oscillation(double kp, double kd, double m, double dt) {
  const auto acc = [&](double z, double v) { return (-kp * z - kd * v) / m; };
  double z = 0.0, v = -0.3, t = 0.0;
  for (;;) {
    const double k1z = v, k1v = acc(z, v);
    const double k2z = v + 0.5 * dt * k1v, k2v = acc(z + 0.5 * dt * k1z, v + 0.5 * dt * k1v);
    const double k3z = v + 0.5 * dt * k2v, k3v = acc(z + 0.5 * dt * k2z, v + 0.5 * dt * k2v);
    const double k4z = v + dt * k3v, k4v = acc(z + dt * k3z, v + dt * k3v);
    const double z_next = z + dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z);
    const double v_next = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (t > dt && z < 0.0 && z_next >= 0.0) return t + dt * (-z) / (z_next - z);
    z = z_next;
    v = v_next;
    t += dt;
    if (t > 10.0) return -1.0;
  }
}

}  // namespace

TEST(Compliance, VirtualForceExamples) {
  VirtualGains g;
  g.kp = Vec3(0, 0, 841.8);
  g.kd = Vec3(5.0, 0, 0);
  EXPECT_EQ(virtual_force(Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g), Vec3::Zero());
  const Vec3 fz = virtual_force(Vec3(0, 0, 0.01), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g);
  EXPECT_NEAR(fz.z(), 8.418, 1e-12);
  const Vec3 fx = virtual_force(Vec3::Zero(), Vec3(0.1, 0, 0), Vec3::Zero(), Vec3::Zero(), g);
  EXPECT_NEAR(fx.x(), 0.5, 1e-15);
}

TEST(Compliance, VirtualForceScalesWithGains) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    VirtualGains g;
    g.kp = Vec3(u(rng), u(rng), u(rng)).cwiseAbs() * 500;
    g.kd = Vec3(u(rng), u(rng), u(rng)).cwiseAbs() * 5;
    const Vec3 pd(u(rng), u(rng), u(rng)), vd(u(rng), u(rng), u(rng));
    const Vec3 p(u(rng), u(rng), u(rng)), v(u(rng), u(rng), u(rng));
    const double alpha = 3.0;
    VirtualGains h{alpha * g.kp, alpha * g.kd};
    EXPECT_LT((virtual_force(pd, vd, p, v, h) - alpha * virtual_force(pd, vd, p, v, g)).norm(), 1e-9);
  }
}

TEST(Compliance, VerticalGainExample) {
  const VerticalGains g = tune_vertical_gains(0.1061, 0.95, 0.1);
  EXPECT_NEAR(g.kp, 841.8, 0.5);
  EXPECT_NEAR(g.kd, 5.65, 5e-3);
  EXPECT_NEAR(g.kd, 2 * 0.1 * std::sqrt(g.kp * 0.95), 1e-12);
  EXPECT_NEAR(g.tuning.damped_frequency, M_PI / 0.1061, 1e-12);
  EXPECT_NEAR(g.tuning.damped_frequency,
              g.tuning.natural_frequency * std::sqrt(1 - 0.01), 1e-12);

  // With the exact support duration of the running set.
  const VerticalGains exact = tune_vertical_gains(derive_timeline(GaitParams{}).support, 0.95, 0.1);
  EXPECT_NEAR(exact.kp, 841.8, 0.5);
}

TEST(Compliance, UndampedLimitAndScaling) {
  const VerticalGains a = tune_vertical_gains(0.1, 0.95, 0.0);
  EXPECT_EQ(a.kd, 0.0);
  EXPECT_NEAR(a.tuning.natural_frequency, M_PI / 0.1, 1e-12);
  const VerticalGains b = tune_vertical_gains(0.2, 0.95, 0.0);
  EXPECT_NEAR(b.kp, a.kp / 4, 1e-9);
}

TEST(Compliance, HalfOscillationMatchesSupport) {
  const double support = derive_timeline(GaitParams{}).support;
  const double m = 0.5 * kGeo.mass;
  const VerticalGains g = tune_vertical_gains(support, m, 0.0);
  const double half = half_oscillation(g.kp, g.kd, m, 1e-4);
  EXPECT_NEAR(half, support, 0.02 * support);
}

TEST(Compliance, LegGainsScaleXY) {
  const VerticalGains v = tune_vertical_gains(0.1, 0.95, 0.2);
  const VirtualGains g = leg_gains(v, 0.5);
  EXPECT_EQ(g.kp.z(), v.kp);
  EXPECT_EQ(g.kp.x(), 0.5 * v.kp);
  EXPECT_EQ(g.kd.y(), 0.5 * v.kd);
}

TEST(Compliance, GravityCompensation) {
  EXPECT_NEAR(gravity_comp(2, kGeo), 9.32, 5e-3);
  EXPECT_EQ(gravity_comp(0, kGeo), 0.0);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(n * gravity_comp(n, kGeo), kGeo.mass * kGeo.gravity, 1e-12);
    EXPECT_GE(gravity_comp(n, kGeo), 0.0);
  }
  EXPECT_NEAR(kGeo.mass * kGeo.gravity, 18.64, 5e-3);
}

TEST(Compliance, TorqueMappingExamples) {
  const Mat3 J = jacobian(Leg::LF, {}, kGeo);
  EXPECT_EQ(map_to_torques(J, Vec3::Zero()), Vec3::Zero());
  const Vec3 tau = map_to_torques(J, Vec3(0, 0, -9.32));
  EXPECT_NEAR(tau[0], -0.429, 5e-4);
  EXPECT_NEAR(tau[0], kGeo.hip_link * -9.32, 1e-12);
  EXPECT_NEAR(tau[1], 0.0, 1e-12);
  EXPECT_NEAR(tau[2], 0.0, 1e-12);
}

TEST(Compliance, VirtualWorkIdentity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const JointAngles q{u(rng), u(rng), 1.0 + u(rng)};
    const Vec3 qd(u(rng), u(rng), u(rng));
    const Vec3 F(10 * u(rng), 10 * u(rng), 10 * u(rng));
    for (Leg leg : kAllLegs) {
      const Mat3 J = jacobian(leg, q, kGeo);
      EXPECT_NEAR(map_to_torques(J, F).dot(qd), F.dot(J * qd), 1e-9);
    }
  }
}

TEST(Compliance, ComposedForce) {
  const Mat3 J = jacobian(Leg::RH, {0.1, 0.3, 0.8}, kGeo);
  const Vec3 vf(1.0, -2.0, 0.5);
  const FootForceCommand c = compose_foot_force(vf, 4.66, J);
  EXPECT_EQ(c.desired_force, Vec3(1.0, -2.0, 0.5 - 4.66));
  EXPECT_EQ(c.torque, J.transpose() * c.desired_force);

  const Vec3 down = Vec3(0.1, 0.0, -1.0).normalized();
  const FootForceCommand d = compose_foot_force(vf, 4.66, down, J);
  EXPECT_LT((d.desired_force - (vf + 4.66 * down)).norm(), 1e-15);
}
