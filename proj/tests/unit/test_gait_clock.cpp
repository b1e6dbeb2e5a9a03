#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quadtrot/errors.hpp"
#include "quadtrot/gait_clock.hpp"

using namespace quadtrot;

namespace {

GaitParams running_set() { return GaitParams{}; }

GaitParams speed_set() {
  GaitParams p;
  p.step_frequency = 2.8;
  p.forward_speed = 0.8;
  p.support_descent = 0.01;
  p.c1 = 2.0;
  p.c3 = -2.0;
  p.c4 = -0.1;
  p.c5 = 0.6;
  return p;
}

// Ballistic oracle: integrate z'' = -g with RK4 from takeoff (z = 0, speed
// v_x/c1) and bisect on the step count's remainder for the landing at
// z = -h_sd. RK4 is exact for this ODE, so only the bisection limits accuracy.
double oracle_flight_time(const GaitParams& p) {
  const double v0 = p.forward_speed / p.c1;
  const auto height_at = [&](double t) {
    const int n = 64;
    const double h = t / n;
    double z = 0.0, v = v0;
    for (int i = 0; i < n; ++i) {
      const double k1z = v, k1v = -p.gravity;
      const double k2z = v + 0.5 * h * k1v, k2v = -p.gravity;
      const double k3z = v + 0.5 * h * k2v, k3v = -p.gravity;
      const double k4z = v + h * k3v, k4v = -p.gravity;
      z += h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return z + p.support_descent;
  };
  if (v0 == 0.0 && p.support_descent == 0.0) return 0.0;
  double lo = 1e-12, hi = 1.0;
  if (v0 > 0.0) lo = v0 / p.gravity;  // apex, still above the landing height
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (height_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct OracleTimeline {
  double flight, support, retract, up, down, period;
};

// Phase durations from the oracle flight time plus constant-acceleration
// retraction: the foot goes from v_z1 = -v_x/c1 to v_z2 = c4*v_z1 at |c3|*g.
OracleTimeline oracle_timeline(const GaitParams& p) {
  OracleTimeline o{};
  o.period = 1.0 / p.step_frequency;
  o.flight = oracle_flight_time(p);
  o.support = 0.5 * o.period - o.flight;
  const double vz1 = -p.forward_speed / p.c1;
  const double vz2 = p.c4 * vz1;
  o.retract = (vz2 - vz1) / (std::abs(p.c3) * p.gravity);
  const double rest = o.period - o.support - o.retract;
  o.up = p.c5 * rest;
  o.down = rest - o.up;
  return o;
}

bool has_violation(const std::vector<Violation>& v, const std::string& field) {
  for (const Violation& x : v) {
    if (x.field == field) return true;
  }
  return false;
}

}  // namespace

TEST(GaitClock, PublishedParameterSetsValidate) {
  EXPECT_TRUE(validate(running_set()).empty());
  EXPECT_TRUE(validate(speed_set()).empty());
}

TEST(GaitClock, BoundViolationsNameTheField) {
  GaitParams p;
  p.c2 = 0.5;
  auto v = validate(p);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "c2");
  EXPECT_NE(v[0].describe().find("c2"), std::string::npos);

  p = GaitParams{};
  p.c3 = -0.5;
  v = validate(p);
  EXPECT_TRUE(has_violation(v, "c3"));

  p = GaitParams{};
  p.step_frequency = 0.0;
  p.landing_height = 0.1;
  p.c5 = 1.0;
  v = validate(p);
  EXPECT_TRUE(has_violation(v, "f"));
  EXPECT_TRUE(has_violation(v, "zs"));
  EXPECT_TRUE(has_violation(v, "c5"));
}

TEST(GaitClock, RunningTimelineValues) {
  const PhaseTimeline tl = derive_timeline(running_set());
  EXPECT_NEAR(tl.flight, 0.0663, 5e-5);
  EXPECT_NEAR(tl.support, 0.1061, 5e-5);
  EXPECT_NEAR(tl.retract, 0.0467, 5e-5);
  EXPECT_NEAR(tl.swing_up, 0.0384, 5e-5);
  EXPECT_NEAR(tl.swing_down, 0.1536, 5e-5);
  EXPECT_NEAR(tl.period, 0.3448, 5e-5);
}

TEST(GaitClock, SpeedTimelineValues) {
  const PhaseTimeline tl = derive_timeline(speed_set());
  EXPECT_NEAR(tl.flight, 0.1016, 5e-5);
  EXPECT_NEAR(tl.support, 0.0770, 5e-5);
}

TEST(GaitClock, TimelineMatchesBallisticOracle) {
  for (const GaitParams& p : {running_set(), speed_set()}) {
    const PhaseTimeline tl = derive_timeline(p);
    const OracleTimeline o = oracle_timeline(p);
    EXPECT_NEAR(tl.flight, o.flight, 1e-9);
    EXPECT_NEAR(tl.support, o.support, 1e-9);
    EXPECT_NEAR(tl.retract, o.retract, 1e-9);
    EXPECT_NEAR(tl.swing_up, o.up, 1e-9);
    EXPECT_NEAR(tl.swing_down, o.down, 1e-9);
  }
}

TEST(GaitClock, RandomFeasibleSetsMatchOracleAndIdentities) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> f(2.0, 3.5), vx(0.0, 1.5), hsd(0.0, 0.015),
      c1(2.0, 6.0), c3(-5.0, -1.0), c4(-5.0, 0.0), c5(0.1, 0.9);
  int checked = 0;
  for (int k = 0; k < 2000 && checked < 300; ++k) {
    GaitParams p;
    p.step_frequency = f(rng);
    p.forward_speed = vx(rng);
    p.support_descent = hsd(rng);
    p.c1 = c1(rng);
    p.c3 = c3(rng);
    p.c4 = c4(rng);
    p.c5 = c5(rng);
    PhaseTimeline tl;
    try {
      tl = derive_timeline(p);
    } catch (const InfeasibleError&) {
      continue;
    }
    ++checked;
    const OracleTimeline o = oracle_timeline(p);
    EXPECT_NEAR(tl.flight, o.flight, 1e-9);
    EXPECT_NEAR(tl.support + tl.retract + tl.swing_up + tl.swing_down, tl.period, 1e-12);
    EXPECT_NEAR(2 * tl.flight + 2 * tl.support, tl.period, 1e-12);
    EXPECT_GT(tl.support, 0.0);
    EXPECT_GE(tl.retract, 0.0);
    EXPECT_GT(tl.swing_up, 0.0);
    EXPECT_GT(tl.swing_down, 0.0);
  }
  EXPECT_GE(checked, 100);
}

TEST(GaitClock, WalkingTrotLimit) {
  GaitParams p;
  p.forward_speed = 0.0;
  p.support_descent = 0.0;
  const PhaseTimeline tl = derive_timeline(p);
  EXPECT_EQ(tl.flight, 0.0);
  EXPECT_NEAR(tl.support, 0.5 / p.step_frequency, 1e-15);
  EXPECT_NEAR(planned_duty_factor(tl), 0.5, 1e-12);
}

TEST(GaitClock, InfeasibleTimelines) {
  GaitParams p;
  p.step_frequency = 8.0;
  EXPECT_THROW(derive_timeline(p), InfeasibleError);
  p = GaitParams{};
  p.c3 = -1.0;
  p.c4 = -40.0;
  EXPECT_THROW(derive_timeline(p), InfeasibleError);
}

TEST(GaitClock, PhaseQueries) {
  const PhaseTimeline tl = derive_timeline(running_set());
  const double T = tl.period;
  LegPhase a = phase_at(tl, 0.0, LegGroup::L);
  EXPECT_EQ(a.phase, Phase::Support);
  EXPECT_EQ(a.local_time, 0.0);
  a = phase_at(tl, T / 2, LegGroup::R);
  EXPECT_EQ(a.phase, Phase::Support);
  EXPECT_NEAR(a.local_time, 0.0, 1e-12);
  a = phase_at(tl, T + 1e-4, LegGroup::L);
  EXPECT_EQ(a.phase, Phase::Support);
  EXPECT_NEAR(a.local_time, 1e-4, 1e-12);
  EXPECT_EQ(a.cycle, 1);

  a = phase_at(tl, tl.support + 0.5 * tl.retract, LegGroup::L);
  EXPECT_EQ(a.phase, Phase::Retract);
  EXPECT_NEAR(a.local_time, 0.5 * tl.retract, 1e-12);
  a = phase_at(tl, T - 1e-6, LegGroup::L);
  EXPECT_EQ(a.phase, Phase::SwingDown);
}

TEST(GaitClock, PhaseQueriesArePeriodic) {
  const PhaseTimeline tl = derive_timeline(running_set());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, tl.period);
  for (int n = 0; n < 500; ++n) {
    const double t = u(rng);
    for (LegGroup g : {LegGroup::L, LegGroup::R}) {
      const LegPhase a = phase_at(tl, t, g);
      EXPECT_GE(a.local_time, 0.0);
      for (int k : {1, 3, 10}) {
        const LegPhase b = phase_at(tl, t + k * tl.period, g);
        EXPECT_EQ(a.phase, b.phase);
        EXPECT_NEAR(a.local_time, b.local_time, 1e-9);
      }
    }
  }
}

TEST(GaitClock, DutyFactor) {
  EXPECT_NEAR(planned_duty_factor(derive_timeline(running_set())), 0.3076, 5e-5);
  EXPECT_NEAR(planned_duty_factor(derive_timeline(speed_set())), 0.2155, 5e-5);
  const PhaseTimeline tl = derive_timeline(running_set());
  EXPECT_NEAR(planned_duty_factor(tl), tl.support * running_set().step_frequency, 1e-15);
}

TEST(GaitClock, DutyFactorFallsWithSpeed) {
  GaitParams p;
  double last = 1.0;
  for (double v = 0.0; v <= 1.6; v += 0.1) {
    p.forward_speed = v;
    const double d = planned_duty_factor(derive_timeline(p));
    EXPECT_LT(d, last);
    last = d;
  }
}

TEST(GaitClock, PreferredFrequencyAndSpeed) {
  EXPECT_NEAR(preferred_frequency(1.0), 3.35, 1e-12);
  EXPECT_NEAR(preferred_speed(1.0), 1.09, 1e-12);
  EXPECT_NEAR(preferred_frequency(1.9), 3.35 * std::pow(1.9, -0.13), 1e-12);
  EXPECT_NEAR(preferred_frequency(1.9), 3.08, 5e-3);
  EXPECT_NEAR(preferred_speed(1.9), 1.26, 5e-3);
  EXPECT_NEAR(preferred_frequency(38.0), 2.09, 5e-3);
  EXPECT_NEAR(preferred_speed(38.0), 2.44, 5e-3);
  EXPECT_NEAR(preferred_speed(38.0), 1.09 * std::pow(38.0, 0.222), 1e-12);
}
