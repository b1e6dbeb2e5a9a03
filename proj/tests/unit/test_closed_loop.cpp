#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "quadtrot/controller.hpp"
#include "quadtrot/harness.hpp"
#include "quadtrot/scenario.hpp"
#include "quadtrot/trajectory.hpp"

using namespace quadtrot;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(QUADTROT_SCENARIO_DIR) + "/" + name;
}

struct Trace {
  std::vector<double> t;
  std::vector<double> estimate;  // heading-frame forward speed, controller estimate
  std::vector<double> truth;
  std::vector<bool> stale;
};

// The harness loop, keeping the controller's velocity estimate.
Trace run_with_estimate(const Scenario& s) {
  Simulator sim(s.geometry, s.sim);
  TrotController controller(s.geometry, s.controller);
  WorldState world = sim.standing(-s.controller.gait.landing_height);
  Trace tr;
  const long ticks = std::lround(s.sim.duration / s.sim.dt);
  for (long k = 0; k < ticks; ++k) {
    const double t = world.time;
    const SensorSample sensors = sim.readout(world);
    const ControlOutput& out = controller.step(t, s.vx.at(t), s.wz.at(t), sensors, s.sim.dt);
    const double yaw = sensors.yaw;
    tr.t.push_back(t);
    tr.estimate.push_back(out.velocity.velocity.x());
    tr.truth.push_back(std::cos(yaw) * world.velocity.x() + std::sin(yaw) * world.velocity.y());
    tr.stale.push_back(out.velocity.stale);
    world = sim.step(world, out.commands, s.disturbances);
  }
  return tr;
}

}  // namespace

TEST(ClosedLoop, RollOffsetDecays) {
  Scenario s = load_config(scenario_path("standing.ini"));
  s.initial_roll = 0.05;
  s.sim.duration = 6.0;
  finalize(s);
  const RunResult r = simulate(s);
  const double T = r.telemetry.header.period;
  std::vector<double> envelope;
  double peak = 0.0, window_end = T;
  for (const TelemetryRow& row : r.telemetry.rows) {
    if (row.t >= window_end) {
      envelope.push_back(peak);
      peak = 0.0;
      window_end += T;
    }
    peak = std::max(peak, std::abs(row.rpy.x()));
  }
  ASSERT_GT(envelope.size(), 10u);
  EXPECT_NEAR(envelope.front(), 0.05, 0.005);
  for (std::size_t i = 1; i < envelope.size(); ++i) {
    EXPECT_LE(envelope[i], envelope[i - 1] + 0.005) << "period " << i;
  }
  EXPECT_LE(envelope.back(), 0.02);
  EXPECT_FALSE(r.metrics.fell);
}

TEST(ClosedLoop, VelocityEstimateTracksTruth) {
  Scenario s = load_config(scenario_path("running.ini"));
  s.sim.duration = 9.0;
  finalize(s);
  const Trace tr = run_with_estimate(s);
  // Constant 1 m/s command from 6 s; steady from 7 s.
  double est = 0.0, truth = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.t[i] < 7.0 || tr.stale[i]) continue;
    est += tr.estimate[i];
    truth += tr.truth[i];
    ++n;
  }
  ASSERT_GT(n, 500);
  EXPECT_NEAR(est / n, truth / n, 0.05);
  EXPECT_NEAR(truth / n, 1.0, 0.2);
}

TEST(ClosedLoop, FlightIntervalsMatchPlannedFlight) {
  Scenario s = load_config(scenario_path("running.ini"));
  s.sim.duration = 9.0;
  finalize(s);
  const RunResult r = simulate(s);
  const double t_fp = derive_timeline(s.controller.gait).flight;
  std::vector<double> intervals;
  double start = -1.0;
  bool landed = false;  // skip an interval already running at the window start
  for (const TelemetryRow& row : r.telemetry.rows) {
    if (row.t < 7.0) continue;
    const bool airborne = row.contact_count() == 0;
    landed = landed || !airborne;
    if (airborne && landed && start < 0.0) start = row.t;
    if (!airborne && start >= 0.0) {
      intervals.push_back(row.t - start);
      start = -1.0;
    }
  }
  ASSERT_GE(intervals.size(), 8u);
  for (double d : intervals) {
    EXPECT_GE(d, 0.5 * t_fp);
    EXPECT_LE(d, 1.5 * t_fp);
  }
}
