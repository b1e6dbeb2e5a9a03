#include "quadtrot/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "quadtrot/controller.hpp"
#include "quadtrot/errors.hpp"
#include "quadtrot/simulator.hpp"

namespace quadtrot {

std::string config_hash(const Scenario& scenario) { return fnv1a_hex(scenario.canonical); }

RunResult simulate(const Scenario& scenario, const MetricsOptions& options) {
  const RobotGeometry& geometry = scenario.geometry;
  Simulator sim(geometry, scenario.sim);
  TrotController controller(geometry, scenario.controller);
  const double height = -scenario.controller.gait.landing_height;
  const double dt = scenario.sim.dt;

  WorldState world = sim.standing(height);
  if (scenario.initial_roll != 0.0 || scenario.initial_pitch != 0.0) {
    world.orientation = Quat(Eigen::AngleAxisd(scenario.initial_pitch, Vec3::UnitY()) *
                             Eigen::AngleAxisd(scenario.initial_roll, Vec3::UnitX()));
    const Mat3 R = world.rotation();
    for (LegState& ls : world.legs) ls.foot_body = R.transpose() * (ls.foot_world - world.position);
  }

  std::array<Vec3, 4> hips;
  for (Leg leg : kAllLegs) hips[index(leg)] = hip_origin(leg, geometry).position;
  const std::vector<double> breaks = scenario.breakpoints();

  RunResult result;
  Telemetry& tel = result.telemetry;
  tel.header.config_hash = config_hash(scenario);
  tel.header.inertia = scenario.sim.inertia.diagonal();
  tel.header.period = scenario.controller.gait.period();
  tel.header.nominal_height = height;
  tel.header.dt = dt;

  const long ticks = std::lround(scenario.sim.duration / dt);
  tel.rows.reserve(static_cast<std::size_t>(ticks));
  int segment = 0;
  for (long k = 0; k < ticks; ++k) {
    const double t = world.time;
    while (segment + 1 < static_cast<int>(breaks.size()) && t >= breaks[segment + 1]) ++segment;
    const SensorSample sensors = sim.readout(world);
    const double vx = scenario.vx.at(t);
    const double wz = scenario.wz.at(t);
    const ControlOutput& out = controller.step(t, vx, wz, sensors, dt);

    TelemetryRow row;
    row.t = t;
    row.segment = segment;
    row.vx_command = vx;
    row.wz_command = wz;
    for (const Disturbance& d : scenario.disturbances) row.disturbance = row.disturbance || d.active(t);
    row.position = world.position;
    row.velocity = world.velocity;
    row.rpy = quaternion_to_rpy(world.orientation);
    row.rates = world.angular_velocity;
    for (Leg leg : kAllLegs) {
      const int i = index(leg);
      LegSample& ls = row.legs[i];
      ls.phase = out.legs[i].phase;
      ls.desired = hips[i] + out.legs[i].desired;
      ls.actual = world.legs[i].foot_body;
      ls.contact = world.legs[i].contact;
      ls.force_z = out.legs[i].force.desired_force.z();
      ls.torque = out.legs[i].force.torque;
    }
    tel.rows.push_back(row);

    world = sim.step(world, out.commands, scenario.disturbances);
  }
  result.metrics = compute_metrics(tel, options);
  return result;
}

MetricsReport run_scenario(const Scenario& scenario, const std::string& out_path,
                           const MetricsOptions& options) {
  RunResult r = simulate(scenario, options);
  write_telemetry(out_path, r.telemetry);
  return r.metrics;
}

void write_plan(const Scenario& scenario, const std::string& out_path, double sample_dt) {
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write '" + out_path + "'");
  const GaitParams& params = scenario.controller.gait;
  const double lambda = scenario.controller.placement.neutral_factor;
  char buf[256];
  const FootTrajectory first(params, scenario.geometry, Leg::LF, 0.0, lambda);
  const PhaseTimeline& tl = first.timeline();
  const ZKeyframes& k = first.keyframes();
  out << "# quadtrot plan, config_hash=" << config_hash(scenario) << "\n";
  std::snprintf(buf, sizeof buf,
                "# period=%.17g flight=%.17g support=%.17g retract=%.17g swing_up=%.17g "
                "swing_down=%.17g\n",
                tl.period, tl.flight, tl.support, tl.retract, tl.swing_up, tl.swing_down);
  out << buf;
  for (int i = 0; i < 5; ++i) {
    std::snprintf(buf, sizeof buf, "# knot %d t=%.17g pz=%.17g vz=%.17g\n", i, k.time[i],
                  k.position[i], k.velocity[i]);
    out << buf;
  }
  out << "t,leg,phase,px,py,pz,vx,vy,vz\n";

  std::array<FootTrajectory, 4> legs = {
      first, FootTrajectory(params, scenario.geometry, Leg::RF, 0.0, lambda),
      FootTrajectory(params, scenario.geometry, Leg::LH, 0.0, lambda),
      FootTrajectory(params, scenario.geometry, Leg::RH, 0.0, lambda)};
  const long samples = std::lround(2.0 * tl.period / sample_dt);
  for (long s = 0; s <= samples; ++s) {
    const double t = static_cast<double>(s) * sample_dt;
    for (const FootTrajectory& traj : legs) {
      const FootTrajectory::Point p = traj.at(t);
      std::snprintf(buf, sizeof buf, "%.17g,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t,
                    std::string(leg_name(traj.leg())).c_str(),
                    std::string(phase_name(p.phase)).c_str(), p.position.x(), p.position.y(),
                    p.position.z(), p.velocity.x(), p.velocity.y(), p.velocity.z());
      out << buf;
    }
  }
}

}  // namespace quadtrot
