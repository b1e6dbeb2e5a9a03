#include "quadtrot/controller.hpp"

#include <vector>

namespace quadtrot {

TrotController::TrotController(const RobotGeometry& geometry, const ControllerSettings& settings)
    : geometry_(geometry),
      settings_(settings),
      period_(settings.gait.period()),
      estimator_(settings.cutoff_hz) {
  for (Leg leg : kAllLegs) {
    hips_[index(leg)] = hip_origin(leg, geometry_).position;
    legs_[index(leg)].adjust = AdjustIntegrator(settings_.posture.max_offset);
  }
}

const PhaseTimeline& TrotController::timeline(LegGroup group) const {
  return groups_[static_cast<int>(group)].timeline;
}

void TrotController::latch(GroupPlan& plan, long cycle, double speed) {
  GaitParams params = settings_.gait;
  params.forward_speed = speed;
  params.gravity = geometry_.gravity;
  plan.cycle = cycle;
  plan.valid = true;
  plan.speed = speed;
  plan.timeline = derive_timeline(params);
  plan.keyframes = synth_z_keyframes(params, plan.timeline);
  const VerticalGains vertical =
      tune_vertical_gains(plan.timeline.support, 0.5 * geometry_.mass, settings_.zeta);
  plan.gains = leg_gains(vertical, settings_.kp_xy_scale);
}

const ControlOutput& TrotController::step(double t, double vx_command, double wz_command,
                                          const SensorSample& sensors, double dt) {
  PhaseTimeline clock;
  clock.period = period_;
  for (LegGroup group : {LegGroup::L, LegGroup::R}) {
    GroupPlan& plan = groups_[static_cast<int>(group)];
    const long cycle = phase_at(clock, t, group).cycle;
    if (!plan.valid || cycle != plan.cycle) latch(plan, cycle, vx_command);
  }

  const Mat3 tilt = (Eigen::AngleAxisd(sensors.pitch, Vec3::UnitY()) *
                     Eigen::AngleAxisd(sensors.roll, Vec3::UnitX()))
                        .toRotationMatrix();

  // Leg odometry: a planted foot moves against the trunk, less the part due
  // to trunk rotation.
  std::vector<Vec2> support_velocities;
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    if (!sensors.contact[i]) continue;
    const Vec3 r = hips_[i] + sensors.foot_position[i];
    const Vec3 v = sensors.foot_velocity[i] + sensors.angular_velocity.cross(r);
    support_velocities.push_back((tilt * v).head<2>());
  }
  out_.velocity = estimator_.update(support_velocities, dt);

  const bool stabilize = settings_.stabilizer_enabled;
  const double omega = -wz_command;  // support points turn against the trunk
  Vec2 v_body = Vec2::Zero();
  AdjustAccel accel;
  out_.com_offset = 0.0;
  if (stabilize) {
    v_body = out_.velocity.velocity;
    PostureSetpoint sp;
    sp.roll = sensors.roll;
    sp.pitch = sensors.pitch;
    sp.roll_rate = sensors.angular_velocity.x();
    sp.pitch_rate = sensors.angular_velocity.y();
    accel = posture_accel(sp, settings_.posture);
    out_.com_offset = com_correction(touchdowns_, settings_.k_com).offset;
  }

  // Foot commands are planned in a gravity-levelled frame and rotated into
  // the body frame at the end.

  std::array<Vec3, 4> command{};
  std::array<Vec3, 4> command_velocity{};
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    LegMemory& mem = legs_[i];
    LegReport& report = out_.legs[i];
    const GroupPlan& plan = groups_[static_cast<int>(group_of(leg))];
    const PhaseTimeline& tl = plan.timeline;
    const LegPhase lp = phase_at(tl, t, group_of(leg));
    const Vec3& measured = sensors.foot_position[i];
    const bool contact = sensors.contact[i];

    if (contact && (!mem.contact || !mem.started)) {
      touchdowns_.record(leg, hips_[i].y() + measured.y());
    }
    mem.contact = contact;

    if (!mem.started) {
      mem.started = true;
      mem.phase = lp.phase;
      mem.entry = measured;
      mem.swing_start = measured;
      mem.last_command = measured;
      mem.lifted = !contact;
    } else if (lp.phase != mem.phase) {
      if (lp.phase == Phase::Support) {
        mem.entry = tilt * measured;
        mem.z_offset = mem.early.frozen() ? mem.last_command.z() - plan.keyframes.position[0] : 0.0;
        mem.early.on_stance_entry();
        mem.adjust.reset();
      } else if (!is_swing(mem.phase)) {
        mem.swing_start = tilt * (hips_[i] + measured) - hips_[i];
        mem.lifted = false;
      }
      mem.phase = lp.phase;
    }

    const Sample1d z = eval_z(plan.keyframes, lp.cycle_time);
    const double speed = plan.speed;
    Vec3 p;
    Vec3 v;
    double heading_time = 0.0;
    report.target_clamped = false;
    if (lp.phase == Phase::Support) {
      const double tau = lp.cycle_time;
      Vec2 adj = Vec2::Zero();
      Vec2 adj_rate = Vec2::Zero();
      if (stabilize) {
        adj = mem.adjust.step(accel, dt);
        adj_rate = mem.adjust.velocity();
      }
      const double fade = tl.support > 0.0 ? 1.0 - tau / tl.support : 0.0;
      p = Vec3(plan_support_x(mem.entry.x(), speed, tau) + adj.x(), mem.entry.y() + adj.y(),
               z.position + mem.z_offset * fade);
      v = Vec3(-speed + adj_rate.x(), adj_rate.y(),
               z.velocity - (tl.support > 0.0 ? mem.z_offset / tl.support : 0.0));
      heading_time = tau;
    } else {
      const double swing_time = lp.cycle_time - tl.support;
      const double swing_duration = tl.swing();
      const double nominal_y = lateral_sign(leg) * geometry_.hip_link;
      const SwingPlan sx = plan_swing(mem.swing_start.x(), 0.0, swing_duration, speed,
                                      stabilize ? v_body.x() : speed,
                                      tl.support, settings_.placement, out_.com_offset);
      const SwingPlan sy = plan_swing(mem.swing_start.y() - nominal_y, 0.0, swing_duration, 0.0,
                                      v_body.y(), tl.support, settings_.placement, 0.0);
      const Sample1d x = sx.curve.eval(swing_time);
      const Sample1d y = sy.curve.eval(swing_time);
      mem.lifted = mem.lifted || !contact;
      const double zc = mem.early.apply(lp.phase, contact && mem.lifted, z.position);
      p = Vec3(x.position, y.position + nominal_y, zc);
      v = Vec3(x.velocity, y.velocity, mem.early.frozen() ? 0.0 : z.velocity);
      report.target_clamped = sx.clamped || sy.clamped;
      heading_time = swing_time;
    }
    mem.last_command = p;

    if (omega != 0.0) {
      const bool support = lp.phase == Phase::Support;
      const Vec3 body = apply_heading(hips_[i] + p, omega, heading_time, support);
      const double rate = support ? omega : -omega;
      const Mat3 rot = heading_rotation((support ? 1.0 : -1.0) * omega * heading_time);
      v = rot * v + rate * Vec3::UnitZ().cross(body);
      p = body - hips_[i];
    }
    // Stance legs keep the body-frame plan (their entry point was latched
    // level). Swing legs are levelled about the trunk centre so that diagonal
    // partners reach the ground together.
    if (lp.phase == Phase::Support) {
      command[i] = p;
      command_velocity[i] = v;
    } else {
      command[i] = tilt.transpose() * (hips_[i] + p) - hips_[i];
      command_velocity[i] = tilt.transpose() * v;
    }
    report.phase = lp.phase;
    report.desired = command[i];
    report.frozen = mem.early.frozen();
  }

  // The weight is shared among the scheduled support legs (plus early
  // landers); a scheduled leg that has not reached the ground yet keeps its
  // share rather than handing it to its partner.
  int n_support = 0;
  std::array<bool, 4> loaded{};
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    loaded[i] = legs_[i].phase == Phase::Support || legs_[i].early.frozen();
    if (loaded[i]) ++n_support;
  }
  out_.support_count = n_support;
  const double comp = gravity_comp(n_support, geometry_);
  const Vec3 down = -(tilt.transpose() * Vec3::UnitZ());

  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    const VirtualGains& gains = groups_[static_cast<int>(group_of(leg))].gains;
    LegReport& report = out_.legs[i];
    if (settings_.compliance_enabled) {
      const Vec3 f = virtual_force(command[i], command_velocity[i], sensors.foot_position[i],
                                   sensors.foot_velocity[i], gains);
      report.force = compose_foot_force(f, loaded[i] ? comp : 0.0, down,
                                        jacobian(leg, sensors.joints[i], geometry_));
    } else {
      report.force = FootForceCommand{};
    }
    out_.commands[i].foot_target = command[i];
    out_.commands[i].force = report.force.desired_force;
  }
  return out_;
}

}  // namespace quadtrot
