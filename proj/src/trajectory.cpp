#include "quadtrot/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "quadtrot/errors.hpp"

namespace quadtrot {

FlightProfile flight_profile(const GaitParams& p) {
  FlightProfile out;
  out.takeoff_speed = p.forward_speed / p.c1;
  out.landing_speed =
      -std::sqrt(out.takeoff_speed * out.takeoff_speed + 2.0 * p.gravity * p.support_descent);
  out.flight_time = (out.takeoff_speed - out.landing_speed) / p.gravity;
  return out;
}

ZKeyframes synth_z_keyframes(const GaitParams& p, const PhaseTimeline& tl) {
  const FlightProfile flight = flight_profile(p);
  const double thrust_speed = -p.forward_speed / p.c1;  // v_z1, foot driven down

  ZKeyframes k;
  for (int i = 0; i < 5; ++i) k.time[i] = tl.knot_time(i);

  k.position[0] = p.landing_height;
  k.position[1] = p.landing_height - p.support_descent;
  k.position[2] = p.landing_height - p.support_descent +
                  (p.c4 * p.c4 - 1.0) * p.forward_speed * p.forward_speed /
                      (2.0 * std::abs(p.c3) * p.gravity * p.c1 * p.c1);
  k.position[3] = p.landing_height + p.swing_height;
  k.position[4] = p.landing_height;

  k.velocity[0] = p.c2 * flight.landing_speed;
  k.velocity[1] = thrust_speed;
  k.velocity[2] = p.c4 * thrust_speed;
  k.velocity[3] = 0.0;
  k.velocity[4] = k.velocity[0];

  if (!(k.position[2] < k.position[3])) {
    throw KeyframeOrderError("retraction ends at or above the swing apex");
  }
  return k;
}

Sample1d HermiteSegment::eval(double t) const {
  const double h = t1 - t0;
  if (!(h > 0.0)) return {p1, v1, 0.0};
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  Sample1d out;
  out.position = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * h * v0 + (-2 * s3 + 3 * s2) * p1 +
                 (s3 - s2) * h * v1;
  out.velocity = ((6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * h * v0 + (-6 * s2 + 6 * s) * p1 +
                  (3 * s2 - 2 * s) * h * v1) /
                 h;
  out.acceleration = ((12 * s - 6) * p0 + (6 * s - 4) * h * v0 + (-12 * s + 6) * p1 +
                      (6 * s - 2) * h * v1) /
                     (h * h);
  return out;
}

Sample1d eval_z(const ZKeyframes& k, double t) {
  t = std::clamp(t, k.time[0], k.time[4]);
  int seg = 3;
  for (int i = 0; i < 4; ++i) {
    if (t < k.time[i + 1]) {
      seg = i;
      break;
    }
  }
  // Zero-length segments (no retraction at zero speed) are skipped by the search.
  const HermiteSegment h{k.time[seg], k.time[seg + 1], k.position[seg], k.position[seg + 1],
                         k.velocity[seg], k.velocity[seg + 1]};
  return h.eval(t);
}

double plan_support_x(double entry_position, double speed, double t) {
  return entry_position - speed * t;
}

SwingPlan plan_swing(double start_position, double start_time, double end_time,
                     double commanded_speed, double estimated_speed, double stance_duration,
                     const FootPlacementGains& gains, double correction) {
  SwingPlan out;
  double target = gains.neutral_factor * estimated_speed * stance_duration +
                  gains.k_comp * (estimated_speed - commanded_speed) + correction;
  if (std::abs(target) > gains.max_offset) {
    target = std::copysign(gains.max_offset, target);
    out.clamped = true;
  }
  out.target = target;
  out.curve = {start_time, end_time, start_position, target, -commanded_speed, -commanded_speed};
  return out;
}

Mat3 heading_rotation(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

Vec3 apply_heading(const Vec3& p, double omega, double t_phase, bool is_support) {
  const double angle = (is_support ? 1.0 : -1.0) * omega * t_phase;
  return heading_rotation(angle) * p;
}

FootTrajectory::FootTrajectory(const GaitParams& params, const RobotGeometry& geometry, Leg leg,
                               double lateral_speed, double neutral_factor)
    : params_(params),
      timeline_(derive_timeline(params)),
      keyframes_(synth_z_keyframes(params, timeline_)),
      leg_(leg),
      lateral_speed_(lateral_speed),
      neutral_factor_(neutral_factor),
      nominal_y_(lateral_sign(leg) * geometry.hip_link) {}

Sample1d FootTrajectory::horizontal(double cycle_time, double speed, double nominal) const {
  const double stance = timeline_.support;
  const double entry = neutral_factor_ * speed * stance;
  if (cycle_time < stance) {
    return {nominal + plan_support_x(entry, speed, cycle_time), -speed, 0.0};
  }
  FootPlacementGains gains;
  gains.neutral_factor = neutral_factor_;
  gains.max_offset = 1e9;
  const SwingPlan swing = plan_swing(entry - speed * stance, stance, timeline_.period, speed,
                                     speed, stance, gains);
  Sample1d s = swing.curve.eval(cycle_time);
  s.position += nominal;
  return s;
}

FootTrajectory::Point FootTrajectory::at(double t) const {
  const LegPhase lp = phase_at(timeline_, t, group_of(leg_));
  const Sample1d x = horizontal(lp.cycle_time, params_.forward_speed, 0.0);
  const Sample1d y = horizontal(lp.cycle_time, lateral_speed_, nominal_y_);
  const Sample1d z = eval_z(keyframes_, lp.cycle_time);
  return {lp.phase, Vec3(x.position, y.position, z.position),
          Vec3(x.velocity, y.velocity, z.velocity)};
}

}  // namespace quadtrot
