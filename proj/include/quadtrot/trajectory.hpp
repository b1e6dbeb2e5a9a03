#pragma once

#include <array>

#include "quadtrot/gait_clock.hpp"
#include "quadtrot/kinematics.hpp"

namespace quadtrot {

/// Ballistic trunk motion between takeoff and landing.
struct FlightProfile {
  double takeoff_speed = 0.0;  // v_h1 >= 0
  double landing_speed = 0.0;  // v_h4- <= 0
  double flight_time = 0.0;    // t_FP
};

FlightProfile flight_profile(const GaitParams& params);

/// Knot values of the vertical foot trajectory at 0, t_z1, t_z2, t_z3, T.
struct ZKeyframes {
  std::array<double, 5> time{};
  std::array<double, 5> position{};
  std::array<double, 5> velocity{};

  double period() const { return time[4]; }
};

/// Throws KeyframeOrderError when retraction would end at or above the apex.
ZKeyframes synth_z_keyframes(const GaitParams& params, const PhaseTimeline& timeline);

struct Sample1d {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
};

/// Cubic Hermite on one interval, endpoint positions and velocities given.
struct HermiteSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double v0 = 0.0;
  double v1 = 0.0;

  Sample1d eval(double t) const;
};

/// Piecewise Hermite through the keyframes. t is clamped to [0, T].
Sample1d eval_z(const ZKeyframes& keyframes, double t);

/// Stance foot: moves back at the commanded speed from its entry position.
double plan_support_x(double entry_position, double speed, double t);

struct FootPlacementGains {
  double k_comp = 0.03;         // speed regulation gain, s
  double neutral_factor = 0.5;  // lambda, 1.0 is the full-stance form
  double max_offset = 0.06;     // |target| bound, m
};

struct SwingPlan {
  double target = 0.0;  // landing position
  bool clamped = false; // target hit the workspace bound
  HermiteSegment curve;
};

/// Landing position from speed feedback plus an external correction, and the
/// swing curve from (start_time, start_position, -speed) to (end_time, target, -speed).
/// `stance_duration` is t_x1. Positions are offsets from the nominal foot point.
SwingPlan plan_swing(double start_position, double start_time, double end_time,
                     double commanded_speed, double estimated_speed, double stance_duration,
                     const FootPlacementGains& gains, double correction = 0.0);

/// R_z(angle).
Mat3 heading_rotation(double angle);

/// Support points rotate by +omega*t, swing points by -omega*t, about the
/// body origin. `p` is in the body frame.
Vec3 apply_heading(const Vec3& p, double omega, double t_phase, bool is_support);

/// Steady-state foot trajectory of one leg for offline inspection: speed
/// estimate equals the command and the stance entry equals the landing target.
class FootTrajectory {
 public:
  struct Point {
    Phase phase = Phase::Support;
    Vec3 position = Vec3::Zero();  // hip frame
    Vec3 velocity = Vec3::Zero();
  };

  FootTrajectory(const GaitParams& params, const RobotGeometry& geometry, Leg leg,
                 double lateral_speed = 0.0, double neutral_factor = 0.5);

  /// Time is measured on the global clock; the leg's group offset applies.
  Point at(double t) const;

  const PhaseTimeline& timeline() const { return timeline_; }
  const ZKeyframes& keyframes() const { return keyframes_; }
  Leg leg() const { return leg_; }

 private:
  Sample1d horizontal(double cycle_time, double speed, double nominal) const;

  GaitParams params_;
  PhaseTimeline timeline_;
  ZKeyframes keyframes_;
  Leg leg_;
  double lateral_speed_;
  double neutral_factor_;
  double nominal_y_;
};

}  // namespace quadtrot
