#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quadtrot/kinematics.hpp"

namespace quadtrot {

/// The ten foot-trajectory control variables plus gravity.
struct GaitParams {
  double step_frequency = 2.9;    // f, Hz
  double forward_speed = 1.0;     // v_x, m/s
  double landing_height = -0.14;  // z_s, foot z at touchdown (hip frame)
  double swing_height = 0.04;     // h_wa, swing apex above z_s
  double support_descent = 0.005; // h_sd, stance extension
  double c1 = 4.0;   // v_x1 / v_z1
  double c2 = -0.1;  // v_z0 / v_h4-
  double c3 = -3.0;  // retraction acceleration / g
  double c4 = -4.5;  // v_z2 / v_z1
  double c5 = 0.2;   // dt_z3 / (dt_z3 + dt_z4)
  double gravity = 9.81;

  double period() const { return 1.0 / step_frequency; }
};

struct Violation {
  std::string field;
  std::string bound;
  double value = 0.0;

  std::string describe() const;
};

/// Range checks on every field; an empty result means the set is usable.
std::vector<Violation> validate(const GaitParams& params);

struct PhaseTimeline {
  double period = 0.0;      // T
  double support = 0.0;     // dt_z1
  double retract = 0.0;     // dt_z2
  double swing_up = 0.0;    // dt_z3
  double swing_down = 0.0;  // dt_z4
  double flight = 0.0;      // t_FP

  double swing() const { return period - support; }
  /// Cycle start of a group: L at 0, R at T/2.
  double group_offset(LegGroup group) const { return group == LegGroup::L ? 0.0 : 0.5 * period; }
  /// t_z1 .. t_z3, and T.
  double knot_time(int i) const;
};

/// Throws InfeasibleError when no stance time or no swing time remains.
/// Validation is the caller's job.
PhaseTimeline derive_timeline(const GaitParams& params);

enum class Phase : int { Support = 0, Retract = 1, SwingUp = 2, SwingDown = 3 };

std::string_view phase_name(Phase phase);
bool parse_phase(std::string_view text, Phase* out);
constexpr bool is_swing(Phase p) { return p != Phase::Support; }

struct LegPhase {
  Phase phase = Phase::Support;
  double local_time = 0.0;  // time since the phase began
  double cycle_time = 0.0;  // time since this group's cycle began, in [0, T)
  long cycle = 0;           // index of this group's cycle
};

LegPhase phase_at(const PhaseTimeline& timeline, double t, LegGroup group);

double planned_duty_factor(const PhaseTimeline& timeline);

/// Allometric trotting frequency (Hz) and speed (m/s) for a body mass in kg.
double preferred_frequency(double mass);
double preferred_speed(double mass);

}  // namespace quadtrot
