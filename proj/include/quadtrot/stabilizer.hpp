#pragma once

#include <array>
#include <optional>
#include <span>

#include "quadtrot/gait_clock.hpp"
#include "quadtrot/kinematics.hpp"

namespace quadtrot {

struct PostureSetpoint {
  double roll_desired = 0.0;
  double pitch_desired = 0.0;
  double roll_rate_desired = 0.0;
  double pitch_rate_desired = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double roll_rate = 0.0;
  double pitch_rate = 0.0;
};

/// Acceleration gains: rad -> m/s^2 and rad/s -> m/s^2.
struct PostureGains {
  double kp_pitch = 2.0;
  double kd_pitch = 0.1;
  double kp_roll = 2.0;
  double kd_roll = 0.1;
  double com_height = 0.14;
  double max_offset = 0.02;  // p_adj_max, m
};

/// Horizontal foot acceleration relative to the trunk, shared by all support feet.
struct AdjustAccel {
  double x = 0.0;
  double y = 0.0;
};

/// Positive pitch error drives the support feet toward +x. Roll uses the
/// same PD law with the sign that produces a restoring torque about x,
/// so a positive roll error drives the feet toward -y.
AdjustAccel posture_accel(const PostureSetpoint& setpoint, const PostureGains& gains);

/// Double integrator from adjustment acceleration to a foot offset, clamped
/// per axis and reset at every stance entry.
class AdjustIntegrator {
 public:
  explicit AdjustIntegrator(double max_offset = 0.02) : max_offset_(max_offset) {}

  void reset();
  /// Trapezoidal on both integrations. Returns the offset after the step.
  Vec2 step(const AdjustAccel& accel, double dt);

  const Vec2& offset() const { return offset_; }
  const Vec2& velocity() const { return velocity_; }
  bool clamped() const { return clamped_; }

 private:
  double max_offset_;
  Vec2 offset_ = Vec2::Zero();
  Vec2 velocity_ = Vec2::Zero();
  Vec2 last_accel_ = Vec2::Zero();
  bool clamped_ = false;
};

/// Latest lateral touchdown position of each foot, body frame.
class TouchdownLog {
 public:
  void record(Leg leg, double y) { y_[index(leg)] = y; }
  std::optional<double> y(Leg leg) const { return y_[index(leg)]; }
  bool complete() const;

 private:
  std::array<std::optional<double>, 4> y_{};
};

struct ComCorrection {
  double offset = 0.0;  // added to the x landing target
  bool insufficient_history = false;
};

/// k_com * (y_lh - y_lf + y_rf - y_rh). Zero until every foot has landed once.
ComCorrection com_correction(const TouchdownLog& log, double k_com);

struct VelocityEstimate {
  Vec2 velocity = Vec2::Zero();
  bool stale = false;
};

/// No-slip velocity estimate from support-foot velocities in the body frame,
/// through a first-order low-pass filter. Holds during flight.
class VelocityEstimator {
 public:
  explicit VelocityEstimator(double cutoff_hz = 10.0) : cutoff_hz_(cutoff_hz) {}

  VelocityEstimate update(std::span<const Vec2> support_foot_velocities, double dt);
  const VelocityEstimate& estimate() const { return estimate_; }
  void reset(const Vec2& velocity = Vec2::Zero());
  double time_constant() const;

 private:
  double cutoff_hz_;
  VelocityEstimate estimate_;
};

/// Holds the z command of a swing leg that touched down before its scheduled
/// stance. Release happens at the next stance entry.
class EarlyTouchdown {
 public:
  double apply(Phase phase, bool contact, double z_command);
  void on_stance_entry() { frozen_.reset(); }
  bool frozen() const { return frozen_.has_value(); }

 private:
  std::optional<double> frozen_;
};

}  // namespace quadtrot
