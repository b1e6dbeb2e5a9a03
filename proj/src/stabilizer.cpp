#include "quadtrot/stabilizer.hpp"

#include <algorithm>
#include <cmath>

namespace quadtrot {

AdjustAccel posture_accel(const PostureSetpoint& s, const PostureGains& g) {
  AdjustAccel out;
  out.x = g.kp_pitch * (s.pitch_desired - s.pitch) + g.kd_pitch * (s.pitch_rate_desired - s.pitch_rate);
  out.y = -(g.kp_roll * (s.roll_desired - s.roll) + g.kd_roll * (s.roll_rate_desired - s.roll_rate));
  return out;
}

void AdjustIntegrator::reset() {
  offset_.setZero();
  velocity_.setZero();
  last_accel_.setZero();
  clamped_ = false;
}

Vec2 AdjustIntegrator::step(const AdjustAccel& accel, double dt) {
  const Vec2 a(accel.x, accel.y);
  const Vec2 v_next = velocity_ + 0.5 * dt * (last_accel_ + a);
  offset_ += 0.5 * dt * (velocity_ + v_next);
  velocity_ = v_next;
  last_accel_ = a;
  clamped_ = false;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(offset_[i]) > max_offset_) {
      offset_[i] = std::copysign(max_offset_, offset_[i]);
      // no further push into the bound
      if (velocity_[i] * offset_[i] > 0.0) velocity_[i] = 0.0;
      clamped_ = true;
    }
  }
  return offset_;
}

bool TouchdownLog::complete() const {
  return std::all_of(y_.begin(), y_.end(), [](const auto& v) { return v.has_value(); });
}

ComCorrection com_correction(const TouchdownLog& log, double k_com) {
  if (!log.complete()) return {0.0, true};
  const double lf = *log.y(Leg::LF);
  const double rf = *log.y(Leg::RF);
  const double lh = *log.y(Leg::LH);
  const double rh = *log.y(Leg::RH);
  return {k_com * (lh - lf + rf - rh), false};
}

double VelocityEstimator::time_constant() const { return 1.0 / (2.0 * M_PI * cutoff_hz_); }

void VelocityEstimator::reset(const Vec2& velocity) {
  estimate_.velocity = velocity;
  estimate_.stale = false;
}

VelocityEstimate VelocityEstimator::update(std::span<const Vec2> feet, double dt) {
  if (feet.empty()) {
    estimate_.stale = true;
    return estimate_;
  }
  Vec2 raw = Vec2::Zero();
  for (const Vec2& v : feet) raw -= v;
  raw /= static_cast<double>(feet.size());
  const double alpha = 1.0 - std::exp(-dt / time_constant());
  estimate_.velocity += alpha * (raw - estimate_.velocity);
  estimate_.stale = false;
  return estimate_;
}

double EarlyTouchdown::apply(Phase phase, bool contact, double z_command) {
  if (phase == Phase::Support) {
    frozen_.reset();
    return z_command;
  }
  if (!frozen_ && contact && (phase == Phase::SwingDown || phase == Phase::SwingUp)) {
    frozen_ = z_command;
  }
  return frozen_ ? *frozen_ : z_command;
}

}  // namespace quadtrot
