#pragma once

#include "quadtrot/kinematics.hpp"

namespace quadtrot {

struct VirtualGains {
  Vec3 kp = Vec3::Zero();  // N/m per axis
  Vec3 kd = Vec3::Zero();  // N*s/m per axis
};

/// Spring-damper between desired and actual foot states, same frame.
/// The result is the force the foot applies to its surroundings.
Vec3 virtual_force(const Vec3& p_desired, const Vec3& v_desired, const Vec3& p_actual,
                   const Vec3& v_actual, const VirtualGains& gains);

struct ComplianceTuning {
  double effective_mass = 0.0;  // m_s
  double damping_ratio = 0.0;   // zeta
  double natural_frequency = 0.0;  // omega_n, rad/s
  double damped_frequency = 0.0;   // omega_d, rad/s
};

struct VerticalGains {
  double kp = 0.0;
  double kd = 0.0;
  ComplianceTuning tuning;
};

/// Chooses k_p,z and k_d,z so the loaded leg's half oscillation lasts
/// exactly `support_duration`: omega_d = pi / support_duration.
VerticalGains tune_vertical_gains(double support_duration, double effective_mass,
                                  double damping_ratio);

/// x/y gains are the vertical ones scaled by `xy_scale`.
VirtualGains leg_gains(const VerticalGains& vertical, double xy_scale);

/// Weight share per support foot (N, >= 0). Zero in flight.
double gravity_comp(int n_support, const RobotGeometry& geometry);

/// tau = J^T F.
Vec3 map_to_torques(const Mat3& jacobian, const Vec3& force);

struct FootForceCommand {
  Vec3 virtual_force = Vec3::Zero();
  double gravity_comp = 0.0;
  // virtual force with the compensation pushing down on the ground
  Vec3 desired_force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

FootForceCommand compose_foot_force(const Vec3& virtual_force, double gravity_comp,
                                    const Mat3& jacobian);

/// Same, with the compensation along `down` (unit vector, leg frame) instead
/// of the leg's -z axis. Used to keep it vertical when the trunk is tilted.
FootForceCommand compose_foot_force(const Vec3& virtual_force, double gravity_comp,
                                    const Vec3& down, const Mat3& jacobian);

}  // namespace quadtrot
