#include "quadtrot/compliance.hpp"

#include <cmath>

namespace quadtrot {

Vec3 virtual_force(const Vec3& p_desired, const Vec3& v_desired, const Vec3& p_actual,
                   const Vec3& v_actual, const VirtualGains& gains) {
  return gains.kp.cwiseProduct(p_desired - p_actual) + gains.kd.cwiseProduct(v_desired - v_actual);
}

VerticalGains tune_vertical_gains(double support_duration, double effective_mass,
                                  double damping_ratio) {
  VerticalGains out;
  ComplianceTuning& t = out.tuning;
  t.effective_mass = effective_mass;
  t.damping_ratio = damping_ratio;
  t.damped_frequency = M_PI / support_duration;
  t.natural_frequency = t.damped_frequency / std::sqrt(1.0 - damping_ratio * damping_ratio);
  out.kp = effective_mass * t.natural_frequency * t.natural_frequency;
  out.kd = 2.0 * damping_ratio * std::sqrt(out.kp * effective_mass);
  return out;
}

VirtualGains leg_gains(const VerticalGains& vertical, double xy_scale) {
  VirtualGains g;
  g.kp = Vec3(xy_scale * vertical.kp, xy_scale * vertical.kp, vertical.kp);
  g.kd = Vec3(xy_scale * vertical.kd, xy_scale * vertical.kd, vertical.kd);
  return g;
}

double gravity_comp(int n_support, const RobotGeometry& geometry) {
  if (n_support <= 0) return 0.0;
  return geometry.weight() / static_cast<double>(n_support);
}

Vec3 map_to_torques(const Mat3& jacobian, const Vec3& force) { return jacobian.transpose() * force; }

FootForceCommand compose_foot_force(const Vec3& virtual_force, double gravity_comp,
                                    const Mat3& jacobian) {
  return compose_foot_force(virtual_force, gravity_comp, -Vec3::UnitZ(), jacobian);
}

FootForceCommand compose_foot_force(const Vec3& virtual_force, double gravity_comp,
                                    const Vec3& down, const Mat3& jacobian) {
  FootForceCommand out;
  out.virtual_force = virtual_force;
  out.gravity_comp = gravity_comp;
  out.desired_force = virtual_force + gravity_comp * down;
  out.torque = map_to_torques(jacobian, out.desired_force);
  return out;
}

}  // namespace quadtrot
