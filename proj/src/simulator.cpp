#include "quadtrot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadtrot/errors.hpp"

namespace quadtrot {
namespace {

constexpr double kMaxPosition = 100.0;
constexpr double kMaxVelocity = 100.0;
constexpr double kMaxAngularVelocity = 1000.0;

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

Vec3 contact_force(double penetration, double penetration_rate, const Vec2& tangential_velocity,
                   const ContactParams& params) {
  if (!(penetration > 0.0)) return Vec3::Zero();
  const double normal =
      std::max(0.0, params.stiffness * penetration + params.damping * penetration_rate);
  Vec2 slip = tangential_velocity / params.reg_velocity;
  const double n = slip.norm();
  if (n > 1.0) slip /= n;
  const Vec2 tangential = -params.friction * normal * slip;
  return {tangential.x(), tangential.y(), normal};
}

Vec3 apply_disturbance(const Disturbance& d, double t) {
  if (!d.active(t) || !(d.duration > 0.0)) return Vec3::Zero();
  return d.impulse / d.duration;
}

void SimConfig::validate() const {
  std::vector<std::string> bad;
  if (!(dt > 0.0 && dt <= 5e-3)) bad.push_back("sim.dt in (0, 5e-3]");
  if (!(duration > 0.0)) bad.push_back("sim.duration>0");
  if (!(contact.stiffness > 0.0)) bad.push_back("sim.kn>0");
  if (!(contact.damping >= 0.0)) bad.push_back("sim.dn>=0");
  if (!(contact.friction >= 0.0)) bad.push_back("sim.mu>=0");
  if (!(contact.reg_velocity > 0.0)) bad.push_back("sim.vreg>0");
  if (!(swing_lag > 0.0)) bad.push_back("sim.swing_lag>0");
  if (!(noise_sigma >= 0.0)) bad.push_back("sim.noise_sigma>=0");
  Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
  if (!((inertia - inertia.transpose()).norm() < 1e-12 && eig.eigenvalues().minCoeff() > 0.0)) {
    bad.push_back("trunk inertia positive definite");
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

Mat3 cuboid_inertia(double mass, double length, double width, double height) {
  const double k = mass / 12.0;
  return Vec3(k * (width * width + height * height), k * (length * length + height * height),
              k * (length * length + width * width))
      .asDiagonal();
}

Vec3 quaternion_to_rpy(const Quat& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  const double roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
  const double pitch = std::asin(std::clamp(2.0 * (w * y - z * x), -1.0, 1.0));
  const double yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
  return {roll, pitch, yaw};
}

Simulator::Simulator(RobotGeometry geometry, SimConfig config)
    : geometry_(geometry), config_(std::move(config)), rng_(config_.seed) {
  geometry_.validate();
  config_.validate();
  inertia_inv_ = config_.inertia.inverse();
  for (Leg leg : kAllLegs) hips_[index(leg)] = hip_origin(leg, geometry_).position;
}

WorldState Simulator::standing(double height) const {
  WorldState w;
  w.position = Vec3(0.0, 0.0, height);
  for (Leg leg : kAllLegs) {
    LegState& ls = w.legs[index(leg)];
    ls.foot_body = hips_[index(leg)] + Vec3(0.0, lateral_sign(leg) * geometry_.hip_link, -height);
    ls.foot_world = w.position + ls.foot_body;
    ls.foot_world.z() = 0.0;
    ls.anchor = ls.foot_world;
    ls.contact = true;
  }
  return w;
}

void Simulator::step_massless(WorldState& next, const WorldState& world,
                              const LegCommands& commands, Vec3& force,
                              Vec3& torque_world) const {
  const Mat3 R = world.rotation();
  const ContactParams& cp = config_.contact;
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    LegState& ls = next.legs[i];
    ls.ground_force.setZero();
    if (!world.legs[i].contact) continue;

    // The massless leg passes the commanded foot force straight through.
    Vec3 reaction = -(R * commands[i].force);
    const Vec3 target_world = world.position + R * (hips_[i] + commands[i].foot_target);
    if (reaction.z() <= 0.0 && target_world.z() > 0.0) {
      ls.contact = false;  // liftoff: the leg pulls the foot up
      continue;
    }
    reaction.z() = std::max(0.0, reaction.z());
    Vec2 tangential = reaction.head<2>();
    const double limit = cp.friction * reaction.z();
    if (tangential.norm() > limit) tangential *= limit / tangential.norm();
    reaction.head<2>() = tangential;
    ls.ground_force = reaction;
    force += reaction;
    torque_world += (world.legs[i].anchor - world.position).cross(reaction);
  }
}

void Simulator::step_kinematic(WorldState& next, const WorldState& world, const LegCommands&,
                               Vec3& force, Vec3& torque_world) const {
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    const LegState& ls = world.legs[i];
    const Vec3 f = contact_force(-ls.foot_world.z(), -ls.foot_world_velocity.z(),
                                 ls.foot_world_velocity.head<2>(), config_.contact);
    next.legs[i].ground_force = f;
    force += f;
    torque_world += (ls.foot_world - world.position).cross(f);
  }
}

void Simulator::trunk_ground_contact(const WorldState& world, Vec3& force,
                                     Vec3& torque_world) const {
  const Mat3 R = world.rotation();
  const Vec3 omega_world = R * world.angular_velocity;
  const double hx = 0.5 * geometry_.body_length;
  const double hy = 0.5 * geometry_.shoulder_width;
  const double hz = 0.5 * config_.trunk_height;
  for (int corner = 0; corner < 8; ++corner) {
    const Vec3 local((corner & 1) ? hx : -hx, (corner & 2) ? hy : -hy, (corner & 4) ? hz : -hz);
    const Vec3 r = R * local;
    const Vec3 p = world.position + r;
    if (p.z() >= 0.0) continue;
    const Vec3 v = world.velocity + omega_world.cross(r);
    const Vec3 f = contact_force(-p.z(), -v.z(), v.head<2>(), config_.contact);
    force += f;
    torque_world += r.cross(f);
  }
}

WorldState Simulator::step(const WorldState& world, const LegCommands& commands,
                           const std::vector<Disturbance>& disturbances) const {
  const double dt = config_.dt;
  const double m = geometry_.mass;
  WorldState next = world;

  Vec3 force(0.0, 0.0, -m * geometry_.gravity);
  Vec3 torque_world = Vec3::Zero();
  if (config_.mode == PlantMode::MasslessLeg) {
    step_massless(next, world, commands, force, torque_world);
  } else {
    step_kinematic(next, world, commands, force, torque_world);
  }
  trunk_ground_contact(world, force, torque_world);

  const Mat3 R = world.rotation();
  for (const Disturbance& d : disturbances) {
    const Vec3 f = apply_disturbance(d, world.time);
    if (f.isZero(0.0)) continue;
    force += f;
    torque_world += (R * d.point_body).cross(f);
  }

  // Semi-implicit Euler on the trunk.
  next.velocity = world.velocity + dt * force / m;
  next.position = world.position + dt * next.velocity;
  const Vec3& w = world.angular_velocity;
  const Vec3 torque_body = R.transpose() * torque_world;
  const Vec3 alpha = inertia_inv_ * (torque_body - w.cross(config_.inertia * w));
  next.angular_velocity = w + dt * alpha;
  const Vec3 rot = dt * next.angular_velocity;
  const double angle = rot.norm();
  if (angle > 0.0) {
    next.orientation = world.orientation * Quat(Eigen::AngleAxisd(angle, rot / angle));
  }
  next.orientation.normalize();
  next.time = world.time + dt;
  next.tick = world.tick + 1;

  // Feet follow the new trunk pose.
  const Mat3 Rn = next.rotation();
  const double lag = 1.0 - std::exp(-dt / config_.swing_lag);
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    LegState& ls = next.legs[i];
    const LegState& prev = world.legs[i];
    const Vec3 target_body = hips_[i] + commands[i].foot_target;
    if (config_.mode == PlantMode::MasslessLeg && ls.contact) {
      ls.foot_world = ls.anchor;
      ls.foot_body = Rn.transpose() * (ls.anchor - next.position);
    } else {
      ls.foot_body = prev.foot_body + lag * (target_body - prev.foot_body);
      ls.foot_world = next.position + Rn * ls.foot_body;
      if (config_.mode == PlantMode::MasslessLeg) {
        if (ls.foot_world.z() <= 0.0) {
          ls.contact = true;
          ls.anchor = Vec3(ls.foot_world.x(), ls.foot_world.y(), 0.0);
          ls.foot_world = ls.anchor;
          ls.foot_body = Rn.transpose() * (ls.anchor - next.position);
        }
      } else {
        ls.contact = ls.foot_world.z() <= 0.0;
      }
    }
    ls.foot_body_velocity = (ls.foot_body - prev.foot_body) / dt;
    ls.foot_world_velocity = (ls.foot_world - prev.foot_world) / dt;
  }

  const bool sane = finite(next.position) && finite(next.velocity) &&
                    finite(next.angular_velocity) && next.orientation.coeffs().allFinite() &&
                    next.position.cwiseAbs().maxCoeff() <= kMaxPosition &&
                    next.velocity.cwiseAbs().maxCoeff() <= kMaxVelocity &&
                    next.angular_velocity.cwiseAbs().maxCoeff() <= kMaxAngularVelocity;
  if (!sane) throw NumericalDivergence("trunk state left sanity bounds", next.tick);
  return next;
}

SensorSample Simulator::readout(const WorldState& world) {
  SensorSample s;
  const Vec3 rpy = quaternion_to_rpy(world.orientation);
  s.roll = rpy.x();
  s.pitch = rpy.y();
  s.yaw = rpy.z();
  s.angular_velocity = world.angular_velocity;
  if (config_.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, config_.noise_sigma);
    s.roll += noise(rng_);
    s.pitch += noise(rng_);
    s.yaw += noise(rng_);
    for (int k = 0; k < 3; ++k) s.angular_velocity[k] += noise(rng_);
  }
  for (Leg leg : kAllLegs) {
    const int i = index(leg);
    const LegState& ls = world.legs[i];
    s.contact[i] = ls.contact;
    s.foot_position[i] = ls.foot_body - hips_[i];
    s.foot_velocity[i] = ls.foot_body_velocity;
    bool projected = false;
    const Vec3 reachable = project_to_workspace(leg, s.foot_position[i], geometry_, &projected);
    s.joints[i] = ik_leg(leg, reachable, geometry_).q;
    s.joint_projected[i] = projected;
  }
  s.true_velocity = world.velocity;
  s.true_position = world.position;
  return s;
}

double Simulator::mechanical_energy(const WorldState& world) const {
  const double m = geometry_.mass;
  const Vec3& w = world.angular_velocity;
  double e = 0.5 * m * world.velocity.squaredNorm() + 0.5 * w.dot(config_.inertia * w) +
             m * geometry_.gravity * world.position.z();
  if (config_.mode == PlantMode::KinematicFoot) {
    for (const LegState& ls : world.legs) {
      const double depth = std::max(0.0, -ls.foot_world.z());
      e += 0.5 * config_.contact.stiffness * depth * depth;
    }
  }
  return e;
}

}  // namespace quadtrot
