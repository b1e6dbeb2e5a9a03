#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "quadtrot/kinematics.hpp"

namespace quadtrot {

using Quat = Eigen::Quaterniond;

struct ContactParams {
  double stiffness = 5000.0;  // k_n, N/m
  double damping = 50.0;      // d_n, N*s/m
  double friction = 0.8;      // mu
  double reg_velocity = 0.01; // tangential regularization, m/s
};

/// Penalty normal force plus regularized Coulomb friction. `penetration` is
/// depth below the ground (>0 in contact), `penetration_rate` its time
/// derivative, `tangential_velocity` the foot's ground-plane velocity.
Vec3 contact_force(double penetration, double penetration_rate, const Vec2& tangential_velocity,
                   const ContactParams& params);

struct Disturbance {
  Vec3 impulse = Vec3::Zero();    // kg*m/s, world frame
  double start = 0.0;
  double duration = 0.05;
  Vec3 point_body = Vec3::Zero(); // application point, body frame

  bool active(double t) const { return t >= start && t < start + duration; }
};

/// Constant force impulse/duration inside the window, zero outside.
Vec3 apply_disturbance(const Disturbance& disturbance, double t);

enum class PlantMode { MasslessLeg, KinematicFoot };

struct SimConfig {
  double dt = 1e-3;
  double duration = 10.0;
  Mat3 inertia = Mat3::Identity();  // trunk, body frame
  PlantMode mode = PlantMode::MasslessLeg;
  ContactParams contact;
  double swing_lag = 0.005;      // first-order foot tracking time constant, s
  double trunk_height = 0.06;    // trunk box height for inertia and ground contact
  double noise_sigma = 0.0;      // IMU noise, rad and rad/s
  std::uint64_t seed = 1;

  /// Throws ValidationError.
  void validate() const;
};

/// Solid cuboid about its centre.
Mat3 cuboid_inertia(double mass, double length, double width, double height);

struct LegState {
  Vec3 foot_world = Vec3::Zero();
  Vec3 foot_world_velocity = Vec3::Zero();
  Vec3 foot_body = Vec3::Zero();          // relative to trunk CoM, body axes
  Vec3 foot_body_velocity = Vec3::Zero(); // d/dt of foot_body
  Vec3 anchor = Vec3::Zero();             // stance foothold (massless-leg mode)
  Vec3 ground_force = Vec3::Zero();       // ground on foot, world frame
  bool contact = false;
};

struct WorldState {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 velocity = Vec3::Zero();          // world frame
  Vec3 angular_velocity = Vec3::Zero();  // body frame
  std::array<LegState, 4> legs{};
  double time = 0.0;
  long tick = 0;

  Mat3 rotation() const { return orientation.toRotationMatrix(); }
};

struct LegCommand {
  Vec3 foot_target = Vec3::Zero();  // hip frame
  Vec3 force = Vec3::Zero();        // desired foot force, hip frame
};

using LegCommands = std::array<LegCommand, 4>;

struct SensorSample {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  Vec3 angular_velocity = Vec3::Zero();  // body frame
  std::array<bool, 4> contact{};
  std::array<Vec3, 4> foot_position{};  // hip frame
  std::array<Vec3, 4> foot_velocity{};  // hip frame, body-relative
  std::array<JointAngles, 4> joints{};
  std::array<bool, 4> joint_projected{};
  Vec3 true_velocity = Vec3::Zero();  // world frame, ablation only
  Vec3 true_position = Vec3::Zero();
};

/// ZYX roll, pitch, yaw of a unit quaternion.
Vec3 quaternion_to_rpy(const Quat& q);

class Simulator {
 public:
  Simulator(RobotGeometry geometry, SimConfig config);

  /// All feet on the ground directly below their nominal stance points,
  /// trunk level at `height`, at rest.
  WorldState standing(double height) const;

  /// One semi-implicit Euler step. Throws NumericalDivergence.
  WorldState step(const WorldState& world, const LegCommands& commands,
                  const std::vector<Disturbance>& disturbances = {}) const;

  /// Sensor sample; the RNG only advances when noise is enabled.
  SensorSample readout(const WorldState& world);

  const RobotGeometry& geometry() const { return geometry_; }
  const SimConfig& config() const { return config_; }
  double mechanical_energy(const WorldState& world) const;

 private:
  void step_massless(WorldState& next, const WorldState& world, const LegCommands& commands,
                     Vec3& force, Vec3& torque_world) const;
  void step_kinematic(WorldState& next, const WorldState& world, const LegCommands& commands,
                      Vec3& force, Vec3& torque_world) const;
  void trunk_ground_contact(const WorldState& world, Vec3& force, Vec3& torque_world) const;

  RobotGeometry geometry_;
  SimConfig config_;
  Mat3 inertia_inv_;
  std::array<Vec3, 4> hips_;
  std::mt19937_64 rng_;
};

}  // namespace quadtrot
