#pragma once

#include <array>
#include <string_view>

#include <Eigen/Dense>

namespace quadtrot {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Trunk and leg dimensions. Defaults are those of the 1.9 kg Billy robot.
struct RobotGeometry {
  double body_length = 0.167;     // L, fore/hind hip spacing
  double shoulder_width = 0.162;  // W1, fore hip spacing
  double hip_width = 0.142;       // W2, hind hip spacing
  double hip_link = 0.046;        // a1
  double thigh = 0.066;           // a2
  double crus = 0.065;            // a3
  double mass = 1.9;
  double gravity = 9.81;

  /// Throws ValidationError if any dimension, the mass or gravity is not positive.
  void validate() const;
  double leg_reach() const { return hip_link + thigh + crus; }
  double weight() const { return mass * gravity; }
};

// Numbering follows the usual LF=1, RF=2, LH=3, RH=4 convention; the
// enumerator values are zero based so they index arrays directly.
enum class Leg : int { LF = 0, RF = 1, LH = 2, RH = 3 };
enum class LegGroup : int { L = 0, R = 1 };

inline constexpr std::array<Leg, 4> kAllLegs = {Leg::LF, Leg::RF, Leg::LH, Leg::RH};

constexpr int index(Leg leg) { return static_cast<int>(leg); }
constexpr int leg_number(Leg leg) { return static_cast<int>(leg) + 1; }
constexpr bool is_left(Leg leg) { return leg == Leg::LF || leg == Leg::LH; }
constexpr bool is_fore(Leg leg) { return leg == Leg::LF || leg == Leg::RF; }
/// +1 for left legs, -1 for right legs.
constexpr double lateral_sign(Leg leg) { return is_left(leg) ? 1.0 : -1.0; }
/// Diagonal pairs: L = {LF, RH}, R = {RF, LH}.
constexpr LegGroup group_of(Leg leg) {
  return (leg == Leg::LF || leg == Leg::RH) ? LegGroup::L : LegGroup::R;
}
std::string_view leg_name(Leg leg);

enum class Frame { Body, Hip };

struct FootPoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Frame frame = Frame::Hip;
};

/// Roll about +x, then hip and knee pitch. Positive pitch swings the foot
/// toward +x.
struct JointAngles {
  double roll = 0.0;
  double hip_pitch = 0.0;
  double knee_pitch = 0.0;

  Vec3 as_vector() const { return {roll, hip_pitch, knee_pitch}; }
  static JointAngles from_vector(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

struct JointLimits {
  double roll = 1.5707963267948966;  // symmetric bound, rad
  double pitch = 3.141592653589793;

  bool contains(const JointAngles& q) const;
};

/// Attachment point of a leg, expressed in the body frame.
FootPoint hip_origin(Leg leg, const RobotGeometry& geometry);

/// Foot position in the leg's hip frame. Zero pose is the straight leg
/// hanging down with the hip link pointing laterally outward.
FootPoint fk_foot(Leg leg, const JointAngles& q, const RobotGeometry& geometry);

struct IkSolution {
  JointAngles q;
  // Knee within 1e-6 rad of full extension.
  bool near_singular = false;
};

/// Knee-backward branch (knee pitch >= 0). Throws UnreachableError when the
/// target is outside the workspace.
IkSolution ik_leg(Leg leg, const Vec3& p_hip, const RobotGeometry& geometry);

/// Closest point to `p_hip` that ik_leg accepts. Sets `projected` when the
/// point had to move.
Vec3 project_to_workspace(Leg leg, const Vec3& p_hip, const RobotGeometry& geometry,
                          bool* projected = nullptr);

/// Column j is d(foot position)/d(q_j) in the hip frame.
Mat3 jacobian(Leg leg, const JointAngles& q, const RobotGeometry& geometry);

}  // namespace quadtrot
