#include "quadtrot/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quadtrot/errors.hpp"

namespace quadtrot {
namespace {

constexpr double kSingularTol = 1e-6;

// Foot in the leg plane before the roll rotation: (x, lateral, z).
Vec3 sagittal_point(Leg leg, double hip_pitch, double knee_pitch, const RobotGeometry& g) {
  const double x = g.thigh * std::sin(hip_pitch) + g.crus * std::sin(hip_pitch + knee_pitch);
  const double z = -g.thigh * std::cos(hip_pitch) - g.crus * std::cos(hip_pitch + knee_pitch);
  return {x, lateral_sign(leg) * g.hip_link, z};
}

Vec3 roll_about_x(const Vec3& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {p.x(), c * p.y() - s * p.z(), s * p.y() + c * p.z()};
}

}  // namespace

void RobotGeometry::validate() const {
  std::vector<std::string> bad;
  auto check = [&](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) bad.push_back(std::string(name) + ">0");
  };
  check("geometry.L", body_length);
  check("geometry.W1", shoulder_width);
  check("geometry.W2", hip_width);
  check("geometry.a1", hip_link);
  check("geometry.a2", thigh);
  check("geometry.a3", crus);
  check("robot.mass", mass);
  check("world.gravity", gravity);
  if (!bad.empty()) throw ValidationError(std::move(bad));
}

std::string_view leg_name(Leg leg) {
  switch (leg) {
    case Leg::LF: return "lf";
    case Leg::RF: return "rf";
    case Leg::LH: return "lh";
    case Leg::RH: return "rh";
  }
  return "?";
}

bool JointLimits::contains(const JointAngles& q) const {
  return std::abs(q.roll) <= roll && std::abs(q.hip_pitch) <= pitch &&
         std::abs(q.knee_pitch) <= pitch;
}

FootPoint hip_origin(Leg leg, const RobotGeometry& g) {
  const double x = is_fore(leg) ? 0.5 * g.body_length : -0.5 * g.body_length;
  const double width = is_fore(leg) ? g.shoulder_width : g.hip_width;
  return {Vec3(x, 0.5 * lateral_sign(leg) * width, 0.0), Vec3::Zero(), Frame::Body};
}

FootPoint fk_foot(Leg leg, const JointAngles& q, const RobotGeometry& g) {
  const Vec3 planar = sagittal_point(leg, q.hip_pitch, q.knee_pitch, g);
  return {roll_about_x(planar, q.roll), Vec3::Zero(), Frame::Hip};
}

Vec3 project_to_workspace(Leg leg, const Vec3& p, const RobotGeometry& g, bool* projected) {
  const double side = lateral_sign(leg) * g.hip_link;
  const double outer = g.thigh + g.crus;
  const double inner = std::abs(g.thigh - g.crus);
  bool moved = false;

  // Roll plane: the foot has to stay at least a1 away from the roll axis.
  double ry = p.y();
  double rz = p.z();
  double radial = std::hypot(ry, rz);
  const double min_radial = g.hip_link * (1.0 + 1e-12);
  if (radial < min_radial) {
    if (radial == 0.0) {
      ry = side;
      rz = 0.0;
    } else {
      ry *= min_radial / radial;
      rz *= min_radial / radial;
    }
    radial = min_radial;
    moved = true;
  }
  const double roll = std::atan2(rz, ry) - std::atan2(-std::sqrt(std::max(0.0, radial * radial - g.hip_link * g.hip_link)), side);
  double down = std::sqrt(std::max(0.0, radial * radial - g.hip_link * g.hip_link));

  // Sagittal plane: two-link annulus.
  double x = p.x();
  double d = std::hypot(x, down);
  if (d > outer) {
    x *= outer / d;
    down *= outer / d;
    moved = true;
  } else if (d < inner) {
    if (d == 0.0) {
      down = inner;
    } else {
      x *= inner / d;
      down *= inner / d;
    }
    moved = true;
  }
  if (projected != nullptr) *projected = moved;
  if (!moved) return p;
  return roll_about_x(Vec3(x, side, -down), roll);
}

IkSolution ik_leg(Leg leg, const Vec3& p, const RobotGeometry& g) {
  const double side = lateral_sign(leg) * g.hip_link;
  const double radial_sq = p.y() * p.y() + p.z() * p.z();
  const double down_sq = radial_sq - g.hip_link * g.hip_link;
  if (down_sq < 0.0) {
    throw UnreachableError("foot target inside the hip-link radius");
  }
  const double down = std::sqrt(down_sq);
  // Leg plane hangs below the roll axis: local lateral = side, local z = -down.
  const double roll = std::atan2(p.z(), p.y()) - std::atan2(-down, side);

  const double reach_sq = p.x() * p.x() + down_sq;
  const double a2 = g.thigh;
  const double a3 = g.crus;
  const double outer = a2 + a3;
  const double inner = std::abs(a2 - a3);
  const double tol = 1e-12;
  if (reach_sq > outer * outer * (1.0 + tol) || reach_sq < inner * inner * (1.0 - tol)) {
    throw UnreachableError("foot target outside the thigh/crus annulus");
  }
  const double cos_knee = std::clamp((reach_sq - a2 * a2 - a3 * a3) / (2.0 * a2 * a3), -1.0, 1.0);
  const double knee = std::acos(cos_knee);
  const double hip = std::atan2(p.x(), down) - std::atan2(a3 * std::sin(knee), a2 + a3 * std::cos(knee));

  auto wrap = [](double a) { return std::remainder(a, 2.0 * M_PI); };
  IkSolution out;
  out.q = {wrap(roll), hip, knee};
  out.near_singular = knee < kSingularTol;
  return out;
}

Mat3 jacobian(Leg leg, const JointAngles& q, const RobotGeometry& g) {
  const double s1 = std::sin(q.roll);
  const double c1 = std::cos(q.roll);
  const double s2 = std::sin(q.hip_pitch);
  const double c2 = std::cos(q.hip_pitch);
  const double s23 = std::sin(q.hip_pitch + q.knee_pitch);
  const double c23 = std::cos(q.hip_pitch + q.knee_pitch);
  const double lateral = lateral_sign(leg) * g.hip_link;
  const double z = -g.thigh * c2 - g.crus * c23;  // planar height

  // planar derivatives w.r.t. hip and knee pitch
  const double dx2 = g.thigh * c2 + g.crus * c23;
  const double dz2 = g.thigh * s2 + g.crus * s23;
  const double dx3 = g.crus * c23;
  const double dz3 = g.crus * s23;

  Mat3 J;
  J.col(0) << 0.0, -s1 * lateral - c1 * z, c1 * lateral - s1 * z;
  J.col(1) << dx2, -s1 * dz2, c1 * dz2;
  J.col(2) << dx3, -s1 * dz3, c1 * dz3;
  return J;
}

}  // namespace quadtrot
