#pragma once

#include <string>
#include <vector>

#include "quadtrot/gait_clock.hpp"
#include "quadtrot/kinematics.hpp"
#include "quadtrot/simulator.hpp"
#include "quadtrot/stabilizer.hpp"
#include "quadtrot/trajectory.hpp"

namespace quadtrot {

/// Piecewise-linear command over time, held constant outside its points.
class CommandProfile {
 public:
  struct Point {
    double time = 0.0;
    double value = 0.0;
  };

  CommandProfile() = default;
  explicit CommandProfile(double constant) : points_{{0.0, constant}} {}
  explicit CommandProfile(std::vector<Point> points);

  double at(double t) const;
  const std::vector<Point>& points() const { return points_; }
  double min_value() const;
  double max_value() const;

 private:
  std::vector<Point> points_;
};

struct ControllerSettings {
  GaitParams gait;
  FootPlacementGains placement;
  PostureGains posture;
  double k_com = 0.1;
  double cutoff_hz = 10.0;
  bool stabilizer_enabled = true;
  bool compliance_enabled = true;
  double zeta = 0.1;
  double kp_xy_scale = 0.5;
};

/// One impulsive push. The impulse direction is normalized in finalize().
struct DisturbanceSpec {
  double impulse = 0.0;  // kg*m/s, 0 disables
  Vec3 direction = Vec3(0.0, -1.0, 0.0);
  double start = 0.0;
  double duration = 0.05;
  Vec3 point = Vec3::Zero();  // body frame
};

struct Scenario {
  std::string name = "scenario";
  RobotGeometry geometry;
  ControllerSettings controller;
  SimConfig sim;
  bool explicit_inertia = false;  // otherwise a cuboid of the trunk dimensions
  CommandProfile vx{1.0};
  CommandProfile wz{0.0};
  DisturbanceSpec disturbance;
  std::vector<Disturbance> disturbances;  // derived from `disturbance`
  double initial_roll = 0.0;
  double initial_pitch = 0.0;
  // normalized key=value listing, the basis of the config hash
  std::string canonical;

  /// Sorted union of command breakpoints within [0, duration], always starting at 0.
  std::vector<double> breakpoints() const;
};

/// Parses `section.key = value` lines. '#' and ';' start comments.
/// Throws ParseError (with line number) and ValidationError.
Scenario parse_config(const std::string& text, const std::string& name = "scenario");
Scenario load_config(const std::string& path);

/// Re-validates a scenario assembled in code; also refreshes derived fields
/// (inertia, canonical text). Throws ValidationError.
void finalize(Scenario& scenario);

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace quadtrot
