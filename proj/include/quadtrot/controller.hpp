#pragma once

#include <array>

#include "quadtrot/compliance.hpp"
#include "quadtrot/gait_clock.hpp"
#include "quadtrot/scenario.hpp"
#include "quadtrot/simulator.hpp"
#include "quadtrot/stabilizer.hpp"
#include "quadtrot/trajectory.hpp"

namespace quadtrot {

struct LegReport {
  Phase phase = Phase::Support;
  Vec3 desired = Vec3::Zero();  // hip frame
  FootForceCommand force;
  bool frozen = false;
  bool target_clamped = false;
};

struct ControlOutput {
  LegCommands commands{};
  std::array<LegReport, 4> legs{};
  VelocityEstimate velocity;
  double com_offset = 0.0;
  int support_count = 0;
};

/// Trot controller: planner, stabilizer and compliance evaluated once per tick.
/// Each diagonal group latches its gait parameters at the start of its cycle.
class TrotController {
 public:
  TrotController(const RobotGeometry& geometry, const ControllerSettings& settings);

  const ControlOutput& step(double t, double vx_command, double wz_command,
                            const SensorSample& sensors, double dt);

  const ControllerSettings& settings() const { return settings_; }
  const PhaseTimeline& timeline(LegGroup group) const;

 private:
  struct GroupPlan {
    long cycle = 0;
    bool valid = false;
    double speed = 0.0;
    PhaseTimeline timeline;
    ZKeyframes keyframes;
    VirtualGains gains;
  };

  struct LegMemory {
    bool started = false;
    Phase phase = Phase::Support;
    Vec3 entry = Vec3::Zero();       // stance entry, hip frame
    Vec3 swing_start = Vec3::Zero(); // hip frame
    Vec3 last_command = Vec3::Zero();
    double z_offset = 0.0;           // early touchdown carry-over
    bool contact = false;
    bool lifted = false;             // off the ground since swing start
    EarlyTouchdown early;
    AdjustIntegrator adjust{0.02};
  };

  void latch(GroupPlan& plan, long cycle, double speed);

  RobotGeometry geometry_;
  ControllerSettings settings_;
  double period_;
  std::array<GroupPlan, 2> groups_{};
  std::array<LegMemory, 4> legs_;
  std::array<Vec3, 4> hips_{};
  VelocityEstimator estimator_;
  TouchdownLog touchdowns_;
  ControlOutput out_;
};

}  // namespace quadtrot
