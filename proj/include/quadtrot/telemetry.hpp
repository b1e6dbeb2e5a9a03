#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "quadtrot/gait_clock.hpp"
#include "quadtrot/kinematics.hpp"

namespace quadtrot {

struct LegSample {
  Phase phase = Phase::Support;
  Vec3 desired = Vec3::Zero();  // body frame
  Vec3 actual = Vec3::Zero();   // body frame
  bool contact = false;
  double force_z = 0.0;         // desired foot force, z
  Vec3 torque = Vec3::Zero();
};

/// One control tick.
struct TelemetryRow {
  double t = 0.0;
  int segment = 0;  // index of the command-profile segment
  double vx_command = 0.0;
  double wz_command = 0.0;
  bool disturbance = false;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();  // world frame
  Vec3 rpy = Vec3::Zero();
  Vec3 rates = Vec3::Zero();     // body angular velocity
  std::array<LegSample, 4> legs{};

  int contact_count() const;
};

struct TelemetryHeader {
  std::string config_hash;
  Vec3 inertia = Vec3::Zero();  // principal moments
  double period = 0.0;
  double nominal_height = 0.0;
  double dt = 0.0;
};

struct Telemetry {
  TelemetryHeader header;
  std::vector<TelemetryRow> rows;
};

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

const std::vector<std::string>& telemetry_columns();

/// Header lines start with '#', numbers use 17 significant digits so the
/// file round-trips exactly.
void write_header(std::ostream& out, const TelemetryHeader& header);
void write_row(std::ostream& out, const TelemetryRow& row);
void write_telemetry(std::ostream& out, const Telemetry& telemetry);
void write_telemetry(const std::string& path, const Telemetry& telemetry);

/// Throws ParseError on schema violations.
Telemetry read_telemetry(std::istream& in);
Telemetry read_telemetry(const std::string& path);

}  // namespace quadtrot
