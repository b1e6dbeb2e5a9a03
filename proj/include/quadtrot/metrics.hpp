#pragma once

#include <optional>
#include <string>

#include "quadtrot/telemetry.hpp"

namespace quadtrot {

struct MetricsOptions {
  double steady_delay = 1.0;   // s excluded after each command segment start
  double settle_band = 0.03;   // rad
  double settle_hold = 0.5;    // s the roll must stay inside the band
  double fall_fraction = 0.5;  // of nominal height
};

struct MetricsReport {
  double duration = 0.0;
  double duty_factor = 0.0;
  double flight_fraction = 0.0;   // ticks with no foot in contact, whole run
  int steady_cycles = 0;          // delimited by LF touchdowns
  int flight_cycles = 0;          // steady cycles containing an all-feet-off tick
  double flight_cycle_ratio = 0.0;

  double mean_speed = 0.0;        // forward speed in the heading frame, steady rows
  double mean_command = 0.0;
  double speed_error_mean = 0.0;  // per tick
  double speed_error_rms = 0.0;
  double speed_error_max = 0.0;
  double cycle_speed_error_max = 0.0;  // error of per-period averages
  double cycle_speed_error_rms = 0.0;

  double roll_envelope = 0.0;     // max |roll| over steady rows
  double pitch_envelope = 0.0;

  bool has_disturbance = false;
  double disturbance_end = 0.0;
  double peak_roll_after_disturbance = 0.0;
  std::optional<double> settle_time;      // absolute time
  std::optional<double> recovery_time;    // settle_time - disturbance_end

  double distance = 0.0;          // horizontal, start to end
  double max_excursion = 0.0;     // horizontal, max from start
  double min_height = 0.0;
  bool fell = false;
};

/// Throws InsufficientDataError with less than one gait period of rows.
MetricsReport compute_metrics(const Telemetry& telemetry, const MetricsOptions& options = {});

std::string to_json(const MetricsReport& report, int indent = 2);
std::string to_text(const MetricsReport& report);

}  // namespace quadtrot
