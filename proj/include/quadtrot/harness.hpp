#pragma once

#include <string>

#include "quadtrot/metrics.hpp"
#include "quadtrot/scenario.hpp"
#include "quadtrot/telemetry.hpp"

namespace quadtrot {

struct RunResult {
  Telemetry telemetry;
  MetricsReport metrics;
};

/// Closed loop for the configured duration, one telemetry row per tick.
/// Throws NumericalDivergence.
RunResult simulate(const Scenario& scenario, const MetricsOptions& options = {});

/// As simulate(), and writes the telemetry CSV to `out_path`.
MetricsReport run_scenario(const Scenario& scenario, const std::string& out_path,
                           const MetricsOptions& options = {});

/// Steady-state foot trajectories of all legs over two periods, with the
/// knots as '#' lines. Columns t, leg, phase, px, py, pz, vx, vy, vz (hip frame).
void write_plan(const Scenario& scenario, const std::string& out_path, double sample_dt = 1e-3);

std::string config_hash(const Scenario& scenario);

}  // namespace quadtrot
