#include "quadtrot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quadtrot/errors.hpp"

namespace quadtrot {
namespace {

double forward_speed(const TelemetryRow& r) {
  const double yaw = r.rpy.z();
  return std::cos(yaw) * r.velocity.x() + std::sin(yaw) * r.velocity.y();
}

std::vector<bool> steady_mask(const std::vector<TelemetryRow>& rows, double delay) {
  std::vector<bool> steady(rows.size(), false);
  double segment_start = rows.front().t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].segment != rows[i - 1].segment) segment_start = rows[i].t;
    steady[i] = rows[i].t >= segment_start + delay;
  }
  return steady;
}

// Contact fraction over whole touchdown-to-touchdown cycles lying in steady rows.
double duty_factor(const std::vector<TelemetryRow>& rows, const std::vector<bool>& steady) {
  long contact = 0;
  long total = 0;
  for (int leg = 0; leg < 4; ++leg) {
    std::ptrdiff_t cycle_start = -1;
    long cycle_contact = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (!steady[i]) {
        cycle_start = -1;
        continue;
      }
      const bool rising = rows[i].legs[leg].contact && !rows[i - 1].legs[leg].contact;
      if (rising) {
        if (cycle_start >= 0) {
          contact += cycle_contact;
          total += static_cast<long>(i) - cycle_start;
        }
        cycle_start = static_cast<std::ptrdiff_t>(i);
        cycle_contact = 0;
      }
      if (cycle_start >= 0 && rows[i].legs[leg].contact) ++cycle_contact;
    }
  }
  if (total > 0) return static_cast<double>(contact) / static_cast<double>(total);

  // No complete cycle: plain contact fraction.
  long n = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!steady[i]) continue;
    for (const LegSample& leg : rows[i].legs) contact += leg.contact ? 1 : 0;
    n += 4;
  }
  if (n == 0) {
    for (const TelemetryRow& r : rows) contact += r.contact_count();
    n = 4 * static_cast<long>(rows.size());
  }
  return static_cast<double>(contact) / static_cast<double>(n);
}

}  // namespace

MetricsReport compute_metrics(const Telemetry& telemetry, const MetricsOptions& options) {
  const auto& rows = telemetry.rows;
  const double period = telemetry.header.period;
  if (rows.size() < 2 || !(period > 0.0) || rows.back().t - rows.front().t < period) {
    throw InsufficientDataError("telemetry covers less than one gait period");
  }
  const std::vector<bool> steady = steady_mask(rows, options.steady_delay);

  MetricsReport m;
  m.duration = rows.back().t - rows.front().t;
  m.duty_factor = duty_factor(rows, steady);

  long flight_ticks = 0;
  for (const TelemetryRow& r : rows) flight_ticks += r.contact_count() == 0 ? 1 : 0;
  m.flight_fraction = static_cast<double>(flight_ticks) / static_cast<double>(rows.size());

  // Cycles from one LF touchdown to the next.
  std::ptrdiff_t start = -1;
  bool all_steady = true;
  bool flight = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool rising = rows[i].legs[0].contact && !rows[i - 1].legs[0].contact;
    if (rising) {
      if (start >= 0 && all_steady) {
        ++m.steady_cycles;
        if (flight) ++m.flight_cycles;
      }
      start = static_cast<std::ptrdiff_t>(i);
      all_steady = true;
      flight = false;
    }
    all_steady = all_steady && steady[i];
    flight = flight || rows[i].contact_count() == 0;
  }
  if (m.steady_cycles > 0) {
    m.flight_cycle_ratio = static_cast<double>(m.flight_cycles) / m.steady_cycles;
  }

  double sum_v = 0.0, sum_cmd = 0.0, sum_e = 0.0, sum_e2 = 0.0;
  long n = 0;
  double window_e = 0.0;
  double window_t0 = 0.0;
  long window_n = 0;
  double sum_w2 = 0.0;
  long windows = 0;
  auto close_window = [&]() {
    if (window_n > 0 && rows.size() > 1) {
      const double e = window_e / static_cast<double>(window_n);
      m.cycle_speed_error_max = std::max(m.cycle_speed_error_max, std::abs(e));
      sum_w2 += e * e;
      ++windows;
    }
    window_e = 0.0;
    window_n = 0;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TelemetryRow& r = rows[i];
    const bool row_steady = steady[i];
    if (!row_steady) {
      window_e = 0.0;
      window_n = 0;
      continue;
    }
    if (window_n == 0) window_t0 = r.t;
    const double v = forward_speed(r);
    const double e = v - r.vx_command;
    sum_v += v;
    sum_cmd += r.vx_command;
    sum_e += e;
    sum_e2 += e * e;
    m.speed_error_max = std::max(m.speed_error_max, std::abs(e));
    ++n;
    m.roll_envelope = std::max(m.roll_envelope, std::abs(r.rpy.x()));
    m.pitch_envelope = std::max(m.pitch_envelope, std::abs(r.rpy.y()));
    window_e += e;
    ++window_n;
    if (r.t - window_t0 >= period - 0.5 * telemetry.header.dt) close_window();
  }
  if (n > 0) {
    m.mean_speed = sum_v / n;
    m.mean_command = sum_cmd / n;
    m.speed_error_mean = sum_e / n;
    m.speed_error_rms = std::sqrt(sum_e2 / n);
  }
  if (windows > 0) m.cycle_speed_error_rms = std::sqrt(sum_w2 / windows);

  // Disturbance window and roll recovery.
  std::ptrdiff_t dist_first = -1, dist_last = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].disturbance) continue;
    if (dist_first < 0) dist_first = static_cast<std::ptrdiff_t>(i);
    dist_last = static_cast<std::ptrdiff_t>(i);
  }
  std::size_t settle_from = 0;
  if (dist_first >= 0) {
    m.has_disturbance = true;
    settle_from = static_cast<std::size_t>(dist_last) + 1;
    m.disturbance_end = settle_from < rows.size() ? rows[settle_from].t : rows.back().t;
    for (std::size_t i = static_cast<std::size_t>(dist_first); i < rows.size(); ++i) {
      m.peak_roll_after_disturbance = std::max(m.peak_roll_after_disturbance, std::abs(rows[i].rpy.x()));
    }
  }
  std::ptrdiff_t inside_since = -1;
  for (std::size_t i = settle_from; i < rows.size(); ++i) {
    if (std::abs(rows[i].rpy.x()) < options.settle_band) {
      if (inside_since < 0) inside_since = static_cast<std::ptrdiff_t>(i);
      if (rows[i].t - rows[inside_since].t >= options.settle_hold) {
        m.settle_time = rows[inside_since].t;
        break;
      }
    } else {
      inside_since = -1;
    }
  }
  if (m.settle_time && m.has_disturbance) m.recovery_time = *m.settle_time - m.disturbance_end;

  const Vec3& p0 = rows.front().position;
  m.min_height = rows.front().position.z();
  for (const TelemetryRow& r : rows) {
    m.max_excursion = std::max(m.max_excursion, (r.position - p0).head<2>().norm());
    m.min_height = std::min(m.min_height, r.position.z());
  }
  m.distance = (rows.back().position - p0).head<2>().norm();
  m.fell = m.min_height < options.fall_fraction * telemetry.header.nominal_height;
  return m;
}

std::string to_json(const MetricsReport& m, int indent) {
  nlohmann::ordered_json j;
  j["duration"] = m.duration;
  j["duty_factor"] = m.duty_factor;
  j["flight_fraction"] = m.flight_fraction;
  j["steady_cycles"] = m.steady_cycles;
  j["flight_cycles"] = m.flight_cycles;
  j["flight_cycle_ratio"] = m.flight_cycle_ratio;
  j["mean_speed"] = m.mean_speed;
  j["mean_command"] = m.mean_command;
  j["speed_error_mean"] = m.speed_error_mean;
  j["speed_error_rms"] = m.speed_error_rms;
  j["speed_error_max"] = m.speed_error_max;
  j["cycle_speed_error_max"] = m.cycle_speed_error_max;
  j["cycle_speed_error_rms"] = m.cycle_speed_error_rms;
  j["roll_envelope"] = m.roll_envelope;
  j["pitch_envelope"] = m.pitch_envelope;
  j["has_disturbance"] = m.has_disturbance;
  j["disturbance_end"] = m.disturbance_end;
  j["peak_roll_after_disturbance"] = m.peak_roll_after_disturbance;
  j["settle_time"] = m.settle_time ? nlohmann::ordered_json(*m.settle_time) : nlohmann::ordered_json();
  j["recovery_time"] = m.recovery_time ? nlohmann::ordered_json(*m.recovery_time) : nlohmann::ordered_json();
  j["distance"] = m.distance;
  j["max_excursion"] = m.max_excursion;
  j["min_height"] = m.min_height;
  j["fell"] = m.fell;
  return j.dump(indent);
}

std::string to_text(const MetricsReport& m) {
  std::ostringstream os;
  os.precision(4);
  os << "duration            " << m.duration << " s\n"
     << "duty factor         " << m.duty_factor << "\n"
     << "flight fraction     " << m.flight_fraction << "\n"
     << "cycles with flight  " << m.flight_cycles << "/" << m.steady_cycles << "\n"
     << "mean speed          " << m.mean_speed << " m/s (command " << m.mean_command << ")\n"
     << "speed error         mean " << m.speed_error_mean << ", rms " << m.speed_error_rms
     << ", max " << m.speed_error_max << " m/s\n"
     << "cycle speed error   rms " << m.cycle_speed_error_rms << ", max "
     << m.cycle_speed_error_max << " m/s\n"
     << "roll/pitch envelope " << m.roll_envelope << " / " << m.pitch_envelope << " rad\n";
  if (m.has_disturbance) {
    os << "peak roll after push " << m.peak_roll_after_disturbance << " rad\n";
  }
  os << "settle time         ";
  if (m.settle_time) {
    os << *m.settle_time << " s";
    if (m.recovery_time) os << " (" << *m.recovery_time << " s after the push)";
  } else {
    os << "never";
  }
  os << "\n"
     << "distance            " << m.distance << " m (max excursion " << m.max_excursion << ")\n"
     << "min height          " << m.min_height << " m" << (m.fell ? "  FELL" : "") << "\n";
  return os.str();
}

}  // namespace quadtrot
