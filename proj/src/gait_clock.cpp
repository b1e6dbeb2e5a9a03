#include "quadtrot/gait_clock.hpp"

#include <cmath>
#include <sstream>

#include "quadtrot/errors.hpp"

namespace quadtrot {

std::string Violation::describe() const {
  std::ostringstream os;
  os << field << " violates " << bound << " (got " << value << ")";
  return os.str();
}

std::vector<Violation> validate(const GaitParams& p) {
  std::vector<Violation> out;
  auto require = [&](bool ok, const char* field, const char* bound, double value) {
    if (!ok || !std::isfinite(value)) out.push_back({field, bound, value});
  };
  require(p.step_frequency > 0.0, "f", "f>0", p.step_frequency);
  require(p.forward_speed >= 0.0, "vx", "vx>=0", p.forward_speed);
  require(p.landing_height < 0.0, "zs", "zs<0", p.landing_height);
  require(p.swing_height > 0.0, "hwa", "hwa>0", p.swing_height);
  require(p.support_descent >= 0.0, "hsd", "hsd>=0", p.support_descent);
  require(p.c1 > 0.0, "c1", "c1>0", p.c1);
  require(p.c2 >= -1.0 && p.c2 <= 0.0, "c2", "c2 in [-1,0]", p.c2);
  require(p.c3 <= -1.0, "c3", "c3<=-1", p.c3);
  require(p.c4 <= 0.0, "c4", "c4<=0", p.c4);
  require(p.c5 > 0.0 && p.c5 < 1.0, "c5", "c5 in (0,1)", p.c5);
  require(p.gravity > 0.0, "g", "g>0", p.gravity);
  return out;
}

double PhaseTimeline::knot_time(int i) const {
  switch (i) {
    case 0: return 0.0;
    case 1: return support;
    case 2: return support + retract;
    case 3: return support + retract + swing_up;
    default: return period;
  }
}

PhaseTimeline derive_timeline(const GaitParams& p) {
  const double g = p.gravity;
  const double takeoff = p.forward_speed / p.c1;
  // Trunk leaves the ground h_sd higher than where it lands.
  const double landing = std::sqrt(takeoff * takeoff + 2.0 * g * p.support_descent);

  PhaseTimeline tl;
  tl.period = 1.0 / p.step_frequency;
  tl.flight = (takeoff + landing) / g;
  tl.support = 0.5 * tl.period - tl.flight;
  if (!(tl.support > 0.0)) {
    throw InfeasibleError("no stance time left: step frequency too high for the flight time");
  }
  tl.retract = (1.0 - p.c4) * p.forward_speed / (p.c1 * std::abs(p.c3) * g);
  const double swing = tl.period - tl.support - tl.retract;
  if (!(swing > 0.0)) {
    throw InfeasibleError("retraction consumes the whole swing window");
  }
  tl.swing_up = p.c5 * swing;
  tl.swing_down = (1.0 - p.c5) * swing;
  return tl;
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Support: return "support";
    case Phase::Retract: return "retract";
    case Phase::SwingUp: return "swing_up";
    case Phase::SwingDown: return "swing_down";
  }
  return "?";
}

bool parse_phase(std::string_view text, Phase* out) {
  for (Phase p : {Phase::Support, Phase::Retract, Phase::SwingUp, Phase::SwingDown}) {
    if (text == phase_name(p)) {
      *out = p;
      return true;
    }
  }
  return false;
}

LegPhase phase_at(const PhaseTimeline& tl, double t, LegGroup group) {
  const double shifted = t - tl.group_offset(group);
  LegPhase out;
  out.cycle = static_cast<long>(std::floor(shifted / tl.period));
  double local = shifted - static_cast<double>(out.cycle) * tl.period;
  if (local >= tl.period) {
    local -= tl.period;
    ++out.cycle;
  } else if (local < 0.0) {
    local = 0.0;
  }
  out.cycle_time = local;

  const double t1 = tl.knot_time(1);
  const double t2 = tl.knot_time(2);
  const double t3 = tl.knot_time(3);
  if (local < t1) {
    out.phase = Phase::Support;
    out.local_time = local;
  } else if (local < t2) {
    out.phase = Phase::Retract;
    out.local_time = local - t1;
  } else if (local < t3) {
    out.phase = Phase::SwingUp;
    out.local_time = local - t2;
  } else {
    out.phase = Phase::SwingDown;
    out.local_time = local - t3;
  }
  return out;
}

double planned_duty_factor(const PhaseTimeline& tl) { return tl.support / tl.period; }

double preferred_frequency(double mass) { return 3.35 * std::pow(mass, -0.13); }

double preferred_speed(double mass) { return 1.09 * std::pow(mass, 0.222); }

}  // namespace quadtrot
