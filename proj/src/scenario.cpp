#include "quadtrot/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "quadtrot/errors.hpp"

namespace quadtrot {

CommandProfile::CommandProfile(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw ValidationError({"command profile needs at least one point"});
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].time < points_[i - 1].time) {
      throw ValidationError({"command profile times must be non-decreasing"});
    }
  }
}

double CommandProfile::at(double t) const {
  if (points_.empty()) return 0.0;
  if (t <= points_.front().time) return points_.front().value;
  if (t >= points_.back().time) return points_.back().value;
  auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double v, const Point& p) { return v < p.time; });
  auto lo = hi - 1;
  const double span = hi->time - lo->time;
  if (!(span > 0.0)) return hi->value;
  return lo->value + (hi->value - lo->value) * (t - lo->time) / span;
}

double CommandProfile::min_value() const {
  double v = points_.empty() ? 0.0 : points_.front().value;
  for (const Point& p : points_) v = std::min(v, p.value);
  return v;
}

double CommandProfile::max_value() const {
  double v = points_.empty() ? 0.0 : points_.front().value;
  for (const Point& p : points_) v = std::max(v, p.value);
  return v;
}

std::vector<double> Scenario::breakpoints() const {
  std::vector<double> out{0.0};
  for (const CommandProfile* prof : {&vx, &wz}) {
    for (const auto& p : prof->points()) {
      if (p.time > 0.0 && p.time < sim.duration) out.push_back(p.time);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& text, int line) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError("expected a number, got '" + text + "'", line);
  }
  return v;
}

bool to_bool(const std::string& text, int line) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "on" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "off" || t == "no") return false;
  throw ParseError("expected a boolean, got '" + text + "'", line);
}

Vec3 to_vec3(const std::string& text, int line) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ParseError("expected three comma-separated numbers", line);
  return {to_double(parts[0], line), to_double(parts[1], line), to_double(parts[2], line)};
}

CommandProfile to_profile(const std::string& text, int line) {
  std::vector<CommandProfile::Point> pts;
  for (const std::string& item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      if (!pts.empty()) throw ParseError("profile points must be time:value", line);
      pts.push_back({0.0, to_double(item, line)});
      continue;
    }
    pts.push_back({to_double(trim(item.substr(0, colon)), line),
                   to_double(trim(item.substr(colon + 1)), line)});
  }
  try {
    return CommandProfile(std::move(pts));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line);
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

std::string fmt(const CommandProfile& p) {
  std::string out;
  for (const auto& pt : p.points()) {
    if (!out.empty()) out += ", ";
    out += fmt(pt.time) + ":" + fmt(pt.value);
  }
  return out;
}

struct KeySpec {
  std::function<void(Scenario&, const std::string&, int)> set;
  std::function<std::string(const Scenario&)> get;
};

#define QT_DOUBLE(field)                                                                 \
  KeySpec {                                                                              \
    [](Scenario& s, const std::string& v, int l) { s.field = to_double(v, l); },          \
        [](const Scenario& s) { return fmt(s.field); }                                    \
  }
#define QT_BOOL(field)                                                                   \
  KeySpec {                                                                              \
    [](Scenario& s, const std::string& v, int l) { s.field = to_bool(v, l); },            \
        [](const Scenario& s) { return std::string(s.field ? "true" : "false"); }         \
  }
#define QT_VEC3(field)                                                                   \
  KeySpec {                                                                              \
    [](Scenario& s, const std::string& v, int l) { s.field = to_vec3(v, l); },            \
        [](const Scenario& s) { return fmt(s.field); }                                    \
  }

const std::vector<std::pair<std::string, KeySpec>>& key_table() {
  static const std::vector<std::pair<std::string, KeySpec>> table = {
      {"scenario.name",
       {[](Scenario& s, const std::string& v, int) { s.name = v; },
        [](const Scenario& s) { return s.name; }}},
      {"geometry.L", QT_DOUBLE(geometry.body_length)},
      {"geometry.W1", QT_DOUBLE(geometry.shoulder_width)},
      {"geometry.W2", QT_DOUBLE(geometry.hip_width)},
      {"geometry.a1", QT_DOUBLE(geometry.hip_link)},
      {"geometry.a2", QT_DOUBLE(geometry.thigh)},
      {"geometry.a3", QT_DOUBLE(geometry.crus)},
      {"robot.mass", QT_DOUBLE(geometry.mass)},
      {"world.gravity", QT_DOUBLE(geometry.gravity)},
      {"gait.f", QT_DOUBLE(controller.gait.step_frequency)},
      {"gait.vx", QT_DOUBLE(controller.gait.forward_speed)},
      {"gait.zs", QT_DOUBLE(controller.gait.landing_height)},
      {"gait.hwa", QT_DOUBLE(controller.gait.swing_height)},
      {"gait.hsd", QT_DOUBLE(controller.gait.support_descent)},
      {"gait.c1", QT_DOUBLE(controller.gait.c1)},
      {"gait.c2", QT_DOUBLE(controller.gait.c2)},
      {"gait.c3", QT_DOUBLE(controller.gait.c3)},
      {"gait.c4", QT_DOUBLE(controller.gait.c4)},
      {"gait.c5", QT_DOUBLE(controller.gait.c5)},
      {"stabilizer.enable", QT_BOOL(controller.stabilizer_enabled)},
      {"stabilizer.kp_pitch", QT_DOUBLE(controller.posture.kp_pitch)},
      {"stabilizer.kd_pitch", QT_DOUBLE(controller.posture.kd_pitch)},
      {"stabilizer.kp_roll", QT_DOUBLE(controller.posture.kp_roll)},
      {"stabilizer.kd_roll", QT_DOUBLE(controller.posture.kd_roll)},
      {"stabilizer.max_offset", QT_DOUBLE(controller.posture.max_offset)},
      {"stabilizer.k_comp", QT_DOUBLE(controller.placement.k_comp)},
      {"stabilizer.k_com", QT_DOUBLE(controller.k_com)},
      {"stabilizer.lambda", QT_DOUBLE(controller.placement.neutral_factor)},
      {"stabilizer.max_step", QT_DOUBLE(controller.placement.max_offset)},
      {"stabilizer.cutoff_hz", QT_DOUBLE(controller.cutoff_hz)},
      {"compliance.enable", QT_BOOL(controller.compliance_enabled)},
      {"compliance.zeta", QT_DOUBLE(controller.zeta)},
      {"compliance.kp_xy_scale", QT_DOUBLE(controller.kp_xy_scale)},
      {"sim.dt", QT_DOUBLE(sim.dt)},
      {"sim.duration", QT_DOUBLE(sim.duration)},
      {"sim.kn", QT_DOUBLE(sim.contact.stiffness)},
      {"sim.dn", QT_DOUBLE(sim.contact.damping)},
      {"sim.mu", QT_DOUBLE(sim.contact.friction)},
      {"sim.vreg", QT_DOUBLE(sim.contact.reg_velocity)},
      {"sim.swing_lag", QT_DOUBLE(sim.swing_lag)},
      {"sim.trunk_height", QT_DOUBLE(sim.trunk_height)},
      {"sim.noise_sigma", QT_DOUBLE(sim.noise_sigma)},
      {"sim.seed",
       {[](Scenario& s, const std::string& v, int l) {
          std::uint64_t seed = 0;
          auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
          if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
            throw ParseError("expected an unsigned integer seed", l);
          }
          s.sim.seed = seed;
        },
        [](const Scenario& s) { return std::to_string(s.sim.seed); }}},
      {"sim.mode",
       {[](Scenario& s, const std::string& v, int l) {
          if (v == "massless-leg") {
            s.sim.mode = PlantMode::MasslessLeg;
          } else if (v == "kinematic-foot") {
            s.sim.mode = PlantMode::KinematicFoot;
          } else {
            throw ParseError("sim.mode must be massless-leg or kinematic-foot", l);
          }
        },
        [](const Scenario& s) {
          return std::string(s.sim.mode == PlantMode::MasslessLeg ? "massless-leg"
                                                                  : "kinematic-foot");
        }}},
      {"sim.inertia",
       {[](Scenario& s, const std::string& v, int l) {
          s.sim.inertia = to_vec3(v, l).asDiagonal();
          s.explicit_inertia = true;
        },
        [](const Scenario& s) { return fmt(Vec3(s.sim.inertia.diagonal())); }}},
      {"command.vx",
       {[](Scenario& s, const std::string& v, int l) { s.vx = to_profile(v, l); },
        [](const Scenario& s) { return fmt(s.vx); }}},
      {"command.wz",
       {[](Scenario& s, const std::string& v, int l) { s.wz = to_profile(v, l); },
        [](const Scenario& s) { return fmt(s.wz); }}},
      {"disturbance.impulse", QT_DOUBLE(disturbance.impulse)},
      {"disturbance.direction", QT_VEC3(disturbance.direction)},
      {"disturbance.start", QT_DOUBLE(disturbance.start)},
      {"disturbance.duration", QT_DOUBLE(disturbance.duration)},
      {"disturbance.point", QT_VEC3(disturbance.point)},
      {"init.roll", QT_DOUBLE(initial_roll)},
      {"init.pitch", QT_DOUBLE(initial_pitch)},
  };
  return table;
}

#undef QT_DOUBLE
#undef QT_BOOL
#undef QT_VEC3

const KeySpec* find_key(const std::string& key) {
  for (const auto& [name, spec] : key_table()) {
    if (name == key) return &spec;
  }
  return nullptr;
}

void check_gait_at(const GaitParams& base, double speed, std::vector<std::string>& problems) {
  GaitParams p = base;
  p.forward_speed = speed;
  for (const Violation& v : validate(p)) problems.push_back("gait." + v.field + ": " + v.describe());
  if (!problems.empty()) return;
  try {
    synth_z_keyframes(p, derive_timeline(p));
  } catch (const Error& e) {
    std::ostringstream os;
    os << "gait infeasible at vx=" << speed << ": " << e.what();
    problems.push_back(os.str());
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, spec] : key_table()) out.push_back(name);
    return out;
  }();
  return keys;
}

void finalize(Scenario& s) {
  s.geometry.validate();
  s.controller.gait.gravity = s.geometry.gravity;
  if (!s.explicit_inertia) {
    s.sim.inertia = cuboid_inertia(s.geometry.mass, s.geometry.body_length,
                                   s.geometry.shoulder_width, s.sim.trunk_height);
  }

  std::vector<std::string> problems;
  check_gait_at(s.controller.gait, s.controller.gait.forward_speed, problems);
  if (problems.empty()) check_gait_at(s.controller.gait, s.vx.min_value(), problems);
  if (problems.empty()) check_gait_at(s.controller.gait, s.vx.max_value(), problems);

  const ControllerSettings& c = s.controller;
  const PostureGains& pg = c.posture;
  if (pg.kp_pitch < 0 || pg.kd_pitch < 0 || pg.kp_roll < 0 || pg.kd_roll < 0) {
    problems.push_back("stabilizer gains must be >= 0");
  }
  if (!(pg.max_offset > 0.0)) problems.push_back("stabilizer.max_offset>0");
  if (!(c.placement.max_offset > 0.0)) problems.push_back("stabilizer.max_step>0");
  if (c.placement.k_comp < 0.0) problems.push_back("stabilizer.k_comp>=0");
  if (c.placement.neutral_factor < 0.0) problems.push_back("stabilizer.lambda>=0");
  if (!(c.cutoff_hz > 0.0)) problems.push_back("stabilizer.cutoff_hz>0");
  if (!(c.zeta >= 0.0 && c.zeta < 1.0)) problems.push_back("compliance.zeta in [0,1)");
  if (c.kp_xy_scale < 0.0) problems.push_back("compliance.kp_xy_scale>=0");
  if (!c.compliance_enabled && s.sim.mode == PlantMode::MasslessLeg) {
    problems.push_back("compliance.enable=false needs sim.mode=kinematic-foot");
  }
  if (s.disturbance.impulse < 0.0) problems.push_back("disturbance.impulse>=0");
  if (s.disturbance.impulse > 0.0) {
    if (!(s.disturbance.duration > 0.0)) problems.push_back("disturbance.duration>0");
    if (!(s.disturbance.direction.norm() > 0.0)) problems.push_back("disturbance.direction nonzero");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  s.sim.validate();

  s.disturbances.clear();
  if (s.disturbance.impulse > 0.0) {
    Disturbance d;
    d.impulse = s.disturbance.impulse * s.disturbance.direction.normalized();
    d.start = s.disturbance.start;
    d.duration = s.disturbance.duration;
    d.point_body = s.disturbance.point;
    s.disturbances.push_back(d);
  }

  std::ostringstream os;
  for (const auto& [name, spec] : key_table()) os << name << " = " << spec.get(s) << "\n";
  s.canonical = os.str();
}

Scenario parse_config(const std::string& text, const std::string& name) {
  Scenario s;
  s.name = name;
  bool has_vx_profile = false;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'section.key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const KeySpec* spec = find_key(key);
    if (spec == nullptr) throw ParseError("unknown key '" + key + "'", line_no);
    if (seen.count(key)) {
      throw ParseError("duplicate key '" + key + "' (first on line " +
                           std::to_string(seen[key]) + ")",
                       line_no);
    }
    seen[key] = line_no;
    spec->set(s, value, line_no);
    if (key == "command.vx") has_vx_profile = true;
  }
  if (!has_vx_profile) s.vx = CommandProfile(s.controller.gait.forward_speed);
  finalize(s);
  return s;
}

Scenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_config(buf.str(), name);
}

}  // namespace quadtrot
