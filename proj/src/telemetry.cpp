#include "quadtrot/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "quadtrot/errors.hpp"

namespace quadtrot {

int TelemetryRow::contact_count() const {
  int n = 0;
  for (const LegSample& leg : legs) n += leg.contact ? 1 : 0;
  return n;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += ',';
  line += buf;
}

double number(const std::string& cell, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + cell + "'", line);
  }
}

bool flag(const std::string& cell, int line) {
  if (cell == "1") return true;
  if (cell == "0") return false;
  throw ParseError("bad flag '" + cell + "'", line);
}

}  // namespace

const std::vector<std::string>& telemetry_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"t",    "seg",       "vx_cmd",     "wz_cmd",   "dist", "x",
                                  "y",    "z",         "vx",         "vy",       "vz",   "roll",
                                  "pitch", "yaw",      "roll_rate",  "pitch_rate", "yaw_rate"};
    for (Leg leg : kAllLegs) {
      const std::string n(leg_name(leg));
      for (const char* s : {"phase", "pdx", "pdy", "pdz", "pax", "pay", "paz", "contact", "fdz",
                            "tau1", "tau2", "tau3"}) {
        c.push_back(n + "_" + s);
      }
    }
    return c;
  }();
  return cols;
}

void write_header(std::ostream& out, const TelemetryHeader& h) {
  char buf[256];
  out << "# quadtrot telemetry\n";
  out << "# config_hash=" << h.config_hash << "\n";
  std::snprintf(buf, sizeof buf, "# inertia=%.17g,%.17g,%.17g\n", h.inertia.x(), h.inertia.y(),
                h.inertia.z());
  out << buf;
  std::snprintf(buf, sizeof buf, "# period=%.17g\n# nominal_height=%.17g\n# dt=%.17g\n", h.period,
                h.nominal_height, h.dt);
  out << buf;
  const auto& cols = telemetry_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
}

void write_row(std::ostream& out, const TelemetryRow& r) {
  std::string line;
  line.reserve(1024);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", r.t);
  line += buf;
  line += ',' + std::to_string(r.segment);
  put(line, r.vx_command);
  put(line, r.wz_command);
  line += r.disturbance ? ",1" : ",0";
  for (const Vec3* v : {&r.position, &r.velocity, &r.rpy, &r.rates}) {
    for (int k = 0; k < 3; ++k) put(line, (*v)[k]);
  }
  for (const LegSample& leg : r.legs) {
    line += ',';
    line += phase_name(leg.phase);
    for (int k = 0; k < 3; ++k) put(line, leg.desired[k]);
    for (int k = 0; k < 3; ++k) put(line, leg.actual[k]);
    line += leg.contact ? ",1" : ",0";
    put(line, leg.force_z);
    for (int k = 0; k < 3; ++k) put(line, leg.torque[k]);
  }
  line += '\n';
  out << line;
}

void write_telemetry(std::ostream& out, const Telemetry& t) {
  write_header(out, t.header);
  for (const TelemetryRow& row : t.rows) write_row(out, row);
}

void write_telemetry(const std::string& path, const Telemetry& t) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_telemetry(out, t);
}

Telemetry read_telemetry(std::istream& in) {
  Telemetry t;
  std::string line;
  int line_no = 0;
  bool have_columns = false;
  const auto& cols = telemetry_columns();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "config_hash") {
        t.header.config_hash = value;
      } else if (key == "inertia") {
        std::istringstream is(value);
        std::string cell;
        for (int k = 0; k < 3; ++k) {
          if (!std::getline(is, cell, ',')) throw ParseError("inertia needs three values", line_no);
          t.header.inertia[k] = number(cell, line_no);
        }
      } else if (key == "period") {
        t.header.period = number(value, line_no);
      } else if (key == "nominal_height") {
        t.header.nominal_height = number(value, line_no);
      } else if (key == "dt") {
        t.header.dt = number(value, line_no);
      }
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!have_columns) {
      if (cells != cols) throw ParseError("column header does not match the telemetry schema", line_no);
      have_columns = true;
      continue;
    }
    if (cells.size() != cols.size()) {
      throw ParseError("expected " + std::to_string(cols.size()) + " columns, got " +
                           std::to_string(cells.size()),
                       line_no);
    }
    TelemetryRow r;
    r.t = number(cells[0], line_no);
    r.segment = static_cast<int>(number(cells[1], line_no));
    r.vx_command = number(cells[2], line_no);
    r.wz_command = number(cells[3], line_no);
    r.disturbance = flag(cells[4], line_no);
    int c = 5;
    for (Vec3* v : {&r.position, &r.velocity, &r.rpy, &r.rates}) {
      for (int k = 0; k < 3; ++k) (*v)[k] = number(cells[c++], line_no);
    }
    for (LegSample& leg : r.legs) {
      if (!parse_phase(cells[c++], &leg.phase)) throw ParseError("unknown phase", line_no);
      for (int k = 0; k < 3; ++k) leg.desired[k] = number(cells[c++], line_no);
      for (int k = 0; k < 3; ++k) leg.actual[k] = number(cells[c++], line_no);
      leg.contact = flag(cells[c++], line_no);
      leg.force_z = number(cells[c++], line_no);
      for (int k = 0; k < 3; ++k) leg.torque[k] = number(cells[c++], line_no);
    }
    if (!t.rows.empty() && !(r.t > t.rows.back().t)) {
      throw ParseError("rows must be strictly increasing in t", line_no);
    }
    t.rows.push_back(r);
  }
  if (!have_columns) throw ParseError("missing column header", line_no);
  return t;
}

Telemetry read_telemetry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_telemetry(in);
}

}  // namespace quadtrot
