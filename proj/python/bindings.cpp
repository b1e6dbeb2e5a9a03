#include <array>
#include <cctype>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadtrot/errors.hpp"
#include "quadtrot/gait_clock.hpp"
#include "quadtrot/harness.hpp"
#include "quadtrot/kinematics.hpp"
#include "quadtrot/metrics.hpp"
#include "quadtrot/scenario.hpp"
#include "quadtrot/trajectory.hpp"

namespace py = pybind11;
using namespace quadtrot;

namespace {

Leg leg_from(std::string name) {
  for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Leg leg : kAllLegs) {
    if (leg_name(leg) == name) return leg;
  }
  throw py::value_error("unknown leg '" + name + "'");
}

using Triple = std::array<double, 3>;

Triple triple(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

py::dict metrics_dict(const MetricsReport& m) {
  return py::module_::import("json").attr("loads")(to_json(m, -1));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Flying-trot planner, controller and simulator";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
  py::register_exception<UnreachableError>(m, "UnreachableError", base);
  py::register_exception<KeyframeOrderError>(m, "KeyframeOrderError", base);
  py::register_exception<NumericalDivergence>(m, "NumericalDivergence", base);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base);

  py::class_<GaitParams>(m, "GaitParams")
      .def(py::init<>())
      .def_readwrite("f", &GaitParams::step_frequency)
      .def_readwrite("vx", &GaitParams::forward_speed)
      .def_readwrite("zs", &GaitParams::landing_height)
      .def_readwrite("hwa", &GaitParams::swing_height)
      .def_readwrite("hsd", &GaitParams::support_descent)
      .def_readwrite("c1", &GaitParams::c1)
      .def_readwrite("c2", &GaitParams::c2)
      .def_readwrite("c3", &GaitParams::c3)
      .def_readwrite("c4", &GaitParams::c4)
      .def_readwrite("c5", &GaitParams::c5)
      .def_readwrite("g", &GaitParams::gravity)
      .def("violations", [](const GaitParams& p) {
        std::vector<std::string> out;
        for (const Violation& v : validate(p)) out.push_back(v.describe());
        return out;
      });

  py::class_<PhaseTimeline>(m, "PhaseTimeline")
      .def_readonly("period", &PhaseTimeline::period)
      .def_readonly("support", &PhaseTimeline::support)
      .def_readonly("retract", &PhaseTimeline::retract)
      .def_readonly("swing_up", &PhaseTimeline::swing_up)
      .def_readonly("swing_down", &PhaseTimeline::swing_down)
      .def_readonly("flight", &PhaseTimeline::flight)
      .def_property_readonly("duty_factor", &planned_duty_factor);

  py::class_<ZKeyframes>(m, "ZKeyframes")
      .def_readonly("time", &ZKeyframes::time)
      .def_readonly("position", &ZKeyframes::position)
      .def_readonly("velocity", &ZKeyframes::velocity);

  m.def("derive_timeline", &derive_timeline, py::arg("params"));
  m.def("synth_z_keyframes",
        [](const GaitParams& p) { return synth_z_keyframes(p, derive_timeline(p)); },
        py::arg("params"));

  m.def("fk_foot",
        [](const std::string& leg, double roll, double hip, double knee) {
          return triple(fk_foot(leg_from(leg), {roll, hip, knee}, RobotGeometry{}).position);
        },
        py::arg("leg"), py::arg("roll"), py::arg("hip"), py::arg("knee"));
  m.def("ik_leg",
        [](const std::string& leg, const Triple& p) {
          return triple(ik_leg(leg_from(leg), Vec3(p[0], p[1], p[2]), RobotGeometry{}).q.as_vector());
        },
        py::arg("leg"), py::arg("p_hip"));

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_property(
          "duration", [](const Scenario& s) { return s.sim.duration; },
          [](Scenario& s, double d) {
            s.sim.duration = d;
            finalize(s);
          })
      .def_property_readonly("gait", [](const Scenario& s) { return s.controller.gait; })
      .def_property_readonly("config_hash", &config_hash);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("name") = "scenario");
  m.def("config_keys", &config_keys);

  m.def("run_scenario",
        [](const Scenario& s, const std::string& out) {
          MetricsReport r;
          {
            py::gil_scoped_release release;
            r = run_scenario(s, out);
          }
          return metrics_dict(r);
        },
        py::arg("scenario"), py::arg("out_path"));
  m.def("write_plan", [](const Scenario& s, const std::string& out) { write_plan(s, out); },
        py::arg("scenario"), py::arg("out_path"));
  m.def("metrics",
        [](const std::string& csv, double band) {
          MetricsOptions o;
          o.settle_band = band;
          return metrics_dict(compute_metrics(read_telemetry(csv), o));
        },
        py::arg("csv_path"), py::arg("settle_band") = MetricsOptions{}.settle_band);
  m.def("telemetry_columns", &telemetry_columns);
}
