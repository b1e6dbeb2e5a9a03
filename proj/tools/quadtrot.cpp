#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quadtrot/errors.hpp"
#include "quadtrot/harness.hpp"
#include "quadtrot/metrics.hpp"
#include "quadtrot/scenario.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kDiverged = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadruped flying-trot planner, controller and simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* run = app.add_subcommand("run", "simulate a scenario and write telemetry CSV");
  run->add_option("--config", config_path, "scenario file")->required();
  run->add_option("--out", out_path, "telemetry CSV")->required();

  auto* plan = app.add_subcommand("plan", "write the planned foot trajectories to CSV");
  plan->add_option("--config", config_path, "scenario file")->required();
  plan->add_option("--out", out_path, "trajectory CSV")->required();

  std::string csv_path;
  bool json = false;
  double band = quadtrot::MetricsOptions{}.settle_band;
  auto* metrics = app.add_subcommand("metrics", "compute metrics from telemetry CSV");
  metrics->add_option("csv", csv_path, "telemetry CSV")->required();
  metrics->add_flag("--json", json, "print JSON");
  metrics->add_option("--band", band, "roll settle band, rad");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) {
      const quadtrot::Scenario s = quadtrot::load_config(config_path);
      const quadtrot::MetricsReport m = quadtrot::run_scenario(s, out_path);
      std::cout << quadtrot::to_text(m);
    } else if (*plan) {
      quadtrot::write_plan(quadtrot::load_config(config_path), out_path);
    } else if (*metrics) {
      quadtrot::MetricsOptions options;
      options.settle_band = band;
      const auto m = quadtrot::compute_metrics(quadtrot::read_telemetry(csv_path), options);
      std::cout << (json ? quadtrot::to_json(m) + "\n" : quadtrot::to_text(m));
    }
  } catch (const quadtrot::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const quadtrot::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const quadtrot::NumericalDivergence& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
