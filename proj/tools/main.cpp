// Copyright 2026 The ReachBot Planar Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: run scenarios, produce factor-of-safety grids and
// mass/response-time trade studies, and emit plot files.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plots.hpp"
#include "reachbot/analysis.hpp"
#include "reachbot/scenario.hpp"
#include "reachbot/sim.hpp"
#include "reachbot/trace.hpp"

namespace {

using namespace reachbot;

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Scenario load_with_overrides(const std::string& path) {
  Scenario scenario = load_scenario(path);
  if (const char* seed_env = std::getenv("REACHBOT_SEED")) {
    const auto seed = static_cast<std::uint64_t>(std::stoull(seed_env));
    scenario.seed = seed;
    scenario.noise.seed = seed;
  }
  return scenario;
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out);
  }
  return dir;
}

std::vector<double> parse_mass_sweep(const std::string& spec) {
  // start:stop:step (inclusive) or a comma-separated list.
  std::vector<double> masses;
  if (spec.find(':') != std::string::npos) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
        step <= 0.0 || stop < start) {
      throw ScenarioInvalidError("--masses", "expected start:stop:step");
    }
    for (double m = start; m <= stop + 1e-9; m += step) {
      masses.push_back(m);
    }
    return masses;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    masses.push_back(std::stod(item));
  }
  if (masses.empty()) {
    throw ScenarioInvalidError("--masses", "empty mass list");
  }
  return masses;
}

int run_command(const std::string& scenario_path, double noise_sigma,
                double mass_scale, double inertia_scale,
                const std::string& out, int sample_every) {
  Scenario scenario = load_with_overrides(scenario_path);
  if (noise_sigma >= 0.0) {
    scenario.noise.sigma = noise_sigma;
    scenario.noise.fraction_of_median = false;
  }
  if (mass_scale > 0.0) {
    scenario.model_error_spec.mass_scale = mass_scale;
    scenario.model_error_spec.inertia_scale =
        inertia_scale > 0.0 ? inertia_scale : mass_scale;
  }

  const fs::path dir = prepare_out_dir(out);
  const Trace trace = run(scenario);

  write_trace_csv(trace, (dir / "trace.csv").string(), sample_every);
  write_summary_json(trace, scenario.gait, (dir / "summary.json").string());
  plots::write_trajectory_svg(trace, scenario,
                              (dir / "trajectory.svg").string());
  plots::write_errors_svg(trace, (dir / "errors.svg").string());

  std::cout << "completed " << scenario.gait.waypoints.size()
            << " waypoints in " << trace.records.back().t << " s; outputs in "
            << dir.string() << "\n";
  return 0;
}

int fos_command(const std::string& scenario_path, double pretension,
                const std::string& grid_spec, double range_fx,
                double range_fy, const std::string& out) {
  const Scenario scenario = load_with_overrides(scenario_path);

  int nx = 0, ny = 0;
  if (std::sscanf(grid_spec.c_str(), "%dx%d", &nx, &ny) != 2 || nx < 2 ||
      ny < 2) {
    throw ScenarioInvalidError("--grid", "expected NxM with N, M >= 2");
  }

  const fs::path dir = prepare_out_dir(out);
  const Stance stance = scenario.initial_stance();
  const GripModel grip = scenario.grip.value_or(GripModel{});
  const FosGrid grid = fos_grid(stance, range_fx, range_fy, nx, ny,
                                pretension, scenario.structure, grip);

  std::ofstream csv(dir / "fos_grid.csv");
  if (!csv) {
    throw IoError("cannot write fos_grid.csv");
  }
  csv << "fx_n,fy_n,fos\n";
  for (int i = 0; i < grid.fos.rows(); ++i) {
    for (int j = 0; j < grid.fos.cols(); ++j) {
      csv << fmt(grid.fx[j]) << ',' << fmt(grid.fy[i]) << ','
          << fmt(grid.fos(i, j)) << '\n';
    }
  }
  plots::write_fos_svg(grid, (dir / "fos.svg").string());

  nlohmann::json summary;
  summary["pretension_n"] = pretension;
  summary["grid"] = {{"nx", nx}, {"ny", ny}};
  summary["range_n"] = {range_fx, range_fy};
  summary["cells_total"] = nx * ny;
  summary["cells_fos_ge_1"] = grid.count_at_least(1.0);
  std::ofstream js(dir / "fos_summary.json");
  if (!js) {
    throw IoError("cannot write fos_summary.json");
  }
  js << summary.dump(2) << '\n';

  std::cout << "fos grid " << nx << "x" << ny << ", pretension " << pretension
            << " N: " << grid.count_at_least(1.0) << "/" << nx * ny
            << " cells with FoS >= 1; outputs in " << dir.string() << "\n";
  return 0;
}

int trade_command(const std::string& scenario_path,
                  const std::string& masses_spec, const std::string& out) {
  const Scenario scenario = load_with_overrides(scenario_path);
  const std::vector<double> masses = parse_mass_sweep(masses_spec);

  const fs::path dir = prepare_out_dir(out);
  const auto table = trade_study(scenario, masses, scenario.limits);

  std::ofstream csv(dir / "trade.csv");
  if (!csv) {
    throw IoError("cannot write trade.csv");
  }
  csv << "mass_kg,response_time_s,clipped";
  for (size_t k = 0; k < table.front().per_waypoint.size(); ++k) {
    csv << ",t_wp" << k + 1 << "_s";
  }
  csv << '\n';
  for (const auto& e : table) {
    csv << fmt(e.mass) << ',' << fmt(e.response_time) << ','
        << (e.clipped ? 1 : 0);
    for (double d : e.per_waypoint) csv << ',' << fmt(d);
    csv << '\n';
  }
  plots::write_trade_svg(table, (dir / "trade.svg").string());

  const auto best =
      std::min_element(table.begin(), table.end(),
                       [](const TradeEntry& a, const TradeEntry& b) {
                         return a.response_time < b.response_time;
                       });
  std::cout << "trade study over " << table.size()
            << " masses; fastest response " << best->response_time
            << " s at " << best->mass << " kg; outputs in " << dir.string()
            << "\n";
  return 0;
}

int validate_command(const std::string& scenario_path) {
  const Scenario scenario = load_with_overrides(scenario_path);
  std::cout << "scenario '" << scenario.name << "' is valid: "
            << scenario.gait.waypoints.size() << " waypoints, "
            << scenario.anchors.anchors.size()
            << " anchors, stable initial stance\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Planar boom-robot simulator: waypoint gait runs, factor-of-safety "
      "grids and mass/response-time trade studies"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out = "out";
  double noise_sigma = -1.0;
  double mass_scale = -1.0;
  double inertia_scale = -1.0;
  int sample_every = 1;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and record a trace");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  run_cmd->add_option("--noise-sigma", noise_sigma,
                      "Override actuator noise sigma (actuator units)");
  run_cmd->add_option("--mass-scale", mass_scale,
                      "Plant mass scale relative to the modeled mass");
  run_cmd->add_option("--inertia-scale", inertia_scale,
                      "Plant inertia scale (defaults to --mass-scale)");
  run_cmd->add_option("--out", out, "Output directory");
  run_cmd->add_option("--sample-every", sample_every,
                      "Write every Nth trace row (>= 1)")
      ->check(CLI::PositiveNumber);

  double pretension = 0.0;
  std::string grid_spec = "50x50";
  std::vector<double> range = {100.0, 100.0};
  auto* fos_cmd =
      app.add_subcommand("fos", "Factor-of-safety grid over disturbances");
  fos_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  fos_cmd->add_option("--pretension", pretension, "Boom pretension (N)");
  fos_cmd->add_option("--grid", grid_spec, "Grid resolution NxM");
  fos_cmd->add_option("--range", range, "Half-range of F_x and F_y (N)")
      ->expected(2);
  fos_cmd->add_option("--out", out, "Output directory");

  std::string masses_spec = "10:100:10";
  auto* trade_cmd = app.add_subcommand(
      "trade", "Mass/response-time trade study over the scenario's program");
  trade_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  trade_cmd->add_option("--masses", masses_spec,
                        "Masses in kg: start:stop:step or a comma list");
  trade_cmd->add_option("--out", out, "Output directory");

  auto* validate_cmd = app.add_subcommand(
      "validate", "Check scenario schema and stance stability");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return run_command(scenario_path, noise_sigma, mass_scale,
                         inertia_scale, out, sample_every);
    }
    if (fos_cmd->parsed()) {
      return fos_command(scenario_path, pretension, grid_spec, range[0],
                         range[1], out);
    }
    if (trade_cmd->parsed()) {
      return trade_command(scenario_path, masses_spec, out);
    }
    if (validate_cmd->parsed()) {
      return validate_command(scenario_path);
    }
  } catch (const ScenarioInvalidError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergentError& e) {
    std::cerr << "run did not converge: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
