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

// Scenario assembly: a complete description of one simulation run, loadable
// from a JSON file with unit-suffixed keys (schema described in the README).

#ifndef REACHBOT_SCENARIO_HPP_
#define REACHBOT_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "reachbot/analysis.hpp"
#include "reachbot/control.hpp"
#include "reachbot/dynamics.hpp"
#include "reachbot/gait.hpp"

namespace reachbot {

// Plant-vs-model scales for robustness studies.
struct ModelErrorSpec {
  double mass_scale{1.0};
  double inertia_scale{1.0};
};

struct Scenario {
  std::string name{"scenario"};
  std::uint64_t seed{0};
  double dt{1e-3};                 // s
  double duration_budget{600.0};   // s
  double pretension{0.0};          // N

  RobotModel model;
  Vec2 body_size{0.30, 0.20};      // rectangle footprint (m), for the
                                   // default plate inertia and plotting
  PlanarPose start_pose;
  AnchorSet anchors;               // initial assignment, all four attached
  GaitProgram gait;

  Gains body_gains;                // 3x3
  Gains ee_gains;                  // 2x2
  ActuatorLimits limits;

  NoiseSpec noise;                 // sigma 0 disables injection
  ModelErrorSpec model_error_spec;
  std::optional<GripModel> grip;   // enables contact diagnostics
  BoomStructuralParams structure;  // used by factor-of-safety analysis

  // Throws ScenarioInvalidError naming the offending field; also checks
  // that the initial stance is kinematically feasible and stable.
  void validate() const;

  // The start pose with its initial anchor assignment, for analysis.
  Stance initial_stance() const;

  // Plate inertia of a rectangle footprint: m (w^2 + h^2) / 12.
  static double default_inertia(double mass, const Vec2& size);
};

// Built-in defaults: a 0.30 x 0.20 m, 30 kg body with corner shoulders,
// booms extending 0.1--5 m and 1 kg end-effectors.
Scenario default_scenario();

// Parses a scenario from JSON text. Unknown keys are rejected.
Scenario parse_scenario(const std::string& json_text);

// Loads and validates a scenario file.
Scenario load_scenario(const std::string& path);

// Serializes a scenario back to JSON (used to ship generated scenarios).
std::string scenario_to_json(const Scenario& scenario);

}  // namespace reachbot

#endif  // REACHBOT_SCENARIO_HPP_
