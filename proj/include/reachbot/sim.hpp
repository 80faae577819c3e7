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

// Scenario execution: wires gait, control and dynamics into a run loop and
// records a trace.

#ifndef REACHBOT_SIM_HPP_
#define REACHBOT_SIM_HPP_

#include <vector>

#include "reachbot/scenario.hpp"
#include "reachbot/trace.hpp"

namespace reachbot {

// Executes the scenario's gait program to completion. Deterministic under
// the scenario seed. Throws ScenarioInvalidError before starting,
// NonConvergentError when the duration budget runs out, and re-raises
// dynamics errors prefixed with the offending timestamp.
Trace run(const Scenario& scenario);

// Duration of each waypoint, from activation to threshold satisfaction.
// Throws IncompleteTraceError when the trace ended mid-waypoint.
std::vector<double> response_time(const Trace& trace,
                                  const GaitProgram& program);

// Body-position deviation of `other` from `nominal`, sampled over steps
// where the nominal run is in body movement. Early/late window means are
// aggregated over the first and last quarter of each body-move segment.
struct DeviationStats {
  double max_dev{0.0};
  double mean_dev{0.0};
  double early_window_mean{0.0};
  double late_window_mean{0.0};
};

DeviationStats body_deviation(const Trace& nominal, const Trace& other);

}  // namespace reachbot

#endif  // REACHBOT_SIM_HPP_
