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

// Standalone SVG plot writers for the command-line tool. Data tables are
// always written alongside, so any external plotter can be used instead.

#ifndef REACHBOT_TOOLS_PLOTS_HPP_
#define REACHBOT_TOOLS_PLOTS_HPP_

#include <string>
#include <vector>

#include "reachbot/analysis.hpp"
#include "reachbot/scenario.hpp"
#include "reachbot/trace.hpp"

namespace reachbot::plots {

// Overview of the run: anchors, walls implied by anchors, body path, boom
// snapshots and numbered waypoints.
void write_trajectory_svg(const Trace& trace, const Scenario& scenario,
                          const std::string& path);

// Position/heading error of the active target against time.
void write_errors_svg(const Trace& trace, const std::string& path);

// Colored factor-of-safety cells over the disturbance grid.
void write_fos_svg(const FosGrid& grid, const std::string& path);

// Response time against mass.
void write_trade_svg(const std::vector<TradeEntry>& table,
                     const std::string& path);

}  // namespace reachbot::plots

#endif  // REACHBOT_TOOLS_PLOTS_HPP_
