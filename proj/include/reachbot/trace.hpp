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

// Time-indexed run records and their file writers.

#ifndef REACHBOT_TRACE_HPP_
#define REACHBOT_TRACE_HPP_

#include <array>
#include <string>
#include <vector>

#include "reachbot/dynamics.hpp"
#include "reachbot/gait.hpp"

namespace reachbot {

// One integrator step. Commands are recorded before clipping (`cmd_raw`)
// and as applied to the plant after clipping and noise (`cmd_applied`).
// Contact forces are wall-frame pairs per boom; they and the grip margins
// are NaN-free only during body movement with a grip model configured.
struct TraceRecord {
  double t{0.0};
  PlanarPose body;
  Twist vel;  // body frame
  std::array<BoomJointState, kNumBooms> joints{};
  JointCommand cmd_raw;
  JointCommand cmd_applied;
  Vec8 contact_forces = Vec8::Zero();
  int waypoint_index{0};
  Stage stage{Stage::kBodyMove};
  int active_boom{-1};
  double pos_err{0.0};  // body position error or moving-tip error (m)
  double ang_err{0.0};  // body heading error (rad); 0 in end-effector moves
  std::array<bool, kNumBooms> attached{};
  std::array<double, kNumBooms> grip_margins{};
};

struct Trace {
  double dt{0.0};
  std::vector<TraceRecord> records;
  bool completed{false};
  GaitStatus final_status;
  long clipped_steps{0};
  long grip_violations{0};
};

// Delimiter-separated table, one row per record, header naming columns and
// units. `sample_every` > 1 thins the output (the final record is always
// written).
void write_trace_csv(const Trace& trace, const std::string& path,
                     int sample_every = 1);

// Compact JSON summary: completion, final errors, per-waypoint response
// times, clipping and grip-violation counts.
void write_summary_json(const Trace& trace, const GaitProgram& program,
                        const std::string& path);

}  // namespace reachbot

#endif  // REACHBOT_TRACE_HPP_
