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

// Waypoint programs and the two-stage state machine that alternates body
// movement and end-effector movement with instantaneous attach/detach.

#ifndef REACHBOT_GAIT_HPP_
#define REACHBOT_GAIT_HPP_

#include <vector>

#include "reachbot/dynamics.hpp"
#include "reachbot/frames.hpp"
#include "reachbot/kinematics.hpp"

namespace reachbot {

enum class WaypointKind { kBodyPose, kEndEffector };

// A target either for the robot body or for one end-effector.
struct Waypoint {
  WaypointKind kind{WaypointKind::kBodyPose};
  Vec2 p_d{0.0, 0.0};  // body position target (m)
  double phi_d{0.0};   // body heading target (rad)
  int boom{-1};        // end-effector waypoint: boom to move
  int anchor{-1};      // end-effector waypoint: destination anchor index

  static Waypoint body_pose(const Vec2& p, double phi);
  static Waypoint end_effector(int boom, int anchor);
};

struct GaitProgram {
  std::vector<Waypoint> waypoints;
  double pos_threshold{0.005};      // m
  double vel_threshold{0.002};      // m/s
  double ang_threshold{0.005};      // rad
  double ang_vel_threshold{0.002};  // rad/s

  // Throws Error on an empty program or non-positive thresholds.
  void validate(int num_anchors) const;
};

// Progress through a program. Owns the evolving anchor assignment.
struct GaitStatus {
  int index{0};
  Stage stage{Stage::kBodyMove};
  int active_boom{-1};  // detached boom during kEndEffectorMove
  AnchorSet anchors;
  bool done{false};
};

// Status at program start: index 0 with the first waypoint entered (an
// end-effector first waypoint detaches its boom immediately).
// Throws StanceUnstableError when a detach would leave the remaining
// three-contact stance rank deficient.
GaitStatus gait_start(const GaitProgram& program, const AnchorSet& initial,
                      const PlanarPose& body);

// Advances the state machine by one check: when the active target is inside
// the position and speed thresholds (plus the angular pair for body
// waypoints), the index increments and attach/detach events fire. `done` is
// absorbing. Throws StanceUnstableError as in gait_start.
GaitStatus advance(const GaitStatus& status, const RobotState& state,
                   const GaitProgram& program, const RobotModel& model);

// True when the active waypoint's thresholds are currently met.
bool waypoint_satisfied(const GaitStatus& status, const RobotState& state,
                        const GaitProgram& program, const RobotModel& model);

struct ControllerSelection {
  Stage stage{Stage::kBodyMove};
  int boom{-1};
};

// Dispatch for the stage controllers: body computed torque during
// kBodyMove, per-boom PD during kEndEffectorMove with the other three booms
// holding pretension.
ControllerSelection select_controller(const GaitStatus& status);

}  // namespace reachbot

#endif  // REACHBOT_GAIT_HPP_
