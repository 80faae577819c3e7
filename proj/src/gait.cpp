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

#include "reachbot/gait.hpp"

#include <string>

#include <Eigen/Dense>

namespace reachbot {

namespace {

bool stance_stable(const PlanarPose& body, const AnchorSet& anchors) {
  std::vector<Vec2> contacts;
  for (int i = 0; i < kNumBooms; ++i) {
    if (anchors.attached[i].has_value()) {
      contacts.push_back(anchors.anchors[*anchors.attached[i]]);
    }
  }
  const Eigen::MatrixXd h = wrench_map_for_contacts(body, contacts);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
  const auto& sigma = svd.singularValues();
  return sigma.size() >= 3 && sigma(2) > 1e-9 * sigma(0);
}

// Applies entry side effects of waypoint `index` to `status`.
void enter_waypoint(GaitStatus& status, int index, const GaitProgram& program,
                    const PlanarPose& body) {
  status.index = index;
  const Waypoint& wp = program.waypoints[index];
  if (wp.kind == WaypointKind::kBodyPose) {
    status.stage = Stage::kBodyMove;
    status.active_boom = -1;
    return;
  }
  AnchorSet trial = status.anchors;
  trial.attached[wp.boom].reset();
  if (!stance_stable(body, trial)) {
    throw StanceUnstableError("detaching boom " + std::to_string(wp.boom) +
                              " at waypoint " + std::to_string(index) +
                              " leaves a rank-deficient stance");
  }
  status.anchors = trial;
  status.stage = Stage::kEndEffectorMove;
  status.active_boom = wp.boom;
}

}  // namespace

Waypoint Waypoint::body_pose(const Vec2& p, double phi) {
  Waypoint wp;
  wp.kind = WaypointKind::kBodyPose;
  wp.p_d = p;
  wp.phi_d = wrap_angle(phi);
  return wp;
}

Waypoint Waypoint::end_effector(int boom, int anchor) {
  Waypoint wp;
  wp.kind = WaypointKind::kEndEffector;
  wp.boom = boom;
  wp.anchor = anchor;
  return wp;
}

void GaitProgram::validate(int num_anchors) const {
  if (waypoints.empty()) {
    throw Error("gait program is empty");
  }
  if (pos_threshold <= 0.0 || vel_threshold <= 0.0 || ang_threshold <= 0.0 ||
      ang_vel_threshold <= 0.0) {
    throw Error("gait thresholds must be positive");
  }
  for (size_t k = 0; k < waypoints.size(); ++k) {
    const Waypoint& wp = waypoints[k];
    if (wp.kind != WaypointKind::kEndEffector) continue;
    if (wp.boom < 0 || wp.boom >= kNumBooms) {
      throw Error("waypoint " + std::to_string(k) + ": boom index " +
                  std::to_string(wp.boom) + " out of range");
    }
    if (wp.anchor < 0 || wp.anchor >= num_anchors) {
      throw Error("waypoint " + std::to_string(k) + ": anchor index " +
                  std::to_string(wp.anchor) + " out of range");
    }
  }
}

GaitStatus gait_start(const GaitProgram& program, const AnchorSet& initial,
                      const PlanarPose& body) {
  program.validate(static_cast<int>(initial.anchors.size()));
  initial.validate();
  if (initial.num_attached() != kNumBooms) {
    throw Error("gait requires all four booms attached at start");
  }
  GaitStatus status;
  status.anchors = initial;
  enter_waypoint(status, 0, program, body);
  return status;
}

bool waypoint_satisfied(const GaitStatus& status, const RobotState& state,
                        const GaitProgram& program, const RobotModel& model) {
  const Waypoint& wp = program.waypoints[status.index];
  if (wp.kind == WaypointKind::kBodyPose) {
    const Vec2 p_dot = state.body.rotation() * state.vel.v;
    return (state.body.p - wp.p_d).norm() < program.pos_threshold &&
           std::abs(angle_diff(state.body.phi, wp.phi_d)) <
               program.ang_threshold &&
           p_dot.norm() < program.vel_threshold &&
           std::abs(state.vel.w) < program.ang_vel_threshold;
  }
  const BoomJointState& q = state.joints[wp.boom];
  const Vec2 tip = tip_world(state.body, model.booms[wp.boom], q);
  const Vec2 target = status.anchors.anchors[wp.anchor];
  const Vec2 tip_vel = boom_jacobian(q, state.body) *
                       Eigen::Vector2d(q.b_dot, q.theta_dot);
  return (tip - target).norm() < program.pos_threshold &&
         tip_vel.norm() < program.vel_threshold;
}

GaitStatus advance(const GaitStatus& status, const RobotState& state,
                   const GaitProgram& program, const RobotModel& model) {
  if (status.done) {
    return status;
  }
  if (!waypoint_satisfied(status, state, program, model)) {
    return status;
  }
  GaitStatus next = status;
  const Waypoint& wp = program.waypoints[status.index];
  if (wp.kind == WaypointKind::kEndEffector) {
    next.anchors.attached[wp.boom] = wp.anchor;
    next.anchors.validate();
  }
  if (status.index + 1 >= static_cast<int>(program.waypoints.size())) {
    next.done = true;
    next.stage = Stage::kBodyMove;
    next.active_boom = -1;
    next.index = status.index;
    return next;
  }
  enter_waypoint(next, status.index + 1, program, state.body);
  return next;
}

ControllerSelection select_controller(const GaitStatus& status) {
  return ControllerSelection{status.stage, status.active_boom};
}

}  // namespace reachbot
