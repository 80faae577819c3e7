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

// Forward dynamics for both gait stages and the fixed-step integrator.
//
// Body movement treats the mechanism as kinematically determinate: the
// booms are massless, so joint coordinates are slaved to the body pose and
// actuator commands reach the body as the contact wrench H * J^-T * tau.
// End-effector movement holds the body and integrates one boom as a point
// mass on a massless rod in polar joint coordinates.

#ifndef REACHBOT_DYNAMICS_HPP_
#define REACHBOT_DYNAMICS_HPP_

#include <array>

#include "reachbot/frames.hpp"
#include "reachbot/kinematics.hpp"

namespace reachbot {

// Body mass properties and ambient gravity (wall frame).
struct BodyParams {
  double mass{30.0};        // kg
  double inertia{0.325};    // kg m^2
  Vec2 gravity{0.0, 0.0};   // m/s^2
};

// Mass properties plus boom geometry; everything static about the robot.
struct RobotModel {
  BodyParams body;
  std::array<BoomConfig, kNumBooms> booms;
};

// Actuator command for one boom. Body-stage commands use a load
// convention: extension_force is the axial tension the prismatic actuator
// sustains and pivot_torque the moment of the contact force about the
// shoulder. End-effector commands are motive (positive extension_force
// lengthens the boom).
struct BoomCommand {
  double extension_force{0.0};  // N
  double pivot_torque{0.0};     // N m
};

struct JointCommand {
  std::array<BoomCommand, kNumBooms> booms{};

  Vec8 vector() const;
  static JointCommand from_vector(const Vec8& v);
};

enum class Stage { kBodyMove, kEndEffectorMove };

struct RobotState {
  PlanarPose body;
  Twist vel;  // body frame
  std::array<BoomJointState, kNumBooms> joints{};
  Stage stage{Stage::kBodyMove};
  int active_boom{-1};  // detached boom during kEndEffectorMove
};

// Contact forces realizing the commanded joint loads: x = J^-T tau.
// Throws SingularBoomError when any boom has zero length.
Vec8 contact_forces_from_torques(const GraspMaps& maps,
                                 const JointCommand& cmd);

// Body acceleration (v_dot in the body frame, w_dot) under the commanded
// joint loads; Newton-Euler with the planar Coriolis term w x v.
Vec3 body_forward_dynamics(const RobotState& state, const GraspMaps& maps,
                           const JointCommand& cmd, const BodyParams& params);

// Polar accelerations (b_ddot, theta_ddot) of a point mass riding a
// massless boom under radial force f_b and shoulder torque tau_theta.
std::pair<double, double> end_effector_forward_dynamics(
    const BoomJointState& q, double f_b, double tau_theta, double mass);

// Classical RK4 advance of the active stage's dynamics with the command
// held over the step. In kBodyMove the joints are re-derived from the new
// body pose afterwards (constraint projection). Throws
// IntegrationDivergedError when a state magnitude passes 1e6 and propagates
// SingularBoomError / ExtensionOutOfRangeError from the stance.
RobotState step(const RobotState& state, const JointCommand& cmd,
                const RobotModel& model, const AnchorSet& anchors, double dt);

// Kinetic energy of the body (end-effectors are anchored in kBodyMove).
double kinetic_energy(const RobotState& state, const BodyParams& params);

}  // namespace reachbot

#endif  // REACHBOT_DYNAMICS_HPP_
