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

// Stage controllers: computed-torque body control with pseudoinverse wrench
// distribution and nullspace pretension, PD end-effector control, and
// actuator clipping.

#ifndef REACHBOT_CONTROL_HPP_
#define REACHBOT_CONTROL_HPP_

#include <Eigen/Core>

#include "reachbot/dynamics.hpp"
#include "reachbot/frames.hpp"
#include "reachbot/kinematics.hpp"

namespace reachbot {

// Positive-definite proportional/derivative gain pair. Shape is 3x3 for the
// body stage and 2x2 for the end-effector stage.
struct Gains {
  Eigen::MatrixXd kp;
  Eigen::MatrixXd kd;

  Gains() = default;
  // Throws GainNotPositiveDefiniteError unless both matrices are symmetric
  // with every eigenvalue positive.
  Gains(Eigen::MatrixXd proportional, Eigen::MatrixXd derivative);

  static Gains diagonal(const Eigen::VectorXd& kp_diag,
                        const Eigen::VectorXd& kd_diag);
};

struct ActuatorLimits {
  double extension_force_max{5.0};  // N
  double pivot_torque_max{2.5};     // N m
};

// Desired body pose with feedforward rates and accelerations, all in the
// wall frame parameterization (p, phi).
struct BodyTarget {
  Vec2 p_d{0.0, 0.0};
  double phi_d{0.0};
  Vec2 p_dot_d{0.0, 0.0};
  double phi_dot_d{0.0};
  Vec2 p_ddot_d{0.0, 0.0};
  double phi_ddot_d{0.0};

  static BodyTarget hold(const Vec2& p, double phi) {
    BodyTarget t;
    t.p_d = p;
    t.phi_d = phi;
    return t;
  }
};

// Desired joint coordinates for one boom.
struct EndEffectorTarget {
  double b_d{0.0};
  double theta_d{0.0};
  double b_dot_d{0.0};
  double theta_dot_d{0.0};
};

// Maps parameterization rates (p_dot in the wall frame, phi_dot) to the
// body-frame twist: blockdiag(R(phi)^T, 1). Globally nonsingular.
Mat3 parameterization_u(const PlanarPose& pose);

// Time derivative of parameterization_u along the given twist.
Mat3 parameterization_u_dot(const PlanarPose& pose, const Twist& vel);

// Contact forces x with wrench_map * x = w, using the minimum-norm right
// pseudoinverse. A nonzero pretension adds the nullspace component that
// brings each boom's axial tension as close as possible (least squares) to
// the requested level without altering the resultant wrench.
// Throws RankDeficientError when the wrench map is not surjective.
Vec8 distribute_wrench(const GraspMaps& maps, const Wrench& w,
                       double pretension);

// Feedback-linearizing body controller: cancels the modeled Newton-Euler
// dynamics so the pose error obeys e_ddot + Kd e_dot + Kp e = 0, then maps
// the required wrench through the stance to joint loads. Angle errors use
// shortest-arc differencing.
JointCommand body_computed_torque(const RobotState& state,
                                  const GraspMaps& maps,
                                  const BodyTarget& target,
                                  const Gains& gains,
                                  const BodyParams& params,
                                  double pretension = 0.0);

// PD regulation of one boom's joint coordinates.
BoomCommand end_effector_pd(const BoomJointState& q,
                            const EndEffectorTarget& target,
                            const Gains& gains);

// Saturates every component to its actuator limit. Idempotent.
JointCommand clip(const JointCommand& cmd, const ActuatorLimits& limits);

}  // namespace reachbot

#endif  // REACHBOT_CONTROL_HPP_
