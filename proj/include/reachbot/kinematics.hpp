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

// Joint geometry of the four-boom parallel mechanism, boom Jacobians and the
// stacked wrench/velocity maps.
//
// Each boom is a prismatic + revolute pair mounted at a shoulder fixed in
// the body frame. The boom angle theta is measured relative to the body
// x-axis, so the wall-frame bearing of boom i is body.phi + theta_i.
//
// Contact force convention: x_i is the force the wall exerts on the boom
// tip, expressed in wall-frame axes. A boom is in tension when the axial
// component of x_i along the shoulder-to-tip direction is positive.
//
// Velocity-constraint chain: the wrench map H stacks, per contact, the
// wrench a unit contact force produces on the body, so H^T V is the body
// twist expressed at the contact points (force components only, since the
// pin joint passes no moment). Joint rates that keep anchored tips
// stationary in the wall frame satisfy J qdot = -(H^T V); the pair
// (qdot, V) with J qdot = +H^T V is the dual pair under which tau = J^T x
// and w = H x transmit equal power. Joint commands therefore carry a load
// convention: a positive prismatic command is the axial tension the
// actuator sustains, and its mechanical output power is -f_b * bdot.

#ifndef REACHBOT_KINEMATICS_HPP_
#define REACHBOT_KINEMATICS_HPP_

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "reachbot/frames.hpp"

namespace reachbot {

inline constexpr int kNumBooms = 4;

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat38 = Eigen::Matrix<double, 3, 8>;
using Mat88 = Eigen::Matrix<double, 8, 8>;

// Prismatic length, pivot angle and their rates for one boom.
struct BoomJointState {
  double b{0.0};          // boom length (m)
  double theta{0.0};      // boom angle in the body frame (rad)
  double b_dot{0.0};      // extension rate (m/s)
  double theta_dot{0.0};  // pivot rate (rad/s)
};

// Static per-boom parameters.
struct BoomConfig {
  Vec2 shoulder_offset{0.0, 0.0};  // shoulder position in the body frame (m)
  double b_min{0.0};               // minimum extension (m)
  double b_max{5.0};               // maximum extension (m)
  double ee_mass{1.0};             // end-effector mass (kg)
};

// Wall-frame anchor points plus the boom -> anchor assignment. `normals`
// optionally stores the hold direction of each anchor's wall (unit vector
// pointing into the surface); analysis falls back to a radial default when
// empty.
struct AnchorSet {
  std::vector<Vec2> anchors;
  std::array<std::optional<int>, kNumBooms> attached{};
  std::vector<Vec2> normals;

  int num_attached() const;
  // Throws Error on out-of-range indices or a doubly-claimed anchor.
  void validate() const;
};

// Stacked linear maps of a stance.
//
// wrench_map (H, 3x8): stacked contact forces -> body wrench in the body
// frame. joint_map (J, 8x8): block-diagonal wall-frame boom Jacobians;
// block i maps (b_dot, theta_dot) of boom i to the tip velocity relative to
// the shoulder. Column 2i of J is the wall-frame boom axis of boom i.
struct GraspMaps {
  Mat38 wrench_map = Mat38::Zero();
  Mat88 joint_map = Mat88::Zero();

  // Unit shoulder-to-tip axis of boom i in the wall frame.
  Vec2 boom_axis(int boom) const {
    return joint_map.block<2, 1>(2 * boom, 2 * boom);
  }
  // Rank of the wrench map, judged against 1e-9 * sigma_max.
  int wrench_map_rank() const;
  bool stable() const { return wrench_map_rank() == 3; }
};

// World position of boom i's shoulder.
Vec2 shoulder_world(const PlanarPose& body, const BoomConfig& cfg);

// World position of a boom tip given its joint state.
Vec2 tip_world(const PlanarPose& body, const BoomConfig& cfg,
               const BoomJointState& q);

// Joint state that places the tip of one boom on `anchor`. Rates are zero.
// Throws AnchorCoincidentError when the anchor equals the shoulder position
// and ExtensionOutOfRangeError when the required length leaves
// [b_min, b_max].
BoomJointState solve_boom_ik(const PlanarPose& body, const BoomConfig& cfg,
                             const Vec2& anchor);

// Joint states for every attached boom; detached slots are nullopt. Rates
// are zero.
std::array<std::optional<BoomJointState>, kNumBooms> inverse_kinematics(
    const PlanarPose& body, const std::array<BoomConfig, kNumBooms>& cfg,
    const AnchorSet& anchors);

// Wall-frame boom Jacobian: maps (b_dot, theta_dot) to the tip velocity
// relative to the shoulder. Columns are the boom axis and b times the axis
// rotated +pi/2. Rank one at b = 0; consumers flag the singularity.
Mat2 boom_jacobian(const BoomJointState& q, const PlanarPose& body);

// Wrench map of a single contact: columns are the body wrench of a unit
// wall-frame force applied at `contact`.
Eigen::Matrix<double, 3, 2> contact_wrench_map(const PlanarPose& body,
                                               const Vec2& contact);

// Wrench map for an arbitrary list of contact points (3 x 2n). Used for
// stance-stability checks on partial stances.
Eigen::MatrixXd wrench_map_for_contacts(const PlanarPose& body,
                                        const std::vector<Vec2>& contacts);

// Full stacked maps for a stance with all four booms attached.
// Throws SingularBoomError when some b_i = 0.
GraspMaps grasp_maps(const PlanarPose& body,
                     const std::array<BoomJointState, kNumBooms>& joints,
                     const std::array<BoomConfig, kNumBooms>& cfg,
                     const AnchorSet& anchors);

// Joint rates that keep every anchored tip stationary in the wall frame
// while the body moves with twist V (body frame). Layout is
// (b_dot_1, theta_dot_1, ..., b_dot_4, theta_dot_4).
// Throws SingularBoomError when any boom has zero length.
Vec8 joint_rates_from_body_twist(const GraspMaps& maps, const Twist& v);

}  // namespace reachbot

#endif  // REACHBOT_KINEMATICS_HPP_
