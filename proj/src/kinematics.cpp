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

#include "reachbot/kinematics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace reachbot {

namespace {

// Anchors closer to the shoulder than this are treated as coincident.
constexpr double kCoincidentTol = 1e-12;

std::string boom_tag(int boom) { return "boom " + std::to_string(boom); }

}  // namespace

int AnchorSet::num_attached() const {
  int n = 0;
  for (const auto& a : attached) {
    if (a.has_value()) ++n;
  }
  return n;
}

void AnchorSet::validate() const {
  std::vector<bool> used(anchors.size(), false);
  for (int i = 0; i < kNumBooms; ++i) {
    if (!attached[i].has_value()) continue;
    const int idx = *attached[i];
    if (idx < 0 || idx >= static_cast<int>(anchors.size())) {
      throw Error(boom_tag(i) + ": anchor index " + std::to_string(idx) +
                  " out of range");
    }
    if (used[idx]) {
      throw Error("anchor " + std::to_string(idx) +
                  " assigned to more than one boom");
    }
    used[idx] = true;
  }
  if (!normals.empty() && normals.size() != anchors.size()) {
    throw Error("anchor normals must be empty or match the anchor count");
  }
}

int GraspMaps::wrench_map_rank() const {
  Eigen::JacobiSVD<Mat38> svd(wrench_map);
  const auto& sigma = svd.singularValues();
  const double tol = 1e-9 * sigma(0);
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++rank;
  }
  return rank;
}

Vec2 shoulder_world(const PlanarPose& body, const BoomConfig& cfg) {
  return body.p + body.rotation() * cfg.shoulder_offset;
}

Vec2 tip_world(const PlanarPose& body, const BoomConfig& cfg,
               const BoomJointState& q) {
  const double bearing = body.phi + q.theta;
  return shoulder_world(body, cfg) +
         q.b * Vec2(std::cos(bearing), std::sin(bearing));
}

BoomJointState solve_boom_ik(const PlanarPose& body, const BoomConfig& cfg,
                             const Vec2& anchor) {
  const Vec2 shoulder = shoulder_world(body, cfg);
  const Vec2 d = anchor - shoulder;
  const double b = d.norm();
  if (b < kCoincidentTol) {
    throw AnchorCoincidentError("anchor coincides with shoulder at (" +
                                std::to_string(shoulder.x()) + ", " +
                                std::to_string(shoulder.y()) + ")");
  }
  if (b < cfg.b_min || b > cfg.b_max) {
    throw ExtensionOutOfRangeError(
        "required extension " + std::to_string(b) + " m outside [" +
        std::to_string(cfg.b_min) + ", " + std::to_string(cfg.b_max) + "]");
  }
  BoomJointState q;
  q.b = b;
  q.theta = wrap_angle(std::atan2(d.y(), d.x()) - body.phi);
  return q;
}

std::array<std::optional<BoomJointState>, kNumBooms> inverse_kinematics(
    const PlanarPose& body, const std::array<BoomConfig, kNumBooms>& cfg,
    const AnchorSet& anchors) {
  anchors.validate();
  std::array<std::optional<BoomJointState>, kNumBooms> joints;
  for (int i = 0; i < kNumBooms; ++i) {
    if (!anchors.attached[i].has_value()) continue;
    try {
      joints[i] =
          solve_boom_ik(body, cfg[i], anchors.anchors[*anchors.attached[i]]);
    } catch (const AnchorCoincidentError& e) {
      throw AnchorCoincidentError(boom_tag(i) + ": " + e.what());
    } catch (const ExtensionOutOfRangeError& e) {
      throw ExtensionOutOfRangeError(boom_tag(i) + ": " + e.what());
    }
  }
  return joints;
}

Mat2 boom_jacobian(const BoomJointState& q, const PlanarPose& body) {
  const double bearing = body.phi + q.theta;
  const Vec2 axis(std::cos(bearing), std::sin(bearing));
  Mat2 j;
  j.col(0) = axis;
  j.col(1) = q.b * perp(axis);
  return j;
}

Eigen::Matrix<double, 3, 2> contact_wrench_map(const PlanarPose& body,
                                               const Vec2& contact) {
  // Contact frame: origin at the contact point, wall-aligned axes.
  const PlanarPose rel(body.rotation().transpose() * (contact - body.p),
                       -body.phi);
  Eigen::Matrix<double, 3, 2> selector = Eigen::Matrix<double, 3, 2>::Zero();
  selector(0, 0) = 1.0;
  selector(1, 1) = 1.0;
  return transition_matrix(rel).transpose() * selector;
}

Eigen::MatrixXd wrench_map_for_contacts(const PlanarPose& body,
                                        const std::vector<Vec2>& contacts) {
  Eigen::MatrixXd h(3, 2 * contacts.size());
  for (size_t i = 0; i < contacts.size(); ++i) {
    h.block<3, 2>(0, 2 * i) = contact_wrench_map(body, contacts[i]);
  }
  return h;
}

GraspMaps grasp_maps(const PlanarPose& body,
                     const std::array<BoomJointState, kNumBooms>& joints,
                     [[maybe_unused]] const std::array<BoomConfig, kNumBooms>& cfg,
                     const AnchorSet& anchors) {
  anchors.validate();
  if (anchors.num_attached() != kNumBooms) {
    throw Error("grasp maps need all four booms attached");
  }
  GraspMaps maps;
  for (int i = 0; i < kNumBooms; ++i) {
    if (joints[i].b <= 0.0) {
      throw SingularBoomError(boom_tag(i) + " has zero length");
    }
    const Vec2 contact = anchors.anchors[*anchors.attached[i]];
    maps.wrench_map.block<3, 2>(0, 2 * i) = contact_wrench_map(body, contact);
    maps.joint_map.block<2, 2>(2 * i, 2 * i) = boom_jacobian(joints[i], body);
  }
  return maps;
}

Vec8 joint_rates_from_body_twist(const GraspMaps& maps, const Twist& v) {
  // Body twist expressed at each contact (wall axes), i.e. H^T V.
  const Vec8 contact_vel = maps.wrench_map.transpose() * v.vector();
  Vec8 rates;
  for (int i = 0; i < kNumBooms; ++i) {
    const Mat2 j = maps.joint_map.block<2, 2>(2 * i, 2 * i);
    const double b = j.col(1).norm();
    if (b < 1e-12) {
      throw SingularBoomError(boom_tag(i) + " is singular (b = 0)");
    }
    // Tips pinned to the wall: joint motion cancels the body motion there.
    rates.segment<2>(2 * i) =
        j.inverse() * (-contact_vel.segment<2>(2 * i));
  }
  return rates;
}

}  // namespace reachbot
