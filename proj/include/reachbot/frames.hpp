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

// Planar rigid-body poses, twists, wrenches and the maps between frames.
//
// Conventions used throughout the library:
//  - A pose (p, phi) places a child frame in a parent frame; phi is stored
//    wrapped to (-pi, pi].
//  - A twist is (v, w) with v a linear velocity 2-vector and w a scalar
//    angular rate; a wrench is (f, tau).
//  - transition_matrix(rel) maps twists expressed in the parent frame to the
//    child frame described by `rel`; its transpose maps wrenches the other
//    way. The pairing <T v, w> == <v, T^T w> preserves mechanical power.

#ifndef REACHBOT_FRAMES_HPP_
#define REACHBOT_FRAMES_HPP_

#include <Eigen/Core>

#include "reachbot/errors.hpp"

namespace reachbot {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Wraps an angle to (-pi, pi]. Idempotent.
double wrap_angle(double angle);

// Shortest-arc signed difference a - b, wrapped to (-pi, pi].
double angle_diff(double a, double b);

// 2x2 rotation matrix for angle phi.
Mat2 rot2(double phi);

// Scalar planar cross product a x b = ax*by - ay*bx.
inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Rotates a vector by +pi/2.
inline Vec2 perp(const Vec2& a) { return Vec2(-a.y(), a.x()); }

// Rigid planar pose: position p and heading phi (wrapped to (-pi, pi]).
struct PlanarPose {
  Vec2 p{0.0, 0.0};
  double phi{0.0};

  PlanarPose() = default;
  PlanarPose(const Vec2& position, double heading);

  Mat2 rotation() const { return rot2(phi); }

  static PlanarPose identity() { return PlanarPose(); }
};

// Planar twist: linear velocity and scalar angular rate. Components must be
// finite.
struct Twist {
  Vec2 v{0.0, 0.0};
  double w{0.0};

  Twist() = default;
  Twist(const Vec2& linear, double angular);

  Vec3 vector() const { return Vec3(v.x(), v.y(), w); }
  static Twist from_vector(const Vec3& t) { return Twist(t.head<2>(), t.z()); }
};

// Planar wrench: force and scalar moment. Components must be finite.
struct Wrench {
  Vec2 f{0.0, 0.0};
  double tau{0.0};

  Wrench() = default;
  Wrench(const Vec2& force, double moment);

  Vec3 vector() const { return Vec3(f.x(), f.y(), tau); }
  static Wrench from_vector(const Vec3& w) {
    return Wrench(w.head<2>(), w.z());
  }
};

// Chains two poses: the result places b relative to a's parent.
PlanarPose compose(const PlanarPose& a, const PlanarPose& b);

// Pose such that compose(pose, inverse(pose)) is the identity.
PlanarPose inverse(const PlanarPose& pose);

// Twist transition matrix for the child frame described by `rel` (pose of
// the child expressed in the parent). Maps parent-frame twists to the child
// frame; the transpose carries child-frame wrenches back to the parent.
Mat3 transition_matrix(const PlanarPose& rel);

}  // namespace reachbot

#endif  // REACHBOT_FRAMES_HPP_
