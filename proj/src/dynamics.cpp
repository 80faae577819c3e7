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

#include "reachbot/dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace reachbot {

namespace {

constexpr double kDivergenceBound = 1e6;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

void check_finite_bound(double value, const char* what) {
  if (!std::isfinite(value) || std::abs(value) > kDivergenceBound) {
    throw IntegrationDivergedError(std::string(what) + " diverged to " +
                                   std::to_string(value));
  }
}

// Body-stage state vector: (px, py, phi, vx, vy, w) with v in the body
// frame and phi unwrapped during integration.
Vec6 body_state_vector(const RobotState& s) {
  Vec6 y;
  y << s.body.p.x(), s.body.p.y(), s.body.phi, s.vel.v.x(), s.vel.v.y(),
      s.vel.w;
  return y;
}

Vec6 body_derivative(const Vec6& y, const JointCommand& cmd,
                     const RobotModel& model, const AnchorSet& anchors) {
  const PlanarPose pose(Vec2(y(0), y(1)), y(2));
  RobotState s;
  s.body = pose;
  s.vel = Twist(Vec2(y(3), y(4)), y(5));
  const auto joints = inverse_kinematics(pose, model.booms, anchors);
  std::array<BoomJointState, kNumBooms> fixed;
  for (int i = 0; i < kNumBooms; ++i) {
    fixed[i] = joints[i].value();
  }
  const GraspMaps maps = grasp_maps(pose, fixed, model.booms, anchors);
  const Vec3 accel = body_forward_dynamics(s, maps, cmd, model.body);

  Vec6 dy;
  dy.head<2>() = pose.rotation() * s.vel.v;  // world-frame translation rate
  dy(2) = s.vel.w;
  dy.tail<3>() = accel;
  return dy;
}

Vec4 boom_state_vector(const BoomJointState& q) {
  Vec4 y;
  y << q.b, q.theta, q.b_dot, q.theta_dot;
  return y;
}

Vec4 boom_derivative(const Vec4& y, const BoomCommand& cmd, double mass) {
  BoomJointState q;
  q.b = y(0);
  q.theta = y(1);
  q.b_dot = y(2);
  q.theta_dot = y(3);
  const auto [b_ddot, theta_ddot] = end_effector_forward_dynamics(
      q, cmd.extension_force, cmd.pivot_torque, mass);
  Vec4 dy;
  dy << q.b_dot, q.theta_dot, b_ddot, theta_ddot;
  return dy;
}

template <typename VecT, typename DerivFn>
VecT rk4(const VecT& y, double dt, const DerivFn& f) {
  const VecT k1 = f(y);
  const VecT k2 = f(y + 0.5 * dt * k1);
  const VecT k3 = f(y + 0.5 * dt * k2);
  const VecT k4 = f(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vec8 JointCommand::vector() const {
  Vec8 v;
  for (int i = 0; i < kNumBooms; ++i) {
    v(2 * i) = booms[i].extension_force;
    v(2 * i + 1) = booms[i].pivot_torque;
  }
  return v;
}

JointCommand JointCommand::from_vector(const Vec8& v) {
  JointCommand cmd;
  for (int i = 0; i < kNumBooms; ++i) {
    cmd.booms[i].extension_force = v(2 * i);
    cmd.booms[i].pivot_torque = v(2 * i + 1);
  }
  return cmd;
}

Vec8 contact_forces_from_torques(const GraspMaps& maps,
                                 const JointCommand& cmd) {
  const Vec8 tau = cmd.vector();
  Vec8 x;
  for (int i = 0; i < kNumBooms; ++i) {
    const Mat2 j = maps.joint_map.block<2, 2>(2 * i, 2 * i);
    const double b = j.col(1).norm();
    if (b < 1e-12) {
      throw SingularBoomError("boom " + std::to_string(i) +
                              " cannot transmit torque at b = 0");
    }
    x.segment<2>(2 * i) = j.transpose().inverse() * tau.segment<2>(2 * i);
  }
  return x;
}

Vec3 body_forward_dynamics(const RobotState& state, const GraspMaps& maps,
                           const JointCommand& cmd,
                           const BodyParams& params) {
  const Vec8 x = contact_forces_from_torques(maps, cmd);
  const Vec3 wrench = maps.wrench_map * x;
  const Vec2 gravity_body =
      state.body.rotation().transpose() * params.gravity;

  Vec3 accel;
  accel.head<2>() = wrench.head<2>() / params.mass + gravity_body -
                    state.vel.w * perp(state.vel.v);
  accel(2) = wrench(2) / params.inertia;
  return accel;
}

std::pair<double, double> end_effector_forward_dynamics(
    const BoomJointState& q, double f_b, double tau_theta, double mass) {
  if (mass <= 0.0) {
    throw Error("end-effector mass must be positive");
  }
  if (q.b <= 0.0) {
    throw SingularBoomError("end-effector dynamics undefined at b = 0");
  }
  const double b_ddot = f_b / mass + q.b * q.theta_dot * q.theta_dot;
  const double theta_ddot =
      tau_theta / (mass * q.b * q.b) - 2.0 * q.b_dot * q.theta_dot / q.b;
  return {b_ddot, theta_ddot};
}

RobotState step(const RobotState& state, const JointCommand& cmd,
                const RobotModel& model, const AnchorSet& anchors,
                double dt) {
  if (dt <= 0.0) {
    throw Error("step requires dt > 0");
  }
  RobotState next = state;

  if (state.stage == Stage::kBodyMove) {
    const Vec6 y = rk4(body_state_vector(state), dt, [&](const Vec6& v) {
      return body_derivative(v, cmd, model, anchors);
    });
    for (int i = 0; i < 6; ++i) {
      check_finite_bound(y(i), "body state");
    }
    next.body = PlanarPose(Vec2(y(0), y(1)), y(2));
    next.vel = Twist(Vec2(y(3), y(4)), y(5));

    // Constraint projection: slave the joints to the integrated pose.
    const auto joints = inverse_kinematics(next.body, model.booms, anchors);
    const GraspMaps maps = [&] {
      std::array<BoomJointState, kNumBooms> fixed;
      for (int i = 0; i < kNumBooms; ++i) fixed[i] = joints[i].value();
      return grasp_maps(next.body, fixed, model.booms, anchors);
    }();
    const Vec8 rates = joint_rates_from_body_twist(maps, next.vel);
    for (int i = 0; i < kNumBooms; ++i) {
      next.joints[i] = joints[i].value();
      next.joints[i].b_dot = rates(2 * i);
      next.joints[i].theta_dot = rates(2 * i + 1);
    }
    return next;
  }

  const int boom = state.active_boom;
  if (boom < 0 || boom >= kNumBooms) {
    throw Error("end-effector stage without a valid active boom");
  }
  const double mass = model.booms[boom].ee_mass;
  const Vec4 y =
      rk4(boom_state_vector(state.joints[boom]), dt, [&](const Vec4& v) {
        return boom_derivative(v, cmd.booms[boom], mass);
      });
  for (int i = 0; i < 4; ++i) {
    check_finite_bound(y(i), "boom state");
  }
  next.joints[boom].b = y(0);
  next.joints[boom].theta = wrap_angle(y(1));
  next.joints[boom].b_dot = y(2);
  next.joints[boom].theta_dot = y(3);
  return next;
}

double kinetic_energy(const RobotState& state, const BodyParams& params) {
  return 0.5 * (params.mass * state.vel.v.squaredNorm() +
                params.inertia * state.vel.w * state.vel.w);
}

}  // namespace reachbot
