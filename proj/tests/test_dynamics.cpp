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
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

namespace reachbot {
namespace {

std::mt19937 rng(11);

// Cross stance: all shoulders at the body center, anchors on the axes.
struct CrossStance {
  RobotModel model;
  AnchorSet anchors;
  RobotState state;

  explicit CrossStance(double reach = 2.0, double b_max = 50.0) {
    model.body.mass = 30.0;
    model.body.inertia = 0.325;
    for (auto& c : model.booms) {
      c.shoulder_offset = Vec2(0.0, 0.0);
      c.b_min = 0.0;
      c.b_max = b_max;
    }
    anchors.anchors = {Vec2(reach, 0.0), Vec2(0.0, reach), Vec2(-reach, 0.0),
                       Vec2(0.0, -reach)};
    for (int i = 0; i < kNumBooms; ++i) anchors.attached[i] = i;
    refresh_joints();
  }

  void refresh_joints() {
    const auto ik = inverse_kinematics(state.body, model.booms, anchors);
    for (int i = 0; i < kNumBooms; ++i) state.joints[i] = ik[i].value();
  }

  GraspMaps maps() const {
    return grasp_maps(state.body, state.joints, model.booms, anchors);
  }
};

TEST_CASE("identity jacobian passes commands straight through") {
  CrossStance s(1.0);  // boom 0 along +x with b = 1 -> identity block
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{1.5, -0.25};
  const Vec8 x = contact_forces_from_torques(s.maps(), cmd);
  CHECK(x(0) == doctest::Approx(1.5));
  CHECK(x(1) == doctest::Approx(-0.25));
}

TEST_CASE("zero torques give zero contact forces") {
  CrossStance s;
  CHECK(contact_forces_from_torques(s.maps(), JointCommand{}).norm() == 0.0);
}

TEST_CASE("torque to contact-force round trip") {
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    CrossStance s(1.0 + std::abs(val(rng)));
    s.state.body = PlanarPose(Vec2(val(rng) * 0.1, val(rng) * 0.1),
                              val(rng));
    s.refresh_joints();
    const GraspMaps maps = s.maps();
    Vec8 tau;
    for (int i = 0; i < 8; ++i) tau(i) = val(rng);
    const Vec8 x =
        contact_forces_from_torques(maps, JointCommand::from_vector(tau));
    const Vec8 back = maps.joint_map.transpose() * x;
    CHECK((back - tau).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("zero length boom cannot transmit torque") {
  GraspMaps maps;  // joint_map left all zero
  CHECK_THROWS_AS(contact_forces_from_torques(maps, JointCommand{}),
                  SingularBoomError);
}

TEST_CASE("equilibrium at rest with zero commands") {
  CrossStance s;
  const Vec3 accel =
      body_forward_dynamics(s.state, s.maps(), JointCommand{}, s.model.body);
  CHECK(accel.norm() == 0.0);
}

TEST_CASE("net contact force accelerates the body by F over M") {
  CrossStance s;
  // Tension on the +x boom: wall force (3, 0) through the body center.
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{3.0, 0.0};
  const Vec3 accel =
      body_forward_dynamics(s.state, s.maps(), cmd, s.model.body);
  CHECK(accel(0) == doctest::Approx(0.1));
  CHECK(accel(1) == doctest::Approx(0.0));
  CHECK(accel(2) == doctest::Approx(0.0));
}

TEST_CASE("coasting body matches a wall-frame free particle") {
  CrossStance s(3.0);
  s.state.vel = Twist(Vec2(1.0, 0.0), 1.0);  // spinning and translating

  const Vec2 v_world = s.state.body.rotation() * s.state.vel.v;
  const Vec2 p0 = s.state.body.p;
  const double dt = 1e-3;
  RobotState state = s.state;
  for (int k = 0; k < 1000; ++k) {
    state = step(state, JointCommand{}, s.model, s.anchors, dt);
    const double t = (k + 1) * dt;
    const Vec2 expected = p0 + v_world * t;
    CHECK((state.body.p - expected).norm() < 1e-8);
    CHECK(state.body.phi ==
          doctest::Approx(wrap_angle(1.0 * t)).epsilon(1e-8));
  }
  // Body-frame velocity rotates but the wall-frame velocity is conserved.
  CHECK((state.body.rotation() * state.vel.v - v_world).norm() < 1e-8);
}

TEST_CASE("end-effector centrifugal and radial terms") {
  BoomJointState q;
  q.b = 2.0;
  q.theta_dot = 1.5;
  auto [b_ddot, theta_ddot] = end_effector_forward_dynamics(q, 0.0, 0.0, 1.0);
  CHECK(b_ddot == doctest::Approx(2.0 * 1.5 * 1.5));
  CHECK(theta_ddot == doctest::Approx(0.0));

  BoomJointState at_rest;
  at_rest.b = 1.0;
  const double m = 1.7;
  std::tie(b_ddot, theta_ddot) =
      end_effector_forward_dynamics(at_rest, m, 0.0, m);
  CHECK(b_ddot == doctest::Approx(1.0));

  BoomJointState singular;
  singular.b = 0.0;
  CHECK_THROWS_AS(end_effector_forward_dynamics(singular, 0.0, 0.0, 1.0),
                  SingularBoomError);
}

TEST_CASE("free end-effector flies straight at constant speed") {
  RobotModel model;
  for (auto& c : model.booms) {
    c.shoulder_offset = Vec2(0.0, 0.0);
    c.b_min = 0.0;
    c.b_max = 50.0;
  }
  RobotState state;
  state.stage = Stage::kEndEffectorMove;
  state.active_boom = 1;
  state.joints[1].b = 2.0;
  state.joints[1].theta = 0.3;
  state.joints[1].b_dot = 0.4;
  state.joints[1].theta_dot = 0.5;

  const auto polar_tip = [](const BoomJointState& q) {
    return Vec2(q.b * std::cos(q.theta), q.b * std::sin(q.theta));
  };
  const Vec2 p0 = polar_tip(state.joints[1]);
  const Vec2 dir(std::cos(0.3), std::sin(0.3));
  const Vec2 v0 = 0.4 * dir + 2.0 * 0.5 * perp(dir);

  AnchorSet anchors;  // unused by the end-effector stage
  anchors.anchors = {Vec2(1.0, 1.0)};
  const double dt = 1e-3;
  for (int k = 0; k < 2000; ++k) {
    state = step(state, JointCommand{}, model, anchors, dt);
    const double t = (k + 1) * dt;
    const Vec2 expected = p0 + v0 * t;
    CHECK((polar_tip(state.joints[1]) - expected).norm() < 1e-8);
  }
  // Speed is conserved along the straight line.
  const BoomJointState& q = state.joints[1];
  const Vec2 vel = q.b_dot * Vec2(std::cos(q.theta), std::sin(q.theta)) +
                   q.b * q.theta_dot *
                       perp(Vec2(std::cos(q.theta), std::sin(q.theta)));
  CHECK((vel - v0).norm() < 1e-8);
}

TEST_CASE("zero dynamics is a fixed point of step") {
  CrossStance s;
  const RobotState next =
      step(s.state, JointCommand{}, s.model, s.anchors, 1e-3);
  CHECK((next.body.p - s.state.body.p).norm() == 0.0);
  CHECK(next.body.phi == s.state.body.phi);
  CHECK(next.vel.v.norm() == 0.0);
  CHECK(next.vel.w == 0.0);
}

TEST_CASE("constant axial force integrates to F over M times t") {
  CrossStance s;
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{3.0, 0.0};  // force (3, 0) through the center
  RobotState state = s.state;
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) {
    state = step(state, cmd, s.model, s.anchors, dt);
  }
  const double expected = 3.0 / 30.0 * 1.0;
  CHECK(state.vel.v.x() ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(state.vel.v.y()) < 1e-12);
  CHECK(std::abs(state.vel.w) < 1e-12);
}

TEST_CASE("step self-convergence is at least fourth order") {
  CrossStance s(3.0);
  // Fast enough that truncation error dominates the roundoff floor.
  s.state.vel = Twist(Vec2(1.2, -0.9), 2.5);
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{4.0, 1.3};
  cmd.booms[1] = BoomCommand{-2.5, 1.2};
  cmd.booms[2] = BoomCommand{3.7, -1.4};
  cmd.booms[3] = BoomCommand{0.2, 0.1};

  const double horizon = 0.4;
  const auto integrate = [&](double dt) {
    RobotState state = s.state;
    const long n = std::lround(horizon / dt);
    for (long k = 0; k < n; ++k) {
      state = step(state, cmd, s.model, s.anchors, dt);
    }
    Eigen::Matrix<double, 6, 1> y;
    y << state.body.p, state.body.phi, state.vel.v, state.vel.w;
    return y;
  };

  const auto reference = integrate(2e-5);
  const double err_coarse = (integrate(8e-3) - reference).norm();
  const double err_fine = (integrate(4e-3) - reference).norm();
  CHECK(err_coarse / err_fine > 12.0);  // >= 2^4 with margin for roundoff
}

TEST_CASE("kinetic energy is conserved while coasting") {
  CrossStance s(3.0);
  s.state.vel = Twist(Vec2(0.02, 0.01), 0.03);
  const double e0 = kinetic_energy(s.state, s.model.body);
  RobotState state = s.state;
  for (int k = 0; k < 10000; ++k) {
    state = step(state, JointCommand{}, s.model, s.anchors, 1e-3);
  }
  const double e1 = kinetic_energy(state, s.model.body);
  CHECK(std::abs(e1 - e0) / e0 < 1e-6);
}

TEST_CASE("anchored tips never drift from their anchors") {
  CrossStance s(2.5);
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{0.8, 0.1};
  cmd.booms[2] = BoomCommand{-0.3, 0.2};
  RobotState state = s.state;
  for (int k = 0; k < 2000; ++k) {
    state = step(state, cmd, s.model, s.anchors, 1e-3);
    for (int i = 0; i < kNumBooms; ++i) {
      const Vec2 tip = tip_world(state.body, s.model.booms[i],
                                 state.joints[i]);
      CHECK((tip - s.anchors.anchors[i]).norm() < 1e-9);
    }
  }
}

TEST_CASE("joint power balances body power through the dual rate map") {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    CrossStance s(2.0 + std::abs(val(rng)));
    s.state.body = PlanarPose(Vec2(0.2 * val(rng), 0.2 * val(rng)),
                              val(rng));
    s.state.vel = Twist(Vec2(val(rng), val(rng)), val(rng));
    s.refresh_joints();
    const GraspMaps maps = s.maps();
    JointCommand cmd;
    for (auto& b : cmd.booms) {
      b.extension_force = val(rng);
      b.pivot_torque = val(rng);
    }
    const Vec8 x = contact_forces_from_torques(maps, cmd);
    const Vec3 wrench = maps.wrench_map * x;

    const Vec8 contact_vel =
        maps.wrench_map.transpose() * s.state.vel.vector();
    Vec8 qdot_dual;
    for (int i = 0; i < kNumBooms; ++i) {
      qdot_dual.segment<2>(2 * i) =
          maps.joint_map.block<2, 2>(2 * i, 2 * i).inverse() *
          contact_vel.segment<2>(2 * i);
    }
    const double joint_power = cmd.vector().dot(qdot_dual);
    const double body_power = wrench.dot(s.state.vel.vector());
    CHECK(joint_power ==
          doctest::Approx(body_power).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("kinetic energy rate equals delivered wrench power") {
  CrossStance s(2.5);
  s.state.vel = Twist(Vec2(0.1, -0.05), 0.2);
  JointCommand cmd;
  cmd.booms[0] = BoomCommand{1.2, -0.3};
  cmd.booms[3] = BoomCommand{-0.6, 0.4};

  const double dt = 1e-5;
  const RobotState next = step(s.state, cmd, s.model, s.anchors, dt);
  const double de = kinetic_energy(next, s.model.body) -
                    kinetic_energy(s.state, s.model.body);

  // Midpoint power of the contact wrench acting on the body.
  RobotState mid = s.state;
  mid.body.p = 0.5 * (s.state.body.p + next.body.p);
  mid.body.phi = 0.5 * (s.state.body.phi + next.body.phi);
  mid.vel = Twist(0.5 * (s.state.vel.v + next.vel.v),
                  0.5 * (s.state.vel.w + next.vel.w));
  const auto ik = inverse_kinematics(mid.body, s.model.booms, s.anchors);
  for (int i = 0; i < kNumBooms; ++i) mid.joints[i] = ik[i].value();
  const GraspMaps maps =
      grasp_maps(mid.body, mid.joints, s.model.booms, s.anchors);
  const Vec3 wrench =
      maps.wrench_map * contact_forces_from_torques(maps, cmd);
  const double power = wrench.dot(mid.vel.vector());
  CHECK(de / dt == doctest::Approx(power).epsilon(1e-8).scale(1.0));
}

TEST_CASE("diverging state is reported") {
  RobotModel model;
  for (auto& c : model.booms) {
    c.b_min = 0.0;
    c.b_max = 1e12;
  }
  RobotState state;
  state.stage = Stage::kEndEffectorMove;
  state.active_boom = 0;
  state.joints[0].b = 1.0;
  JointCommand cmd;
  cmd.booms[0].extension_force = 1e16;
  AnchorSet anchors;
  anchors.anchors = {Vec2(1.0, 0.0)};
  CHECK_THROWS_AS(step(state, cmd, model, anchors, 1e-3),
                  IntegrationDivergedError);
}

}  // namespace
}  // namespace reachbot
