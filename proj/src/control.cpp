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

#include "reachbot/control.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace reachbot {

namespace {

constexpr double kRankTol = 1e-9;

void require_spd(const Eigen::MatrixXd& k, const char* name) {
  if (k.rows() != k.cols() || (k.rows() != 2 && k.rows() != 3)) {
    throw GainNotPositiveDefiniteError(std::string(name) +
                                       " must be 2x2 or 3x3");
  }
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + k.norm())) {
    throw GainNotPositiveDefiniteError(std::string(name) +
                                       " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw GainNotPositiveDefiniteError(std::string(name) +
                                       " must be positive definite");
  }
}

double clamp_abs(double value, double bound) {
  return std::clamp(value, -bound, bound);
}

}  // namespace

Gains::Gains(Eigen::MatrixXd proportional, Eigen::MatrixXd derivative)
    : kp(std::move(proportional)), kd(std::move(derivative)) {
  require_spd(kp, "K_P");
  require_spd(kd, "K_D");
  if (kp.rows() != kd.rows()) {
    throw GainNotPositiveDefiniteError("K_P and K_D shapes differ");
  }
}

Gains Gains::diagonal(const Eigen::VectorXd& kp_diag,
                      const Eigen::VectorXd& kd_diag) {
  return Gains(kp_diag.asDiagonal().toDenseMatrix(),
               kd_diag.asDiagonal().toDenseMatrix());
}

Mat3 parameterization_u(const PlanarPose& pose) {
  Mat3 u = Mat3::Zero();
  u.topLeftCorner<2, 2>() = pose.rotation().transpose();
  u(2, 2) = 1.0;
  return u;
}

Mat3 parameterization_u_dot(const PlanarPose& pose, const Twist& vel) {
  const double c = std::cos(pose.phi);
  const double s = std::sin(pose.phi);
  Mat3 u_dot = Mat3::Zero();
  // d/dt R(phi)^T with phi_dot = w.
  u_dot(0, 0) = -s * vel.w;
  u_dot(0, 1) = c * vel.w;
  u_dot(1, 0) = -c * vel.w;
  u_dot(1, 1) = -s * vel.w;
  return u_dot;
}

Vec8 distribute_wrench(const GraspMaps& maps, const Wrench& w,
                       double pretension) {
  Eigen::JacobiSVD<Mat38> svd(
      maps.wrench_map, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  if (sigma(2) <= kRankTol * sigma(0)) {
    throw RankDeficientError("wrench map is rank deficient (sigma = " +
                             std::to_string(sigma(2)) + ")");
  }

  // Minimum-norm solution of H x = w.
  const Vec3 scaled = svd.matrixU().transpose() * w.vector();
  Vec8 x = svd.matrixV().leftCols<3>() * (scaled.array() / sigma.array()).matrix();

  if (pretension != 0.0) {
    // Axial tension extractor: row i reads the tension of boom i.
    Eigen::Matrix<double, kNumBooms, 8> axial =
        Eigen::Matrix<double, kNumBooms, 8>::Zero();
    for (int i = 0; i < kNumBooms; ++i) {
      axial.block<1, 2>(i, 2 * i) = maps.boom_axis(i).transpose();
    }
    const Eigen::Matrix<double, 8, 5> nullspace = svd.matrixV().rightCols<5>();
    const Eigen::Vector4d target =
        Eigen::Vector4d::Constant(pretension) - axial * x;
    const Eigen::MatrixXd axial_null = axial * nullspace;
    const Eigen::VectorXd y =
        axial_null.completeOrthogonalDecomposition().solve(target);
    x += nullspace * y;
  }
  return x;
}

JointCommand body_computed_torque(const RobotState& state,
                                  const GraspMaps& maps,
                                  const BodyTarget& target,
                                  const Gains& gains,
                                  const BodyParams& params,
                                  double pretension) {
  if (gains.kp.rows() != 3) {
    throw GainNotPositiveDefiniteError("body gains must be 3x3");
  }

  const Mat2 rot = state.body.rotation();
  const Vec2 p_dot = rot * state.vel.v;  // wall-frame translation rate

  Vec3 err;
  err << state.body.p - target.p_d,
      angle_diff(state.body.phi, target.phi_d);
  Vec3 err_dot;
  err_dot << p_dot - target.p_dot_d, state.vel.w - target.phi_dot_d;

  Vec3 q_ddot_ref;
  q_ddot_ref << target.p_ddot_d, target.phi_ddot_d;
  q_ddot_ref -= gains.kd * err_dot + gains.kp * err;

  Vec3 q_dot_actual;
  q_dot_actual << p_dot, state.vel.w;

  const Vec3 accel_des = parameterization_u(state.body) * q_ddot_ref +
                         parameterization_u_dot(state.body, state.vel) *
                             q_dot_actual;

  // Invert the modeled Newton-Euler dynamics for the required wrench.
  Vec3 wrench;
  wrench.head<2>() = params.mass * (accel_des.head<2>() +
                                    state.vel.w * perp(state.vel.v) -
                                    rot.transpose() * params.gravity);
  wrench(2) = params.inertia * accel_des(2);

  const Vec8 x =
      distribute_wrench(maps, Wrench::from_vector(wrench), pretension);
  return JointCommand::from_vector(maps.joint_map.transpose() * x);
}

BoomCommand end_effector_pd(const BoomJointState& q,
                            const EndEffectorTarget& target,
                            const Gains& gains) {
  if (gains.kp.rows() != 2) {
    throw GainNotPositiveDefiniteError("end-effector gains must be 2x2");
  }
  Eigen::Vector2d err(target.b_d - q.b, angle_diff(target.theta_d, q.theta));
  Eigen::Vector2d err_dot(target.b_dot_d - q.b_dot,
                          target.theta_dot_d - q.theta_dot);
  const Eigen::Vector2d out = gains.kp * err + gains.kd * err_dot;
  return BoomCommand{out(0), out(1)};
}

JointCommand clip(const JointCommand& cmd, const ActuatorLimits& limits) {
  JointCommand out = cmd;
  for (auto& boom : out.booms) {
    boom.extension_force =
        clamp_abs(boom.extension_force, limits.extension_force_max);
    boom.pivot_torque = clamp_abs(boom.pivot_torque, limits.pivot_torque_max);
  }
  return out;
}

}  // namespace reachbot
