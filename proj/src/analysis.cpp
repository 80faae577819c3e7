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

#include "reachbot/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reachbot/scenario.hpp"
#include "reachbot/sim.hpp"

namespace reachbot {

namespace {

constexpr double kTinyForce = 1e-12;

double member_factor(double axial, double b,
                     const BoomStructuralParams& structural) {
  if (axial > kTinyForce) {
    return structural.tensile_max / axial;
  }
  if (axial < -kTinyForce) {
    const double capacity =
        std::min(structural.critical_load(b), structural.push_max);
    return capacity / (-axial);
  }
  return kFosSentinel;
}

// Tangential capacity ratio of one contact: the embedded cone on the
// pulling side (normal component toward the hold direction), the plain
// Coulomb cone when the boom presses into the wall.
double grip_factor(const Vec2& f_tn, const GripModel& grip) {
  const double demand = std::abs(f_tn.x()) / grip.mu;
  const double avail =
      f_tn.y() >= 0.0 ? f_tn.y() - grip.f_o : -f_tn.y();
  if (demand < kTinyForce) {
    return avail >= 0.0 ? kFosSentinel : 0.0;
  }
  return std::max(0.0, avail / demand);
}

}  // namespace

double BoomStructuralParams::critical_load(double b) const {
  return buckling_stiffness * M_PI * M_PI / (b * b);
}

NoiseStream::NoiseStream(double sigma, std::uint64_t seed)
    : sigma_(sigma), rng_(seed) {
  if (sigma < 0.0) {
    throw Error("noise sigma must be non-negative");
  }
}

double NoiseStream::uniform() {
  // 53-bit mantissa uniform in [0, 1); avoids the implementation-defined
  // rounding of std::generate_canonical.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
  if (sigma_ == 0.0) {
    return 0.0;
  }
  if (has_spare_) {
    has_spare_ = false;
    return sigma_ * spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return sigma_ * u * scale;
}

JointCommand NoiseStream::perturb(const JointCommand& cmd) {
  if (sigma_ == 0.0) {
    return cmd;
  }
  JointCommand out = cmd;
  for (auto& boom : out.booms) {
    boom.extension_force += gaussian();
    boom.pivot_torque += gaussian();
  }
  return out;
}

BodyParams model_error(const BodyParams& nominal, double mass_scale,
                       double inertia_scale) {
  if (mass_scale <= 0.0 || inertia_scale <= 0.0) {
    throw Error("model-error scales must be positive");
  }
  BodyParams plant = nominal;
  plant.mass *= mass_scale;
  plant.inertia *= inertia_scale;
  return plant;
}

double grip_margin(const Vec2& f_tn, const GripModel& grip) {
  return f_tn.y() - grip.f_o - std::abs(f_tn.x()) / grip.mu;
}

double contact_hold_margin(const Vec2& f_tn, const GripModel& grip) {
  if (f_tn.y() >= 0.0) {
    return grip_margin(f_tn, grip);
  }
  return -f_tn.y() - std::abs(f_tn.x()) / grip.mu;
}

Vec2 to_grip_frame(const Vec2& force_wall, const Vec2& hold_normal) {
  const Vec2 n = hold_normal.normalized();
  return Vec2(force_wall.dot(perp(n)), force_wall.dot(n));
}

Vec2 Stance::hold_normal(int boom) const {
  const int idx = anchors.attached[boom].value();
  if (!anchors.normals.empty()) {
    return anchors.normals[idx].normalized();
  }
  return (anchors.anchors[idx] - body.p).normalized();
}

double factor_of_safety(const Stance& stance, const Wrench& disturbance,
                        double pretension,
                        const BoomStructuralParams& structural,
                        const GripModel& grip) {
  const auto ik = inverse_kinematics(stance.body, stance.booms, stance.anchors);
  std::array<BoomJointState, kNumBooms> joints;
  for (int i = 0; i < kNumBooms; ++i) {
    joints[i] = ik[i].value();
  }
  const GraspMaps maps =
      grasp_maps(stance.body, joints, stance.booms, stance.anchors);

  // Contacts must balance the applied disturbance plus gravity, both given
  // in the wall frame and re-expressed in the body frame.
  const Mat2 rt = stance.body.rotation().transpose();
  Vec3 load;
  load.head<2>() =
      rt * (disturbance.f + stance.params.mass * stance.params.gravity);
  load(2) = disturbance.tau;
  const Vec8 x =
      distribute_wrench(maps, Wrench::from_vector(-load), pretension);

  double fos = kFosSentinel;
  for (int i = 0; i < kNumBooms; ++i) {
    const Vec2 xi = x.segment<2>(2 * i);
    if (xi.norm() < kTinyForce) {
      continue;  // unloaded member, sentinel factor
    }
    const Vec2 axis = maps.boom_axis(i);
    const double axial = xi.dot(axis);
    const double structural_factor =
        member_factor(axial, joints[i].b, structural);
    const double grip_cone_factor =
        grip_factor(to_grip_frame(xi, stance.hold_normal(i)), grip);
    fos = std::min({fos, structural_factor, grip_cone_factor});
  }
  return fos;
}

int FosGrid::count_at_least(double threshold) const {
  int count = 0;
  for (int i = 0; i < fos.rows(); ++i) {
    for (int j = 0; j < fos.cols(); ++j) {
      if (fos(i, j) >= threshold) ++count;
    }
  }
  return count;
}

FosGrid fos_grid(const Stance& stance, double fx_max, double fy_max, int nx,
                 int ny, double pretension,
                 const BoomStructuralParams& structural,
                 const GripModel& grip) {
  if (nx < 2 || ny < 2) {
    throw Error("fos grid needs at least 2 samples per axis");
  }
  FosGrid grid;
  grid.fx.resize(nx);
  grid.fy.resize(ny);
  grid.fos.resize(ny, nx);
  for (int j = 0; j < nx; ++j) {
    grid.fx[j] = -fx_max + 2.0 * fx_max * j / (nx - 1);
  }
  for (int i = 0; i < ny; ++i) {
    grid.fy[i] = -fy_max + 2.0 * fy_max * i / (ny - 1);
  }
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      grid.fos(i, j) =
          factor_of_safety(stance, Wrench(Vec2(grid.fx[j], grid.fy[i]), 0.0),
                           pretension, structural, grip);
    }
  }
  return grid;
}

std::vector<TradeEntry> trade_study(const Scenario& scenario_template,
                                    const std::vector<double>& masses,
                                    const ActuatorLimits& limits) {
  std::vector<TradeEntry> table;
  table.reserve(masses.size());
  for (double mass : masses) {
    if (mass <= 0.0) {
      throw Error("trade-study masses must be positive");
    }
    Scenario candidate = scenario_template;
    candidate.limits = limits;
    // The candidate design carries the new mass and the matching plate
    // inertia; the controller keeps the template's modeled values.
    const double scale = mass / scenario_template.model.body.mass;
    candidate.model_error_spec.mass_scale = scale;
    candidate.model_error_spec.inertia_scale = scale;

    Trace trace;
    try {
      trace = run(candidate);
    } catch (const NonConvergentError& e) {
      throw NonConvergentError("mass " + std::to_string(mass) +
                               " kg: " + e.what());
    }
    const std::vector<double> durations =
        response_time(trace, candidate.gait);

    TradeEntry entry;
    entry.mass = mass;
    entry.per_waypoint = durations;
    entry.response_time = 0.0;
    for (double d : durations) entry.response_time += d;
    entry.response_time /= static_cast<double>(durations.size());
    entry.clipped = trace.clipped_steps > 0;
    table.push_back(std::move(entry));
  }
  return table;
}

}  // namespace reachbot
