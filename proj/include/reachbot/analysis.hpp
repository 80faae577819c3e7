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

// Structural and robustness analysis: embedded-cone grip checks, factor-of-
// safety grids over disturbance forces, actuator noise injection, plant-side
// model error, and the mass/response-time trade study.

#ifndef REACHBOT_ANALYSIS_HPP_
#define REACHBOT_ANALYSIS_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "reachbot/control.hpp"
#include "reachbot/dynamics.hpp"
#include "reachbot/frames.hpp"
#include "reachbot/kinematics.hpp"

namespace reachbot {

struct Scenario;
struct Trace;

// Factors of safety for unloaded members are reported as this sentinel so
// that minima stay well defined.
inline constexpr double kFosSentinel = 1e9;

// Embedded-cone grip model: a contact force with local components
// (f_t, f_n) holds when f_n - f_o >= |f_t| / mu.
struct GripModel {
  double mu{0.8};   // static friction coefficient
  double f_o{0.0};  // tensile offset (N)
};

// Member limits for the factor-of-safety decomposition. The Euler buckling
// load of a boom of length b is buckling_stiffness * pi^2 / b^2, and
// compressive capacity is additionally capped by push_max.
struct BoomStructuralParams {
  double tensile_max{500.0};       // N
  double buckling_stiffness{5.0661};  // N m^2; P_cr(1 m) = 50 N
  double push_max{10.0};           // N

  double critical_load(double b) const;
};

// Zero-mean Gaussian actuator noise. `sigma` is in raw actuator units
// unless fraction_of_median is set, in which case the effective sigma is
// sigma times the median applied command magnitude of a noise-free run.
struct NoiseSpec {
  double sigma{0.0};
  std::uint64_t seed{0};
  bool fraction_of_median{false};
};

// Deterministic Gaussian stream (explicit 53-bit uniforms + polar
// Box-Muller, so the sequence depends only on the seed).
class NoiseStream {
 public:
  NoiseStream(double sigma, std::uint64_t seed);

  double gaussian();
  // Adds one independent sample to every command component.
  JointCommand perturb(const JointCommand& cmd);

  double sigma() const { return sigma_; }

 private:
  double uniform();  // [0, 1)

  double sigma_;
  std::mt19937_64 rng_;
  bool has_spare_{false};
  double spare_{0.0};
};

// Plant-side parameters for a model-error study; the controller keeps the
// nominal ones.
BodyParams model_error(const BodyParams& nominal, double mass_scale,
                       double inertia_scale);

// Margin of a contact force inside the embedded cone, with `f_tn` the
// (tangential, normal) components in the local wall frame. Non-negative
// inside, continuous, positive toward the hold direction.
double grip_margin(const Vec2& f_tn, const GripModel& grip);

// Margin of the contact in whichever regime it is loaded: the embedded
// cone while the contact pulls toward the hold direction, the plain
// Coulomb cone while the boom presses into the wall.
double contact_hold_margin(const Vec2& f_tn, const GripModel& grip);

// Rotates a wall-frame force into an anchor's (tangent, normal) components
// given the hold-direction normal (unit vector pointing into the surface).
Vec2 to_grip_frame(const Vec2& force_wall, const Vec2& hold_normal);

// A static all-attached configuration for structural analysis.
struct Stance {
  PlanarPose body;
  BodyParams params;
  std::array<BoomConfig, kNumBooms> booms;
  AnchorSet anchors;

  // Hold-direction normal of the anchor boom i grips; falls back to the
  // radial direction from the body center when the set carries no normals.
  Vec2 hold_normal(int boom) const;
};

// Minimum factor of safety across the booms while the stance balances
// `disturbance` (wall frame, applied at the body center) plus gravity. Each
// boom contributes the smaller of its tensile/buckling ratio and its
// grip-cone ratio; unloaded booms contribute the sentinel.
// Throws RankDeficientError for an unstable stance.
double factor_of_safety(const Stance& stance, const Wrench& disturbance,
                        double pretension,
                        const BoomStructuralParams& structural,
                        const GripModel& grip);

// Factor-of-safety samples over a disturbance-force grid. fos(i, j) holds
// the value at fy(i), fx(j); both axes are sampled ascending and include
// the range endpoints.
struct FosGrid {
  std::vector<double> fx;
  std::vector<double> fy;
  Eigen::MatrixXd fos;

  int count_at_least(double threshold) const;
};

FosGrid fos_grid(const Stance& stance, double fx_max, double fy_max, int nx,
                 int ny, double pretension,
                 const BoomStructuralParams& structural,
                 const GripModel& grip);

// One design point of the mass/response-time trade study.
struct TradeEntry {
  double mass{0.0};                  // kg
  double response_time{0.0};         // s, mean over the program's waypoints
  bool clipped{false};               // actuator limits were active
  std::vector<double> per_waypoint;  // s
};

// Runs the template's step movements at each candidate mass under the given
// actuator limits. The plant carries each candidate's mass and matching
// inertia while the controller keeps the template's modeled values, so the
// study measures how a fixed tuning tolerates the design sweep.
// Throws NonConvergentError (naming the mass) when a run exhausts its
// budget.
std::vector<TradeEntry> trade_study(const Scenario& scenario_template,
                                    const std::vector<double>& masses,
                                    const ActuatorLimits& limits);

}  // namespace reachbot

#endif  // REACHBOT_ANALYSIS_HPP_
