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

#include "reachbot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace reachbot {

namespace {

[[noreturn]] void rethrow_with_time(double t) {
  const std::string prefix = "t=" + std::to_string(t) + " s: ";
  try {
    throw;
  } catch (const SingularBoomError& e) {
    throw SingularBoomError(prefix + e.what());
  } catch (const ExtensionOutOfRangeError& e) {
    throw ExtensionOutOfRangeError(prefix + e.what());
  } catch (const AnchorCoincidentError& e) {
    throw AnchorCoincidentError(prefix + e.what());
  } catch (const IntegrationDivergedError& e) {
    throw IntegrationDivergedError(prefix + e.what());
  } catch (const RankDeficientError& e) {
    throw RankDeficientError(prefix + e.what());
  } catch (const StanceUnstableError& e) {
    throw StanceUnstableError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

long count_clipped(const JointCommand& raw, const JointCommand& clipped) {
  long n = 0;
  for (int i = 0; i < kNumBooms; ++i) {
    if (raw.booms[i].extension_force != clipped.booms[i].extension_force) ++n;
    if (raw.booms[i].pivot_torque != clipped.booms[i].pivot_torque) ++n;
  }
  return n;
}

// Applies attach/detach side effects of a gait transition to the state.
void sync_state(RobotState& state, const GaitStatus& prev,
                const GaitStatus& next, const Scenario& scenario) {
  const bool was_ee = prev.stage == Stage::kEndEffectorMove;
  const bool attach_happened =
      was_ee && (next.done || next.stage == Stage::kBodyMove ||
                 next.active_boom != prev.active_boom);
  if (attach_happened) {
    // The tip snaps onto its anchor; no impulse (massless boom).
    const Waypoint& wp = scenario.gait.waypoints[prev.index];
    state.joints[wp.boom] = solve_boom_ik(
        state.body, scenario.model.booms[wp.boom],
        next.anchors.anchors[wp.anchor]);
  }
  const bool detach_happened =
      !next.done && next.stage == Stage::kEndEffectorMove &&
      (!was_ee || next.active_boom != prev.active_boom);
  if (detach_happened) {
    // The body is held motionless for the whole end-effector move.
    state.vel = Twist();
  }
  state.stage = next.done ? Stage::kBodyMove : next.stage;
  state.active_boom = next.done ? -1 : next.active_boom;
}

struct StepErrors {
  double pos{0.0};
  double ang{0.0};
};

StepErrors active_errors(const RobotState& state, const GaitStatus& status,
                         const Scenario& scenario) {
  const Waypoint& wp = scenario.gait.waypoints[status.index];
  StepErrors e;
  if (wp.kind == WaypointKind::kBodyPose) {
    e.pos = (state.body.p - wp.p_d).norm();
    e.ang = angle_diff(state.body.phi, wp.phi_d);
  } else {
    const Vec2 tip = tip_world(state.body, scenario.model.booms[wp.boom],
                               state.joints[wp.boom]);
    e.pos = (tip - status.anchors.anchors[wp.anchor]).norm();
    e.ang = 0.0;
  }
  return e;
}

double median_applied_magnitude(const Trace& trace) {
  std::vector<double> mags;
  mags.reserve(trace.records.size() * 8);
  for (const auto& rec : trace.records) {
    const Vec8 v = rec.cmd_applied.vector();
    for (int i = 0; i < 8; ++i) {
      mags.push_back(std::abs(v(i)));
    }
  }
  if (mags.empty()) return 0.0;
  const size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
  return mags[mid];
}

}  // namespace

Trace run(const Scenario& scenario) {
  scenario.validate();

  if (scenario.noise.sigma > 0.0 && scenario.noise.fraction_of_median) {
    // Resolve the fraction against the median command of a noise-free run.
    Scenario base = scenario;
    base.noise = NoiseSpec{};
    const double median = median_applied_magnitude(run(base));
    Scenario resolved = scenario;
    resolved.noise.fraction_of_median = false;
    resolved.noise.sigma = scenario.noise.sigma * median;
    return run(resolved);
  }

  const RobotModel& nominal = scenario.model;
  RobotModel plant = scenario.model;
  plant.body = model_error(plant.body, scenario.model_error_spec.mass_scale,
                           scenario.model_error_spec.inertia_scale);

  RobotState state;
  state.body = scenario.start_pose;
  {
    const auto ik = inverse_kinematics(state.body, nominal.booms,
                                       scenario.anchors);
    for (int i = 0; i < kNumBooms; ++i) state.joints[i] = ik[i].value();
  }

  GaitStatus status = gait_start(scenario.gait, scenario.anchors, state.body);
  state.stage = status.stage;
  state.active_boom = status.active_boom;

  NoiseStream noise(scenario.noise.sigma, scenario.noise.seed);
  const bool use_noise = scenario.noise.sigma > 0.0;

  Trace trace;
  trace.dt = scenario.dt;
  const long max_steps =
      static_cast<long>(scenario.duration_budget / scenario.dt) + 1;
  trace.records.reserve(std::min<long>(max_steps, 1 << 22));

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;

    const GaitStatus next = advance(status, state, scenario.gait, nominal);
    if (next.stage != status.stage || next.active_boom != status.active_boom ||
        next.done != status.done || next.index != status.index) {
      sync_state(state, status, next, scenario);
    }
    status = next;

    if (status.done) {
      TraceRecord rec;
      rec.t = t;
      rec.body = state.body;
      rec.vel = state.vel;
      rec.joints = state.joints;
      rec.waypoint_index = status.index;
      rec.stage = state.stage;
      rec.active_boom = -1;
      const StepErrors errs = active_errors(state, status, scenario);
      rec.pos_err = errs.pos;
      rec.ang_err = errs.ang;
      for (int i = 0; i < kNumBooms; ++i) {
        rec.attached[i] = status.anchors.attached[i].has_value();
        rec.grip_margins[i] = std::numeric_limits<double>::quiet_NaN();
      }
      trace.records.push_back(rec);
      trace.completed = true;
      break;
    }

    if (k >= max_steps) {
      throw NonConvergentError(
          "duration budget of " + std::to_string(scenario.duration_budget) +
          " s exhausted at waypoint " + std::to_string(status.index + 1));
    }

    TraceRecord rec;
    rec.t = t;
    rec.body = state.body;
    rec.vel = state.vel;
    rec.joints = state.joints;
    rec.waypoint_index = status.index;
    rec.stage = status.stage;
    rec.active_boom = status.active_boom;
    for (int i = 0; i < kNumBooms; ++i) {
      rec.attached[i] = status.anchors.attached[i].has_value();
      rec.grip_margins[i] = std::numeric_limits<double>::quiet_NaN();
    }
    const StepErrors errs = active_errors(state, status, scenario);
    rec.pos_err = errs.pos;
    rec.ang_err = errs.ang;

    JointCommand raw;
    try {
      if (status.stage == Stage::kBodyMove) {
        const GraspMaps maps = grasp_maps(state.body, state.joints,
                                          nominal.booms, status.anchors);
        const Waypoint& wp = scenario.gait.waypoints[status.index];
        raw = body_computed_torque(state, maps,
                                   BodyTarget::hold(wp.p_d, wp.phi_d),
                                   scenario.body_gains, nominal.body,
                                   scenario.pretension);
      } else {
        const Waypoint& wp = scenario.gait.waypoints[status.index];
        const Vec2 target = status.anchors.anchors[wp.anchor];
        const BoomJointState goal =
            solve_boom_ik(state.body, nominal.booms[wp.boom], target);
        EndEffectorTarget ee_target;
        ee_target.b_d = goal.b;
        ee_target.theta_d = goal.theta;
        raw.booms[wp.boom] = end_effector_pd(state.joints[wp.boom], ee_target,
                                             scenario.ee_gains);
        for (int i = 0; i < kNumBooms; ++i) {
          if (i == wp.boom) continue;
          // Anchored booms hold their pretension level during the move.
          raw.booms[i] = BoomCommand{scenario.pretension, 0.0};
        }
      }

      const JointCommand clipped = clip(raw, scenario.limits);
      trace.clipped_steps += count_clipped(raw, clipped) > 0 ? 1 : 0;
      const JointCommand applied =
          use_noise ? noise.perturb(clipped) : clipped;

      rec.cmd_raw = raw;
      rec.cmd_applied = applied;

      if (status.stage == Stage::kBodyMove) {
        const GraspMaps maps = grasp_maps(state.body, state.joints,
                                          plant.booms, status.anchors);
        rec.contact_forces = contact_forces_from_torques(maps, applied);
        if (scenario.grip.has_value()) {
          const Stance stance{state.body, plant.body, plant.booms,
                              status.anchors};
          for (int i = 0; i < kNumBooms; ++i) {
            const Vec2 xi = rec.contact_forces.segment<2>(2 * i);
            rec.grip_margins[i] = contact_hold_margin(
                to_grip_frame(xi, stance.hold_normal(i)), *scenario.grip);
            if (rec.grip_margins[i] < 0.0) ++trace.grip_violations;
          }
        }
      }

      trace.records.push_back(rec);
      state = step(state, applied, plant, status.anchors, scenario.dt);
    } catch (const Error&) {
      rethrow_with_time(t);
    }
  }

  trace.final_status = status;
  return trace;
}

std::vector<double> response_time(const Trace& trace,
                                  const GaitProgram& program) {
  if (!trace.completed || trace.records.empty()) {
    throw IncompleteTraceError("trace ended mid-waypoint");
  }
  const int num_waypoints = static_cast<int>(program.waypoints.size());
  std::vector<double> activation(num_waypoints,
                                 std::numeric_limits<double>::quiet_NaN());
  for (const auto& rec : trace.records) {
    if (std::isnan(activation[rec.waypoint_index])) {
      activation[rec.waypoint_index] = rec.t;
    }
  }
  std::vector<double> durations(num_waypoints, 0.0);
  for (int k = 0; k < num_waypoints; ++k) {
    if (std::isnan(activation[k])) {
      throw IncompleteTraceError("waypoint " + std::to_string(k + 1) +
                                 " never activated");
    }
    const double end = (k + 1 < num_waypoints) ? activation[k + 1]
                                               : trace.records.back().t;
    durations[k] = end - activation[k];
  }
  return durations;
}

namespace {

// Contiguous record span of each waypoint within a trace.
std::vector<std::pair<size_t, size_t>> waypoint_spans(const Trace& trace) {
  std::vector<std::pair<size_t, size_t>> spans;
  for (size_t k = 0; k < trace.records.size(); ++k) {
    const int wp = trace.records[k].waypoint_index;
    while (static_cast<int>(spans.size()) <= wp) {
      spans.emplace_back(k, k);
    }
    spans[wp].second = k + 1;
  }
  return spans;
}

}  // namespace

DeviationStats body_deviation(const Trace& nominal, const Trace& other) {
  // Both runs pass the same waypoints but not on the same schedule; each
  // movement is compared against the baseline aligned at its own
  // activation instant.
  const auto nominal_spans = waypoint_spans(nominal);
  const auto other_spans = waypoint_spans(other);
  const size_t shared = std::min(nominal_spans.size(), other_spans.size());

  DeviationStats stats;
  double sum = 0.0;
  long count = 0;
  double early_sum = 0.0, late_sum = 0.0;
  long early_count = 0, late_count = 0;
  for (size_t wp = 0; wp < shared; ++wp) {
    const auto [n_lo, n_hi] = nominal_spans[wp];
    const auto [o_lo, o_hi] = other_spans[wp];
    if (n_hi <= n_lo || o_hi <= o_lo) continue;
    if (nominal.records[n_lo].stage != Stage::kBodyMove) continue;
    const size_t len = std::min(n_hi - n_lo, o_hi - o_lo);
    const size_t quarter = std::max<size_t>(1, len / 4);
    for (size_t k = 0; k < len; ++k) {
      const double dev = (nominal.records[n_lo + k].body.p -
                          other.records[o_lo + k].body.p)
                             .norm();
      stats.max_dev = std::max(stats.max_dev, dev);
      sum += dev;
      ++count;
      if (k < quarter) {
        early_sum += dev;
        ++early_count;
      }
      if (k >= len - quarter) {
        late_sum += dev;
        ++late_count;
      }
    }
  }
  if (count > 0) stats.mean_dev = sum / count;
  if (early_count > 0) stats.early_window_mean = early_sum / early_count;
  if (late_count > 0) stats.late_window_mean = late_sum / late_count;
  return stats;
}

}  // namespace reachbot
