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

#include "reachbot/trace.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "reachbot/sim.hpp"

namespace reachbot {

namespace {

// Shortest round-trippable decimal form, stable across runs.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_record(std::ofstream& out, const TraceRecord& rec) {
  out << fmt(rec.t) << ',' << fmt(rec.body.p.x()) << ','
      << fmt(rec.body.p.y()) << ',' << fmt(rec.body.phi) << ','
      << fmt(rec.vel.v.x()) << ',' << fmt(rec.vel.v.y()) << ','
      << fmt(rec.vel.w) << ',' << rec.waypoint_index + 1 << ','
      << (rec.stage == Stage::kBodyMove ? "body" : "end_effector") << ','
      << rec.active_boom << ',' << fmt(rec.pos_err) << ','
      << fmt(rec.ang_err);
  for (int i = 0; i < kNumBooms; ++i) {
    const BoomJointState& q = rec.joints[i];
    out << ',' << fmt(q.b) << ',' << fmt(q.theta) << ',' << fmt(q.b_dot)
        << ',' << fmt(q.theta_dot) << ','
        << fmt(rec.cmd_raw.booms[i].extension_force) << ','
        << fmt(rec.cmd_raw.booms[i].pivot_torque) << ','
        << fmt(rec.cmd_applied.booms[i].extension_force) << ','
        << fmt(rec.cmd_applied.booms[i].pivot_torque) << ','
        << fmt(rec.contact_forces(2 * i)) << ','
        << fmt(rec.contact_forces(2 * i + 1)) << ','
        << (rec.attached[i] ? 1 : 0) << ',' << fmt(rec.grip_margins[i]);
  }
  out << '\n';
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::string& path,
                     int sample_every) {
  if (sample_every < 1) {
    throw Error("sample_every must be >= 1");
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << "t_s,body_x_m,body_y_m,body_phi_rad,vel_bx_mps,vel_by_mps,"
         "omega_radps,waypoint,stage,active_boom,pos_err_m,ang_err_rad";
  for (int i = 0; i < kNumBooms; ++i) {
    const std::string n = std::to_string(i);
    out << ",b" << n << "_m,theta" << n << "_rad,bdot" << n << "_mps,thetadot"
        << n << "_radps,fb" << n << "_cmd_n,tau" << n << "_cmd_nm,fb" << n
        << "_app_n,tau" << n << "_app_nm,fx" << n << "_n,fy" << n
        << "_n,attached" << n << ",grip_margin" << n << "_n";
  }
  out << '\n';
  const size_t count = trace.records.size();
  for (size_t k = 0; k < count; ++k) {
    if (k % static_cast<size_t>(sample_every) == 0 || k + 1 == count) {
      write_record(out, trace.records[k]);
    }
  }
}

void write_summary_json(const Trace& trace, const GaitProgram& program,
                        const std::string& path) {
  nlohmann::json j;
  j["completed"] = trace.completed;
  j["steps"] = trace.records.size();
  j["sim_time_s"] = trace.records.empty() ? 0.0 : trace.records.back().t;
  j["waypoints_completed"] =
      trace.completed ? static_cast<int>(program.waypoints.size())
                      : trace.final_status.index;
  j["final_waypoint"] = trace.records.empty()
                            ? 0
                            : trace.records.back().waypoint_index + 1;
  j["final_pos_err_m"] =
      trace.records.empty() ? 0.0 : trace.records.back().pos_err;
  j["final_ang_err_rad"] =
      trace.records.empty() ? 0.0 : trace.records.back().ang_err;
  j["clipped_steps"] = trace.clipped_steps;
  j["grip_violations"] = trace.grip_violations;
  if (trace.completed) {
    j["response_time_s"] = response_time(trace, program);
  }

  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

}  // namespace reachbot
