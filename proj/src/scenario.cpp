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

#include "reachbot/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace reachbot {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioInvalidError(field, what);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      fail(path.empty() ? item.key() : path + "." + item.key(),
           "unknown key");
    }
  }
}

double get_number(const json& j, const std::string& path,
                  const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(path + "." + key, "expected a number");
  return j[key].get<double>();
}

double require_number(const json& j, const std::string& path,
                      const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    fail(path + "." + key, "expected a number");
  }
  return j[key].get<double>();
}

Vec2 get_vec2(const json& j, const std::string& path, const std::string& key,
              const Vec2& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    fail(path + "." + key, "expected [x, y]");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

Eigen::MatrixXd parse_gain(const json& v, const std::string& path, int dim) {
  if (v.is_array() && v.size() == static_cast<size_t>(dim) &&
      v[0].is_number()) {
    Eigen::VectorXd diag(dim);
    for (int i = 0; i < dim; ++i) {
      if (!v[i].is_number()) fail(path, "expected numbers");
      diag(i) = v[i].get<double>();
    }
    return diag.asDiagonal().toDenseMatrix();
  }
  if (v.is_array() && v.size() == static_cast<size_t>(dim) &&
      v[0].is_array()) {
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (!v[i].is_array() || v[i].size() != static_cast<size_t>(dim)) {
        fail(path, "expected a square matrix");
      }
      for (int c = 0; c < dim; ++c) {
        m(i, c) = v[i][c].get<double>();
      }
    }
    return m;
  }
  fail(path, "expected a diagonal list or a square matrix");
}

json gain_to_json(const Eigen::MatrixXd& k) {
  const Eigen::MatrixXd diag =
      k.diagonal().asDiagonal().toDenseMatrix();
  if ((k - diag).cwiseAbs().maxCoeff() == 0.0) {
    json v = json::array();
    for (int i = 0; i < k.rows(); ++i) v.push_back(k(i, i));
    return v;
  }
  json rows = json::array();
  for (int i = 0; i < k.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < k.cols(); ++c) row.push_back(k(i, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

double Scenario::default_inertia(double mass, const Vec2& size) {
  return mass * (size.x() * size.x() + size.y() * size.y()) / 12.0;
}

Scenario default_scenario() {
  Scenario s;
  s.model.body.mass = 30.0;
  s.model.body.inertia = Scenario::default_inertia(30.0, s.body_size);
  s.model.body.gravity = Vec2(0.0, 0.0);
  const double sx = s.body_size.x() / 2.0;
  const double sy = s.body_size.y() / 2.0;
  s.model.booms[0].shoulder_offset = Vec2(sx, sy);
  s.model.booms[1].shoulder_offset = Vec2(sx, -sy);
  s.model.booms[2].shoulder_offset = Vec2(-sx, -sy);
  s.model.booms[3].shoulder_offset = Vec2(-sx, sy);
  for (auto& boom : s.model.booms) {
    boom.b_min = 0.1;
    boom.b_max = 5.0;
    boom.ee_mass = 1.0;
  }
  s.body_gains = Gains::diagonal(Eigen::Vector3d::Constant(4.0),
                                 Eigen::Vector3d::Constant(4.0));
  s.ee_gains = Gains::diagonal(Eigen::Vector2d(5.0, 6.0),
                               Eigen::Vector2d(4.5, 12.0));
  return s;
}

void Scenario::validate() const {
  if (!(dt > 0.0)) fail("dt_s", "must be positive");
  if (!(duration_budget > 0.0)) fail("duration_budget_s", "must be positive");
  if (!(model.body.mass > 0.0)) fail("body.mass_kg", "must be positive");
  if (!(model.body.inertia > 0.0)) {
    fail("body.inertia_kgm2", "must be positive");
  }
  for (int i = 0; i < kNumBooms; ++i) {
    const std::string base = "booms[" + std::to_string(i) + "]";
    const BoomConfig& b = model.booms[i];
    if (b.b_min < 0.0 || !(b.b_min < b.b_max)) {
      fail(base + ".b_min_m", "need 0 <= b_min < b_max");
    }
    if (!(b.ee_mass > 0.0)) fail(base + ".ee_mass_kg", "must be positive");
  }
  if (anchors.anchors.empty()) fail("anchors.positions_m", "must be nonempty");
  try {
    anchors.validate();
  } catch (const Error& e) {
    fail("anchors.initial_attachment", e.what());
  }
  if (anchors.num_attached() != kNumBooms) {
    fail("anchors.initial_attachment", "all four booms must start attached");
  }
  try {
    gait.validate(static_cast<int>(anchors.anchors.size()));
  } catch (const Error& e) {
    fail("gait", e.what());
  }
  if (body_gains.kp.rows() != 3) fail("control.body_kp", "must be 3x3");
  if (ee_gains.kp.rows() != 2) fail("control.ee_kp", "must be 2x2");
  if (!(limits.extension_force_max > 0.0)) {
    fail("control.limits.prismatic_max_n", "must be positive");
  }
  if (!(limits.pivot_torque_max > 0.0)) {
    fail("control.limits.revolute_max_nm", "must be positive");
  }
  if (noise.sigma < 0.0) fail("noise.sigma", "must be non-negative");
  if (!(model_error_spec.mass_scale > 0.0) ||
      !(model_error_spec.inertia_scale > 0.0)) {
    fail("model_error", "scales must be positive");
  }
  if (grip.has_value() && !(grip->mu > 0.0)) {
    fail("grip.mu", "must be positive");
  }
  if (grip.has_value() && grip->f_o < 0.0) {
    fail("grip.tensile_offset_n", "must be non-negative");
  }
  if (!(structure.tensile_max > 0.0) || !(structure.buckling_stiffness > 0.0) ||
      !(structure.push_max > 0.0)) {
    fail("structure", "limits must be positive");
  }

  // Initial stance: kinematic feasibility and stability.
  std::array<BoomJointState, kNumBooms> joints;
  try {
    const auto ik = inverse_kinematics(start_pose, model.booms, anchors);
    for (int i = 0; i < kNumBooms; ++i) joints[i] = ik[i].value();
  } catch (const Error& e) {
    fail("body.start_pose", e.what());
  }
  const GraspMaps maps = grasp_maps(start_pose, joints, model.booms, anchors);
  if (!maps.stable()) {
    fail("anchors", "initial stance is rank deficient");
  }
}

Stance Scenario::initial_stance() const {
  return Stance{start_pose, model.body, model.booms, anchors};
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("<root>", std::string("not valid JSON: ") + e.what());
  }

  Scenario s = default_scenario();
  check_keys(j, "", {"name", "seed", "dt_s", "duration_budget_s",
                     "pretension_n", "body", "booms", "anchors", "gait",
                     "control", "noise", "model_error", "grip", "structure"});

  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  s.dt = get_number(j, "", "dt_s", s.dt);
  s.duration_budget = get_number(j, "", "duration_budget_s",
                                 s.duration_budget);
  s.pretension = get_number(j, "", "pretension_n", s.pretension);

  if (j.contains("body")) {
    const json& b = j["body"];
    check_keys(b, "body", {"mass_kg", "size_m", "inertia_kgm2",
                           "gravity_mps2", "start_pose"});
    s.model.body.mass = get_number(b, "body", "mass_kg", s.model.body.mass);
    s.body_size = get_vec2(b, "body", "size_m", s.body_size);
    s.model.body.gravity =
        get_vec2(b, "body", "gravity_mps2", s.model.body.gravity);
    if (b.contains("inertia_kgm2")) {
      s.model.body.inertia = require_number(b, "body", "inertia_kgm2");
    } else {
      s.model.body.inertia =
          Scenario::default_inertia(s.model.body.mass, s.body_size);
    }
    if (b.contains("start_pose")) {
      const json& p = b["start_pose"];
      if (!p.is_array() || p.size() != 3) {
        fail("body.start_pose", "expected [x, y, phi]");
      }
      s.start_pose = PlanarPose(Vec2(p[0].get<double>(), p[1].get<double>()),
                                p[2].get<double>());
    }
  } else {
    s.model.body.inertia =
        Scenario::default_inertia(s.model.body.mass, s.body_size);
  }

  if (j.contains("booms")) {
    const json& booms = j["booms"];
    if (!booms.is_array() || booms.size() != kNumBooms) {
      fail("booms", "expected exactly 4 entries");
    }
    for (int i = 0; i < kNumBooms; ++i) {
      const std::string base = "booms[" + std::to_string(i) + "]";
      const json& b = booms[i];
      check_keys(b, base,
                 {"shoulder_offset_m", "b_min_m", "b_max_m", "ee_mass_kg"});
      BoomConfig& cfg = s.model.booms[i];
      cfg.shoulder_offset =
          get_vec2(b, base, "shoulder_offset_m", cfg.shoulder_offset);
      cfg.b_min = get_number(b, base, "b_min_m", cfg.b_min);
      cfg.b_max = get_number(b, base, "b_max_m", cfg.b_max);
      cfg.ee_mass = get_number(b, base, "ee_mass_kg", cfg.ee_mass);
    }
  }

  if (!j.contains("anchors")) fail("anchors", "missing");
  {
    const json& a = j["anchors"];
    check_keys(a, "anchors",
               {"positions_m", "normals", "initial_attachment"});
    if (!a.contains("positions_m") || !a["positions_m"].is_array()) {
      fail("anchors.positions_m", "expected a list of [x, y]");
    }
    for (const auto& p : a["positions_m"]) {
      if (!p.is_array() || p.size() != 2) {
        fail("anchors.positions_m", "expected [x, y] entries");
      }
      s.anchors.anchors.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    if (a.contains("normals")) {
      for (const auto& n : a["normals"]) {
        if (!n.is_array() || n.size() != 2) {
          fail("anchors.normals", "expected [x, y] entries");
        }
        s.anchors.normals.emplace_back(n[0].get<double>(),
                                       n[1].get<double>());
      }
    }
    if (!a.contains("initial_attachment") ||
        !a["initial_attachment"].is_array() ||
        a["initial_attachment"].size() != kNumBooms) {
      fail("anchors.initial_attachment", "expected 4 anchor indices");
    }
    for (int i = 0; i < kNumBooms; ++i) {
      s.anchors.attached[i] = a["initial_attachment"][i].get<int>();
    }
  }

  if (!j.contains("gait")) fail("gait", "missing");
  {
    const json& g = j["gait"];
    check_keys(g, "gait",
               {"pos_threshold_m", "vel_threshold_mps", "ang_threshold_rad",
                "ang_vel_threshold_radps", "waypoints"});
    s.gait.pos_threshold =
        get_number(g, "gait", "pos_threshold_m", s.gait.pos_threshold);
    s.gait.vel_threshold =
        get_number(g, "gait", "vel_threshold_mps", s.gait.vel_threshold);
    s.gait.ang_threshold =
        get_number(g, "gait", "ang_threshold_rad", s.gait.ang_threshold);
    s.gait.ang_vel_threshold = get_number(g, "gait", "ang_vel_threshold_radps",
                                          s.gait.ang_vel_threshold);
    if (!g.contains("waypoints") || !g["waypoints"].is_array()) {
      fail("gait.waypoints", "expected a list");
    }
    int k = 0;
    for (const auto& w : g["waypoints"]) {
      const std::string base = "gait.waypoints[" + std::to_string(k++) + "]";
      if (w.contains("body")) {
        const json& b = w["body"];
        check_keys(b, base + ".body", {"position_m", "heading_rad"});
        s.gait.waypoints.push_back(Waypoint::body_pose(
            get_vec2(b, base + ".body", "position_m", Vec2(0, 0)),
            get_number(b, base + ".body", "heading_rad", 0.0)));
      } else if (w.contains("end_effector")) {
        const json& e = w["end_effector"];
        check_keys(e, base + ".end_effector", {"boom", "anchor"});
        s.gait.waypoints.push_back(
            Waypoint::end_effector(e["boom"].get<int>(),
                                   e["anchor"].get<int>()));
      } else {
        fail(base, "expected a 'body' or 'end_effector' waypoint");
      }
    }
  }

  if (j.contains("control")) {
    const json& c = j["control"];
    check_keys(c, "control",
               {"body_kp", "body_kd", "ee_kp", "ee_kd", "limits"});
    try {
      Eigen::MatrixXd kp = s.body_gains.kp;
      Eigen::MatrixXd kd = s.body_gains.kd;
      if (c.contains("body_kp")) kp = parse_gain(c["body_kp"], "control.body_kp", 3);
      if (c.contains("body_kd")) kd = parse_gain(c["body_kd"], "control.body_kd", 3);
      s.body_gains = Gains(kp, kd);
    } catch (const GainNotPositiveDefiniteError& e) {
      fail("control.body_kp", e.what());
    }
    try {
      Eigen::MatrixXd kp = s.ee_gains.kp;
      Eigen::MatrixXd kd = s.ee_gains.kd;
      if (c.contains("ee_kp")) kp = parse_gain(c["ee_kp"], "control.ee_kp", 2);
      if (c.contains("ee_kd")) kd = parse_gain(c["ee_kd"], "control.ee_kd", 2);
      s.ee_gains = Gains(kp, kd);
    } catch (const GainNotPositiveDefiniteError& e) {
      fail("control.ee_kp", e.what());
    }
    if (c.contains("limits")) {
      const json& l = c["limits"];
      check_keys(l, "control.limits", {"prismatic_max_n", "revolute_max_nm"});
      s.limits.extension_force_max = get_number(
          l, "control.limits", "prismatic_max_n", s.limits.extension_force_max);
      s.limits.pivot_torque_max = get_number(
          l, "control.limits", "revolute_max_nm", s.limits.pivot_torque_max);
    }
  }

  if (j.contains("noise")) {
    const json& n = j["noise"];
    check_keys(n, "noise", {"sigma", "seed", "fraction_of_median"});
    s.noise.sigma = get_number(n, "noise", "sigma", 0.0);
    if (n.contains("seed")) s.noise.seed = n["seed"].get<std::uint64_t>();
    if (n.contains("fraction_of_median")) {
      s.noise.fraction_of_median = n["fraction_of_median"].get<bool>();
    }
  }

  if (j.contains("model_error")) {
    const json& m = j["model_error"];
    check_keys(m, "model_error", {"mass_scale", "inertia_scale"});
    s.model_error_spec.mass_scale =
        get_number(m, "model_error", "mass_scale", 1.0);
    s.model_error_spec.inertia_scale =
        get_number(m, "model_error", "inertia_scale", 1.0);
  }

  if (j.contains("grip")) {
    const json& g = j["grip"];
    check_keys(g, "grip", {"mu", "tensile_offset_n"});
    GripModel grip;
    grip.mu = get_number(g, "grip", "mu", grip.mu);
    grip.f_o = get_number(g, "grip", "tensile_offset_n", grip.f_o);
    s.grip = grip;
  }

  if (j.contains("structure")) {
    const json& st = j["structure"];
    check_keys(st, "structure",
               {"tensile_max_n", "buckling_stiffness_nm2", "push_max_n"});
    s.structure.tensile_max =
        get_number(st, "structure", "tensile_max_n", s.structure.tensile_max);
    s.structure.buckling_stiffness =
        get_number(st, "structure", "buckling_stiffness_nm2",
                   s.structure.buckling_stiffness);
    s.structure.push_max =
        get_number(st, "structure", "push_max_n", s.structure.push_max);
  }

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Scenario s = parse_scenario(buffer.str());
  s.validate();
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["dt_s"] = s.dt;
  j["duration_budget_s"] = s.duration_budget;
  j["pretension_n"] = s.pretension;

  j["body"]["mass_kg"] = s.model.body.mass;
  j["body"]["size_m"] = {s.body_size.x(), s.body_size.y()};
  j["body"]["inertia_kgm2"] = s.model.body.inertia;
  j["body"]["gravity_mps2"] = {s.model.body.gravity.x(),
                               s.model.body.gravity.y()};
  j["body"]["start_pose"] = {s.start_pose.p.x(), s.start_pose.p.y(),
                             s.start_pose.phi};

  j["booms"] = json::array();
  for (const auto& b : s.model.booms) {
    json jb;
    jb["shoulder_offset_m"] = {b.shoulder_offset.x(), b.shoulder_offset.y()};
    jb["b_min_m"] = b.b_min;
    jb["b_max_m"] = b.b_max;
    jb["ee_mass_kg"] = b.ee_mass;
    j["booms"].push_back(jb);
  }

  j["anchors"]["positions_m"] = json::array();
  for (const auto& a : s.anchors.anchors) {
    j["anchors"]["positions_m"].push_back({a.x(), a.y()});
  }
  if (!s.anchors.normals.empty()) {
    j["anchors"]["normals"] = json::array();
    for (const auto& n : s.anchors.normals) {
      j["anchors"]["normals"].push_back({n.x(), n.y()});
    }
  }
  j["anchors"]["initial_attachment"] = json::array();
  for (const auto& a : s.anchors.attached) {
    j["anchors"]["initial_attachment"].push_back(a.value_or(-1));
  }

  j["gait"]["pos_threshold_m"] = s.gait.pos_threshold;
  j["gait"]["vel_threshold_mps"] = s.gait.vel_threshold;
  j["gait"]["ang_threshold_rad"] = s.gait.ang_threshold;
  j["gait"]["ang_vel_threshold_radps"] = s.gait.ang_vel_threshold;
  j["gait"]["waypoints"] = json::array();
  for (const auto& w : s.gait.waypoints) {
    json jw;
    if (w.kind == WaypointKind::kBodyPose) {
      jw["body"]["position_m"] = {w.p_d.x(), w.p_d.y()};
      jw["body"]["heading_rad"] = w.phi_d;
    } else {
      jw["end_effector"]["boom"] = w.boom;
      jw["end_effector"]["anchor"] = w.anchor;
    }
    j["gait"]["waypoints"].push_back(jw);
  }

  j["control"]["body_kp"] = gain_to_json(s.body_gains.kp);
  j["control"]["body_kd"] = gain_to_json(s.body_gains.kd);
  j["control"]["ee_kp"] = gain_to_json(s.ee_gains.kp);
  j["control"]["ee_kd"] = gain_to_json(s.ee_gains.kd);
  j["control"]["limits"]["prismatic_max_n"] = s.limits.extension_force_max;
  j["control"]["limits"]["revolute_max_nm"] = s.limits.pivot_torque_max;

  if (s.noise.sigma != 0.0) {
    j["noise"]["sigma"] = s.noise.sigma;
    j["noise"]["seed"] = s.noise.seed;
    j["noise"]["fraction_of_median"] = s.noise.fraction_of_median;
  }
  if (s.model_error_spec.mass_scale != 1.0 ||
      s.model_error_spec.inertia_scale != 1.0) {
    j["model_error"]["mass_scale"] = s.model_error_spec.mass_scale;
    j["model_error"]["inertia_scale"] = s.model_error_spec.inertia_scale;
  }
  if (s.grip.has_value()) {
    j["grip"]["mu"] = s.grip->mu;
    j["grip"]["tensile_offset_n"] = s.grip->f_o;
  }
  j["structure"]["tensile_max_n"] = s.structure.tensile_max;
  j["structure"]["buckling_stiffness_nm2"] = s.structure.buckling_stiffness;
  j["structure"]["push_max_n"] = s.structure.push_max;

  return j.dump(2) + "\n";
}

}  // namespace reachbot
