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

#include "plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace reachbot::plots {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Maps data coordinates into a fixed pixel viewport (y up).
struct Frame {
  double x0, x1, y0, y1;      // data window
  double px0, px1, py0, py1;  // pixel window (py0 is the top)

  double x(double v) const {
    return px0 + (v - x0) / (x1 - x0) * (px1 - px0);
  }
  double y(double v) const {
    return py1 - (v - y0) / (y1 - y0) * (py1 - py0);
  }
};

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
          << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
          << height << "\">\n";
    body_ << "<rect width=\"" << width << "\" height=\"" << height
          << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2,
            const std::string& color, double w = 1.0,
            const std::string& dash = "") {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
          << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << color
          << "\" stroke-width=\"" << num(w) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color, double w = 1.5) {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"" << num(w) << "\" points=\"";
    for (const auto& [x, y] : pts) {
      body_ << num(x) << "," << num(y) << " ";
    }
    body_ << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill,
              const std::string& stroke = "none") {
    body_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\""
          << num(r) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
          << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
          << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill
          << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 11.0,
            const std::string& anchor = "start",
            const std::string& color = "#333") {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y)
          << "\" font-family=\"sans-serif\" font-size=\"" << num(size)
          << "\" fill=\"" << color << "\" text-anchor=\"" << anchor << "\">"
          << s << "</text>\n";
  }

  void axes(const Frame& f, const std::string& xlabel,
            const std::string& ylabel) {
    line(f.px0, f.py1, f.px1, f.py1, "#333");
    line(f.px0, f.py0, f.px0, f.py1, "#333");
    for (int k = 0; k <= 5; ++k) {
      const double xv = f.x0 + (f.x1 - f.x0) * k / 5.0;
      const double yv = f.y0 + (f.y1 - f.y0) * k / 5.0;
      line(f.x(xv), f.py1, f.x(xv), f.py1 + 4, "#333");
      text(f.x(xv), f.py1 + 16, num(xv), 10, "middle");
      line(f.px0 - 4, f.y(yv), f.px0, f.y(yv), "#333");
      text(f.px0 - 6, f.y(yv) + 3, num(yv), 10, "end");
    }
    text((f.px0 + f.px1) / 2.0, f.py1 + 32, xlabel, 12, "middle");
    text(f.px0 - 44, f.py0 - 8, ylabel, 12, "start");
  }

  void save(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
      throw IoError("cannot write " + path);
    }
    out << body_.str() << "</svg>\n";
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

std::string fos_color(double fos) {
  if (fos < 1.0) {
    return fos < 0.5 ? "#c62828" : "#ef6c00";  // failing
  }
  if (fos < 2.0) return "#f9a825";
  if (fos < 4.0) return "#9ccc65";
  if (fos < 8.0) return "#43a047";
  return "#1565c0";
}

const char* kBoomColors[4] = {"#1565c0", "#43a047", "#ef6c00", "#8e24aa"};

}  // namespace

void write_trajectory_svg(const Trace& trace, const Scenario& scenario,
                          const std::string& path) {
  double x0 = 1e30, x1 = -1e30, y0 = 1e30, y1 = -1e30;
  const auto grow = [&](const Vec2& p) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  };
  for (const auto& a : scenario.anchors.anchors) grow(a);
  for (const auto& rec : trace.records) grow(rec.body.p);
  const double pad = 0.08 * std::max(x1 - x0, y1 - y0) + 0.3;
  x0 -= pad;
  x1 += pad;
  y0 -= pad;
  y1 += pad;

  const double width = 960.0;
  const double height = 60.0 + (y1 - y0) / (x1 - x0) * 880.0;
  Svg svg(width, height);
  Frame f{x0, x1, y0, y1, 40, 920, 30, height - 30};

  // Anchors.
  for (size_t i = 0; i < scenario.anchors.anchors.size(); ++i) {
    const Vec2& a = scenario.anchors.anchors[i];
    svg.circle(f.x(a.x()), f.y(a.y()), 5, "#7b1fa2");
  }

  // Boom snapshots at even time intervals.
  const size_t n = trace.records.size();
  const int snapshots = 9;
  for (int s = 0; s < snapshots; ++s) {
    const auto& rec = trace.records[s * (n - 1) / (snapshots - 1)];
    for (int i = 0; i < kNumBooms; ++i) {
      if (!rec.attached[i] && rec.active_boom != i) continue;
      const Vec2 sh = shoulder_world(rec.body, scenario.model.booms[i]);
      const Vec2 tip =
          tip_world(rec.body, scenario.model.booms[i], rec.joints[i]);
      svg.line(f.x(sh.x()), f.y(sh.y()), f.x(tip.x()), f.y(tip.y()),
               kBoomColors[i], 0.6, "3,3");
    }
    // Body footprint center.
    svg.circle(f.x(rec.body.p.x()), f.y(rec.body.p.y()), 3, "#9e9e9e");
  }

  // Body path.
  std::vector<std::pair<double, double>> pts;
  const size_t stride = std::max<size_t>(1, n / 4000);
  for (size_t k = 0; k < n; k += stride) {
    pts.emplace_back(f.x(trace.records[k].body.p.x()),
                     f.y(trace.records[k].body.p.y()));
  }
  svg.polyline(pts, "#fbc02d", 2.0);

  // Numbered waypoints.
  for (size_t k = 0; k < scenario.gait.waypoints.size(); ++k) {
    const Waypoint& wp = scenario.gait.waypoints[k];
    Vec2 p;
    std::string color;
    if (wp.kind == WaypointKind::kBodyPose) {
      p = wp.p_d;
      color = "#f57f17";
    } else {
      p = scenario.anchors.anchors[wp.anchor];
      color = kBoomColors[wp.boom];
    }
    svg.text(f.x(p.x()) + 6, f.y(p.y()) - 6, std::to_string(k + 1), 12,
             "start", color);
  }

  svg.axes(f, "x (m)", "y (m)");
  svg.save(path);
}

void write_errors_svg(const Trace& trace, const std::string& path) {
  const double t_end = trace.records.back().t;
  double err_max = 1e-6;
  for (const auto& rec : trace.records) {
    err_max = std::max({err_max, rec.pos_err, std::abs(rec.ang_err)});
  }

  Svg svg(960, 420);
  Frame f{0.0, std::max(t_end, 1e-3), 0.0, 1.1 * err_max, 60, 930, 20, 370};

  std::vector<std::pair<double, double>> pos, ang;
  const size_t stride = std::max<size_t>(1, trace.records.size() / 4000);
  for (size_t k = 0; k < trace.records.size(); k += stride) {
    const auto& rec = trace.records[k];
    pos.emplace_back(f.x(rec.t), f.y(rec.pos_err));
    ang.emplace_back(f.x(rec.t), f.y(std::abs(rec.ang_err)));
  }
  svg.polyline(pos, "#1565c0", 1.5);
  svg.polyline(ang, "#ef6c00", 1.5);

  // Waypoint switch instants.
  int last_wp = trace.records.front().waypoint_index;
  for (const auto& rec : trace.records) {
    if (rec.waypoint_index != last_wp) {
      last_wp = rec.waypoint_index;
      svg.line(f.x(rec.t), f.py0, f.x(rec.t), f.py1, "#bbb", 0.7, "2,4");
    }
  }

  svg.text(870, 40, "position error (m)", 11, "end", "#1565c0");
  svg.text(870, 56, "|heading error| (rad)", 11, "end", "#ef6c00");
  svg.axes(f, "time (s)", "error");
  svg.save(path);
}

void write_fos_svg(const FosGrid& grid, const std::string& path) {
  Svg svg(760, 700);
  const double fx0 = grid.fx.front(), fx1 = grid.fx.back();
  const double fy0 = grid.fy.front(), fy1 = grid.fy.back();
  Frame f{fx0, fx1, fy0, fy1, 70, 690, 30, 630};

  const double dx = (f.x(fx1) - f.x(fx0)) / (grid.fx.size() - 1);
  const double dy = (f.y(fy0) - f.y(fy1)) / (grid.fy.size() - 1);
  for (int i = 0; i < grid.fos.rows(); ++i) {
    for (int j = 0; j < grid.fos.cols(); ++j) {
      svg.rect(f.x(grid.fx[j]) - dx / 2.0, f.y(grid.fy[i]) - dy / 2.0, dx,
               dy, fos_color(grid.fos(i, j)));
    }
  }
  svg.text(80, 660, "minimum factor of safety; red/orange cells expect "
                    "failure (FoS < 1)",
           11);
  svg.axes(f, "disturbance F_x (N)", "disturbance F_y (N)");
  svg.save(path);
}

void write_trade_svg(const std::vector<TradeEntry>& table,
                     const std::string& path) {
  double m0 = 1e30, m1 = -1e30, r1 = 0.0;
  for (const auto& e : table) {
    m0 = std::min(m0, e.mass);
    m1 = std::max(m1, e.mass);
    r1 = std::max(r1, e.response_time);
  }
  Svg svg(960, 480);
  Frame f{m0, m1, 0.0, 1.15 * r1, 60, 930, 20, 430};

  std::vector<std::pair<double, double>> pts;
  for (const auto& e : table) {
    pts.emplace_back(f.x(e.mass), f.y(e.response_time));
  }
  svg.polyline(pts, "#1565c0", 2.0);
  for (const auto& e : table) {
    svg.circle(f.x(e.mass), f.y(e.response_time), 4,
               e.clipped ? "#ef6c00" : "#1565c0");
  }
  svg.text(870, 40, "orange markers: actuator clipping active", 11, "end",
           "#ef6c00");
  svg.axes(f, "mass (kg)", "mean response time (s)");
  svg.save(path);
}

}  // namespace reachbot::plots
