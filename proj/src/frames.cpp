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

#include "reachbot/frames.hpp"

#include <cmath>

namespace reachbot {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(std::string("non-finite ") + what);
  }
}

void require_finite(const Vec2& value, const char* what) {
  require_finite(value.x(), what);
  require_finite(value.y(), what);
}

}  // namespace

double wrap_angle(double angle) {
  require_finite(angle, "angle");
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -M_PI) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

double angle_diff(double a, double b) { return wrap_angle(a - b); }

Mat2 rot2(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

PlanarPose::PlanarPose(const Vec2& position, double heading) : p(position) {
  require_finite(position, "pose position");
  phi = wrap_angle(heading);
}

Twist::Twist(const Vec2& linear, double angular) : v(linear), w(angular) {
  require_finite(linear, "twist velocity");
  require_finite(angular, "twist rate");
}

Wrench::Wrench(const Vec2& force, double moment) : f(force), tau(moment) {
  require_finite(force, "wrench force");
  require_finite(moment, "wrench moment");
}

PlanarPose compose(const PlanarPose& a, const PlanarPose& b) {
  return PlanarPose(a.p + a.rotation() * b.p, a.phi + b.phi);
}

PlanarPose inverse(const PlanarPose& pose) {
  const Mat2 rt = pose.rotation().transpose();
  return PlanarPose(-(rt * pose.p), -pose.phi);
}

Mat3 transition_matrix(const PlanarPose& rel) {
  const Mat2 rt = rel.rotation().transpose();
  Mat3 t = Mat3::Zero();
  t.topLeftCorner<2, 2>() = rt;
  // Angular rate contributes w x p at the displaced origin.
  t.block<2, 1>(0, 2) = rt * perp(rel.p);
  t(2, 2) = 1.0;
  return t;
}

}  // namespace reachbot
