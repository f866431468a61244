// Copyright 2026 The QGDM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Planar vectors and piecewise paths made of straight and circular segments,
// parameterized by arc length. Lateral offsets are measured along the left
// normal of the path.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qgdm::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }
inline Vec2 left_normal(double heading) { return {-std::sin(heading), std::cos(heading)}; }

/// Wraps an angle into [0, 2*pi).
inline double wrap_positive(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  return a < 0.0 ? a + two_pi : a;
}

struct Pose {
  Vec2 position;
  double heading = 0.0;
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Constant-curvature piece: a line when curvature == 0, else an arc
/// (positive curvature turns left / counter-clockwise).
struct Segment {
  Vec2 start;
  double heading = 0.0;
  double length = 0.0;
  double curvature = 0.0;

  Pose pose_at(double t) const {
    if (curvature == 0.0) return {start + t * unit(heading), heading};
    const double h = heading + curvature * t;
    const double r = 1.0 / curvature;
    return {{start.x + r * (std::sin(h) - std::sin(heading)),
             start.y - r * (std::cos(h) - std::cos(heading))},
            h};
  }

  Vec2 center() const { return start + (1.0 / curvature) * left_normal(heading); }
};

class Path {
 public:
  struct Projection {
    double s = 0.0;
    double lateral = 0.0;
    double distance = std::numeric_limits<double>::infinity();
  };

  static Path line(Vec2 start, double heading, double length) {
    Path p;
    p.append({start, heading, length, 0.0});
    return p;
  }

  /// Straight continuation from the current end, optionally with a new
  /// heading (paths may have corners).
  Path& then_line(double length, std::optional<double> heading = std::nullopt) {
    const Pose end = end_pose();
    append({end.position, heading.value_or(end.heading), length, 0.0});
    return *this;
  }

  /// Arc of the given radius and signed sweep (radians, positive = left).
  Path& then_arc(double radius, double sweep, std::optional<double> heading = std::nullopt) {
    if (radius <= 0.0) throw std::invalid_argument("Path::then_arc: radius must be positive");
    const Pose end = end_pose();
    const double k = (sweep >= 0.0 ? 1.0 : -1.0) / radius;
    append({end.position, heading.value_or(end.heading), std::abs(sweep) * radius, k});
    return *this;
  }

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Pose at arc length s; extrapolated along the end tangents outside [0, L].
  Pose pose_at(double s) const {
    if (segments_.empty()) throw std::logic_error("Path::pose_at: empty path");
    if (s <= 0.0) {
      const Segment& first = segments_.front();
      return {first.start + s * unit(first.heading), first.heading};
    }
    const std::size_t i = segment_index(s);
    const double t = s - segment_start(i);
    const Segment& seg = segments_[i];
    if (i + 1 == segments_.size() && t > seg.length) {
      const Pose end = seg.pose_at(seg.length);
      return {end.position + (t - seg.length) * unit(end.heading), end.heading};
    }
    return seg.pose_at(t);
  }

  Pose pose_at(double s, double lateral) const {
    Pose p = pose_at(s);
    p.position = p.position + lateral * left_normal(p.heading);
    return p;
  }

  Pose end_pose() const {
    if (segments_.empty()) return {};
    return segments_.back().pose_at(segments_.back().length);
  }

  /// Closest point over all segments (first and last extended to infinity).
  Projection project(Vec2 point) const {
    Projection best;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Segment& seg = segments_[i];
      const bool first = i == 0;
      const bool last = i + 1 == segments_.size();
      double t = 0.0;
      if (seg.curvature == 0.0) {
        t = dot(point - seg.start, unit(seg.heading));
      } else {
        const Vec2 c = seg.center();
        const double start_angle = std::atan2(seg.start.y - c.y, seg.start.x - c.x);
        const double angle = std::atan2(point.y - c.y, point.x - c.x);
        const double r = 1.0 / std::abs(seg.curvature);
        const double swept =
            seg.curvature > 0.0 ? wrap_positive(angle - start_angle) : wrap_positive(start_angle - angle);
        t = swept * r;
        // Beyond the arc's end: snap to whichever endpoint is angularly nearer.
        if (t > seg.length) {
          const double past_end = t - seg.length;
          const double before_start = 2.0 * std::numbers::pi * r - t;
          t = past_end < before_start ? seg.length : 0.0;
        }
      }
      if (!first) t = std::max(t, 0.0);
      if (!last) t = std::min(t, seg.length);
      Pose foot;
      if (t < 0.0) {
        foot = {seg.start + t * unit(seg.heading), seg.heading};
      } else if (t > seg.length) {
        const Pose e = seg.pose_at(seg.length);
        foot = {e.position + (t - seg.length) * unit(e.heading), e.heading};
      } else {
        foot = seg.pose_at(t);
      }
      const Vec2 diff = point - foot.position;
      const double d = norm(diff);
      if (d < best.distance) {
        best.distance = d;
        best.s = segment_start(i) + t;
        best.lateral = dot(diff, left_normal(foot.heading));
      }
    }
    return best;
  }

 private:
  void append(Segment seg) {
    if (seg.length < 0.0) throw std::invalid_argument("Path: negative segment length");
    segments_.push_back(seg);
    cumulative_.push_back(length() + seg.length);
  }

  double segment_start(std::size_t i) const { return i == 0 ? 0.0 : cumulative_[i - 1]; }

  std::size_t segment_index(double s) const {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    if (it == cumulative_.end()) return segments_.size() - 1;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

  std::vector<Segment> segments_;
  std::vector<double> cumulative_;
};

}  // namespace qgdm::sim
