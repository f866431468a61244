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

// Oriented-rectangle overlap by the separating-axis theorem.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qgdm/sim/geometry.hpp"

namespace qgdm::sim {

/// Separations below this count as contact.
inline constexpr double kContactTolerance = 1e-6;

struct OrientedRect {
  Vec2 center;
  double heading = 0.0;
  double length = 5.0;
  double width = 2.0;

  std::array<Vec2, 4> corners() const {
    const Vec2 f = (length / 2.0) * unit(heading);
    const Vec2 l = (width / 2.0) * left_normal(heading);
    return {center + f + l, center + f - l, center - f - l, center - f + l};
  }

  bool contains(Vec2 p) const {
    const Vec2 d = p - center;
    return std::abs(dot(d, unit(heading))) <= length / 2.0 &&
           std::abs(dot(d, left_normal(heading))) <= width / 2.0;
  }
};

/// Largest gap between the projections of a and b over the four candidate
/// axes. Negative means the rectangles overlap (by at least that depth on
/// every axis); positive is a lower bound on their distance.
inline double sat_separation(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {unit(a.heading), left_normal(a.heading), unit(b.heading),
                                    left_normal(b.heading)};
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& axis : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const Vec2& c : ca) {
      const double p = dot(c, axis);
      amin = std::min(amin, p);
      amax = std::max(amax, p);
    }
    for (const Vec2& c : cb) {
      const double p = dot(c, axis);
      bmin = std::min(bmin, p);
      bmax = std::max(bmax, p);
    }
    best = std::max(best, std::max(bmin - amax, amin - bmax));
  }
  return best;
}

/// Overlap or contact (touching edges count).
inline bool overlaps(const OrientedRect& a, const OrientedRect& b) {
  return sat_separation(a, b) < kContactTolerance;
}

}  // namespace qgdm::sim
