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

// Intelligent Driver Model and the MOBIL lane-change criteria.

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgdm::sim {

/// Defaults follow a regular (non-aggressive) driver profile.
struct IdmParams {
  double desired_speed = 25.0;  ///< v0 [m/s]; overridden per vehicle
  double time_headway = 1.5;    ///< T [s]
  double min_gap = 2.0;         ///< s0 [m]
  double max_accel = 1.5;       ///< a_max [m/s^2]
  double comfort_decel = 2.0;   ///< b [m/s^2]
  double max_decel = 8.0;       ///< b_max, emergency braking bound [m/s^2]
  double exponent = 4.0;        ///< delta
};

struct MobilParams {
  double politeness = 0.3;
  double safe_decel = 4.0;  ///< b_safe [m/s^2]
  double threshold = 0.2;   ///< incentive threshold [m/s^2]
};

/// IDM acceleration. `gap` is bumper-to-bumper distance; pass infinity for a
/// free road. Non-positive gaps return emergency braking.
inline double idm_accel(double gap, double v, double v_lead, const IdmParams& p) {
  if (!(gap > 0.0)) return -p.max_decel;
  const double free_term = std::pow(v / p.desired_speed, p.exponent);
  double interaction = 0.0;
  if (std::isfinite(gap)) {
    const double dv = v - v_lead;
    const double s_star =
        p.min_gap + v * p.time_headway + v * dv / (2.0 * std::sqrt(p.max_accel * p.comfort_decel));
    interaction = (s_star / gap) * (s_star / gap);
  }
  const double a = p.max_accel * (1.0 - free_term - interaction);
  return std::clamp(a, -p.max_decel, p.max_accel);
}

/// Accelerations that enter a MOBIL evaluation for one candidate change.
struct MobilInputs {
  double own_before = 0.0;           ///< a_c
  double own_after = 0.0;            ///< a~_c
  double new_follower_before = 0.0;  ///< a_n
  double new_follower_after = 0.0;   ///< a~_n
  double old_follower_before = 0.0;  ///< a_o
  double old_follower_after = 0.0;   ///< a~_o
};

inline double mobil_incentive(const MobilInputs& in, const MobilParams& p) {
  const double others = (in.new_follower_after - in.new_follower_before) +
                        (in.old_follower_after - in.old_follower_before);
  return (in.own_after - in.own_before) + p.politeness * others;
}

/// Safety: the new follower brakes no harder than b_safe. Incentive: strictly
/// above the threshold.
inline bool mobil_accepts(const MobilInputs& in, const MobilParams& p) {
  if (in.new_follower_after < -p.safe_decel) return false;
  return mobil_incentive(in, p) > p.threshold;
}

}  // namespace qgdm::sim
