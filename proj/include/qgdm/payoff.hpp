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

// Game construction from a traffic scene: every joint action profile is
// rolled out for a short horizon with constant actions and scored per player
// on safety (time to collision), comfort (acceleration) and efficiency
// (speed and goal progress).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgdm/game/normal_form_game.hpp"
#include "qgdm/sim/scenario.hpp"
#include "qgdm/sim/world.hpp"

namespace qgdm::payoff {

struct PayoffWeights {
  double safety = 0.5;
  double comfort = 0.2;
  double efficiency = 0.3;
  double horizon = 2.0;         ///< rollout length [s]
  double ttc_floor = 4.0;       ///< TTC at which safety saturates [s]
  double max_accel = 3.0;       ///< |a| at which comfort reaches zero [m/s^2]
  double progress_blend = 0.5;  ///< share of goal progress inside the efficiency term
  double interaction_range = 60.0;  ///< pairs farther apart are ignored for TTC [m]

  void validate() const {
    if (safety < 0.0 || comfort < 0.0 || efficiency < 0.0) {
      throw std::invalid_argument("PayoffWeights: weights must be non-negative");
    }
    if (std::abs(safety + comfort + efficiency - 1.0) > 1e-9) {
      throw std::invalid_argument("PayoffWeights: weights must sum to 1");
    }
    if (!(horizon > 0.0) || !(ttc_floor > 0.0) || !(max_accel > 0.0)) {
      throw std::invalid_argument("PayoffWeights: horizon, ttc_floor, max_accel must be positive");
    }
    if (progress_blend < 0.0 || progress_blend > 1.0) {
      throw std::invalid_argument("PayoffWeights: progress_blend outside [0, 1]");
    }
  }
};

using sim::Action;
using sim::World;

struct VehicleFrame {
  sim::OrientedRect footprint;
  double s = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  double merge_fraction = 0.0;  ///< lateral progress into the target lane (merge goals)
};

struct VehicleInfo {
  double desired_speed = 0.0;
  sim::GoalKind goal = sim::GoalKind::RouteEnd;
};

/// frames[t][vehicle], t = 0 is the initial state.
struct Trajectory {
  double dt = 0.1;
  std::vector<VehicleInfo> info;
  std::vector<std::vector<VehicleFrame>> frames;
};

inline double merge_fraction(const World& w, const sim::Vehicle& v) {
  if (v.goal != sim::GoalKind::MergeLeft) return 0.0;
  if (v.lane_change && v.lane_change->to < v.lane_change->from) {
    return sim::lane_change_fraction(v, w.params);
  }
  return v.lane == 0 ? 1.0 : 0.0;
}

inline std::vector<VehicleFrame> snapshot(const World& w) {
  std::vector<VehicleFrame> out;
  out.reserve(w.vehicles.size());
  for (const auto& v : w.vehicles) {
    out.push_back({sim::footprint(w, v), v.s, v.speed, v.accel, merge_fraction(w, v)});
  }
  return out;
}

/// Forces `actions[k]` on `vehicles[k]` for the whole horizon. The ego keeps
/// its own longitudinal mode; any other forced vehicle drives with the
/// constant acceleration of its action. Everyone else keeps its controller,
/// with no lane-change decisions inside the rollout.
inline Trajectory rollout_profile(const World& scene, std::span<const std::size_t> vehicles,
                                  std::span<const Action> actions, double horizon) {
  if (vehicles.size() != actions.size()) {
    throw std::invalid_argument("rollout_profile: one action per forced vehicle");
  }
  World w = scene;
  for (std::size_t k = 0; k < vehicles.size(); ++k) {
    const std::size_t i = vehicles[k];
    if (i >= w.vehicles.size()) throw std::out_of_range("rollout_profile: bad vehicle index");
    if (i != w.ego) w.vehicles[i].controller = sim::Controller::RandomIv;
    sim::apply_command(w, i, actions[k]);
  }
  Trajectory traj;
  traj.dt = w.params.dt;
  for (const auto& v : w.vehicles) traj.info.push_back({v.desired_speed, v.goal});
  const auto steps = static_cast<std::size_t>(std::llround(horizon / w.params.dt));
  traj.frames.reserve(steps + 1);
  traj.frames.push_back(snapshot(w));
  for (std::size_t t = 0; t < steps; ++t) {
    sim::advance(w, w.params.dt);
    traj.frames.push_back(snapshot(w));
  }
  return traj;
}

/// The quantities the payoff is computed from.
struct ProfileSummary {
  bool collided = false;
  double min_ttc = std::numeric_limits<double>::infinity();
  double mean_abs_accel = 0.0;
  double mean_speed = 0.0;
  double desired_speed = 1.0;
  double progress = 0.0;  ///< normalized to [0, 1]
};

/// Time until the two footprints first overlap when both keep their current
/// velocity vector, sampled every `dt` up to `cap`; infinity if they do not
/// meet within `cap`, 0 if they already overlap.
inline double constant_velocity_ttc(const VehicleFrame& a, const VehicleFrame& b, double cap,
                                    double dt) {
  if (sim::overlaps(a.footprint, b.footprint)) return 0.0;
  const sim::Vec2 va = a.speed * sim::unit(a.footprint.heading);
  const sim::Vec2 vb = b.speed * sim::unit(b.footprint.heading);
  const sim::Vec2 rel = vb - va;
  const double reach = 0.5 * (std::hypot(a.footprint.length, a.footprint.width) +
                              std::hypot(b.footprint.length, b.footprint.width));
  if (sim::norm(b.footprint.center - a.footprint.center) - sim::norm(rel) * cap > reach) {
    return std::numeric_limits<double>::infinity();
  }
  sim::OrientedRect ra = a.footprint;
  sim::OrientedRect rb = b.footprint;
  const auto n = static_cast<std::size_t>(std::ceil(cap / dt - 1e-9));
  for (std::size_t k = 1; k <= n; ++k) {
    const double tau = std::min(cap, dt * static_cast<double>(k));
    ra.center = a.footprint.center + tau * va;
    rb.center = b.footprint.center + tau * vb;
    if (sim::overlaps(ra, rb)) return tau;
  }
  return std::numeric_limits<double>::infinity();
}

inline ProfileSummary summarize(const Trajectory& traj, std::size_t vehicle,
                                const PayoffWeights& weights) {
  if (traj.frames.size() < 2) throw std::invalid_argument("summarize: trajectory too short");
  ProfileSummary out;
  out.desired_speed = traj.info.at(vehicle).desired_speed;
  const std::size_t n_vehicles = traj.frames.front().size();
  const std::size_t steps = traj.frames.size() - 1;
  double accel_sum = 0.0, speed_sum = 0.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const auto& me = traj.frames[t][vehicle];
    accel_sum += std::abs(me.accel);
    speed_sum += me.speed;
    for (std::size_t j = 0; j < n_vehicles; ++j) {
      if (j == vehicle) continue;
      const auto& other = traj.frames[t][j];
      if (sim::norm(me.footprint.center - other.footprint.center) > weights.interaction_range) {
        continue;
      }
      const double ttc = constant_velocity_ttc(me, other, weights.ttc_floor, traj.dt);
      if (ttc == 0.0) out.collided = true;
      out.min_ttc = std::min(out.min_ttc, ttc);
    }
  }
  out.mean_abs_accel = accel_sum / static_cast<double>(steps);
  out.mean_speed = speed_sum / static_cast<double>(steps);
  const auto& first = traj.frames.front()[vehicle];
  const auto& last = traj.frames.back()[vehicle];
  if (traj.info[vehicle].goal == sim::GoalKind::MergeLeft) {
    out.progress = last.merge_fraction;
  } else {
    const double horizon = traj.dt * static_cast<double>(steps);
    out.progress = (last.s - first.s) / (out.desired_speed * horizon);
  }
  out.progress = std::clamp(out.progress, 0.0, 1.0);
  return out;
}

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

struct PayoffTerms {
  double safety = 0.0;
  double comfort = 0.0;
  double efficiency = 0.0;
};

inline PayoffTerms payoff_terms(const ProfileSummary& s, const PayoffWeights& w) {
  PayoffTerms t;
  t.safety = s.collided ? 0.0 : clamp01(s.min_ttc / w.ttc_floor);
  t.comfort = 1.0 - clamp01(s.mean_abs_accel / w.max_accel);
  t.efficiency = (1.0 - w.progress_blend) * clamp01(s.mean_speed / s.desired_speed) +
                 w.progress_blend * clamp01(s.progress);
  return t;
}

inline double score_summary(const ProfileSummary& s, const PayoffWeights& w) {
  const PayoffTerms t = payoff_terms(s, w);
  return clamp01(w.safety * t.safety + w.comfort * t.comfort + w.efficiency * t.efficiency);
}

inline double score_profile(const Trajectory& traj, std::size_t vehicle, const PayoffWeights& w) {
  return score_summary(summarize(traj, vehicle, w), w);
}

inline game::NormalFormGame build_game(const World& scene, const sim::GameSetup& setup,
                                       const PayoffWeights& weights) {
  if (setup.players.size() != setup.action_sets.size()) {
    throw std::invalid_argument("build_game: one action set per player");
  }
  std::vector<std::vector<std::string>> labels;
  for (const auto& set : setup.action_sets) {
    std::vector<std::string> names;
    for (Action a : set) names.emplace_back(sim::to_string(a));
    labels.push_back(std::move(names));
  }
  game::NormalFormGame g(std::move(labels));
  std::vector<Action> actions(setup.players.size());
  for (std::size_t k = 0; k < g.num_profiles(); ++k) {
    const auto profile = g.space().profile_at(k);
    for (std::size_t p = 0; p < profile.size(); ++p) actions[p] = setup.action_sets[p][profile[p]];
    const Trajectory traj = rollout_profile(scene, setup.players, actions, weights.horizon);
    for (std::size_t p = 0; p < setup.players.size(); ++p) {
      g.set_utility(p, k, score_profile(traj, setup.players[p], weights));
    }
  }
  return g;
}

}  // namespace qgdm::payoff
