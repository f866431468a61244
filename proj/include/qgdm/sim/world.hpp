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

// Vehicles, routes and the kinematic world update. Every vehicle follows a
// route (a Path plus parallel lanes); its lateral position is the lane
// offset, interpolated linearly while a lane change is in progress.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgdm/sim/collision.hpp"
#include "qgdm/sim/driver_models.hpp"
#include "qgdm/sim/geometry.hpp"
#include "qgdm/sim/rng.hpp"

namespace qgdm::sim {

enum class ScenarioKind { RoundaboutTwoP, RoundaboutThreeP, MergingTwoP, MergingThreeP, Highway };

inline std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::RoundaboutTwoP: return "roundabout-2p";
    case ScenarioKind::RoundaboutThreeP: return "roundabout-3p";
    case ScenarioKind::MergingTwoP: return "merging-2p";
    case ScenarioKind::MergingThreeP: return "merging-3p";
    case ScenarioKind::Highway: return "highway";
  }
  return "?";
}

inline std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) {
  for (auto k : {ScenarioKind::RoundaboutTwoP, ScenarioKind::RoundaboutThreeP,
                 ScenarioKind::MergingTwoP, ScenarioKind::MergingThreeP, ScenarioKind::Highway}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline bool is_roundabout(ScenarioKind k) {
  return k == ScenarioKind::RoundaboutTwoP || k == ScenarioKind::RoundaboutThreeP;
}
inline bool is_merging(ScenarioKind k) {
  return k == ScenarioKind::MergingTwoP || k == ScenarioKind::MergingThreeP;
}

enum class Action { Accelerate, Decelerate, Idle, Merge, ChangeLaneLeft, ChangeLaneRight };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::Accelerate: return "Accelerate";
    case Action::Decelerate: return "Decelerate";
    case Action::Idle: return "Idle";
    case Action::Merge: return "Merge";
    case Action::ChangeLaneLeft: return "ChangeLaneLeft";
    case Action::ChangeLaneRight: return "ChangeLaneRight";
  }
  return "?";
}

enum class Controller { Ego, IdmMobil, RandomIv };

/// What a vehicle is trying to achieve; drives the progress term of its payoff.
enum class GoalKind { RouteEnd, MergeLeft };

struct Route {
  Path path;
  int lane_count = 1;
  double lane_width = 4.0;
  /// Arc length at which each lane ends; empty means all lanes run forever.
  std::vector<double> lane_end;

  /// Lane 0 is leftmost; higher indices lie to the right.
  double lane_offset(double lane) const { return -lane * lane_width; }

  double end_of_lane(int lane) const {
    if (lane < 0 || lane >= lane_count) return -std::numeric_limits<double>::infinity();
    if (lane_end.empty()) return std::numeric_limits<double>::infinity();
    return lane_end.at(static_cast<std::size_t>(lane));
  }
};

struct ActionMagnitudes {
  double accelerate = 2.0;        ///< [m/s^2]
  double decelerate = -3.0;       ///< [m/s^2]
  double lane_change_duration = 2.0;  ///< [s]
};

struct SimParams {
  double dt = 0.1;
  IdmParams idm;
  MobilParams mobil;
  ActionMagnitudes actions;
  double lookahead = 150.0;  ///< leader/follower search range [m]
};

struct LaneChange {
  int from = 0;
  int to = 0;
  double elapsed = 0.0;
};

struct Vehicle {
  int id = 0;
  std::size_t route = 0;
  double s = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  int lane = 0;
  std::optional<LaneChange> lane_change;
  Controller controller = Controller::IdmMobil;
  /// Held high-level command (ego and random vehicles).
  Action command = Action::Idle;
  /// Ego only: longitudinal control by IDM instead of the command.
  bool idm_longitudinal = false;
  double length = 5.0;
  double width = 2.0;
  double v_min = 0.0;
  double v_max = 40.0;
  double desired_speed = 25.0;
  GoalKind goal = GoalKind::RouteEnd;
  /// Arc length at which the vehicle's route is complete.
  double goal_s = std::numeric_limits<double>::infinity();
  /// Private stream for randomly behaving vehicles.
  CounterRng rng;
};

struct World {
  ScenarioKind kind = ScenarioKind::Highway;
  std::shared_ptr<const std::vector<Route>> routes;
  std::vector<Vehicle> vehicles;
  double time = 0.0;
  std::size_t ego = 0;
  /// Interacting vehicles in player order (player 1..n-1 of the game).
  std::vector<std::size_t> interacting;
  SimParams params;

  const Route& route_of(const Vehicle& v) const { return routes->at(v.route); }
  const Vehicle& ego_vehicle() const { return vehicles.at(ego); }
};

inline double lane_change_fraction(const Vehicle& v, const SimParams& p) {
  if (!v.lane_change) return 0.0;
  return std::clamp(v.lane_change->elapsed / p.actions.lane_change_duration, 0.0, 1.0);
}

inline double lateral_offset(const World& w, const Vehicle& v) {
  const Route& r = w.route_of(v);
  if (!v.lane_change) return r.lane_offset(v.lane);
  const double f = lane_change_fraction(v, w.params);
  return r.lane_offset(v.lane_change->from) * (1.0 - f) + r.lane_offset(v.lane_change->to) * f;
}

inline Pose pose_of(const World& w, const Vehicle& v) {
  return w.route_of(v).path.pose_at(v.s, lateral_offset(w, v));
}

inline OrientedRect footprint(const World& w, const Vehicle& v) {
  const Pose p = pose_of(w, v);
  return {p.position, p.heading, v.length, v.width};
}

inline bool occupies_lane(const Vehicle& v, int lane) {
  if (v.lane_change) return v.lane_change->from == lane || v.lane_change->to == lane;
  return v.lane == lane;
}

struct Neighbor {
  std::optional<std::size_t> index;  ///< nullopt for none or a lane end
  double gap = std::numeric_limits<double>::infinity();
  double speed = 0.0;
};

/// Nearest obstacle ahead of vehicle i in `lane`: vehicles on the same route
/// occupying that lane, vehicles on other routes whose projection falls
/// inside the lane, and the lane's end (a standing obstacle).
inline Neighbor find_leader(const World& w, std::size_t i, int lane,
                            std::optional<std::size_t> ignore = std::nullopt) {
  const Vehicle& me = w.vehicles[i];
  const Route& route = w.route_of(me);
  Neighbor best;
  const double lane_end = route.end_of_lane(lane);
  if (std::isfinite(lane_end)) {
    best.gap = lane_end - me.s - me.length / 2.0;
    best.speed = 0.0;
  }
  for (std::size_t j = 0; j < w.vehicles.size(); ++j) {
    if (j == i || (ignore && *ignore == j)) continue;
    const Vehicle& other = w.vehicles[j];
    double other_s = 0.0;
    if (other.route == me.route) {
      if (!occupies_lane(other, lane)) continue;
      other_s = other.s;
    } else {
      const Pose op = pose_of(w, other);
      const auto proj = route.path.project(op.position);
      if (std::abs(proj.lateral - route.lane_offset(lane)) >
          route.lane_width / 2.0 + other.width / 2.0) {
        continue;
      }
      other_s = proj.s;
    }
    if (other_s <= me.s || other_s - me.s > w.params.lookahead) continue;
    const double gap = other_s - me.s - (me.length + other.length) / 2.0;
    if (gap < best.gap) {
      best = {j, gap, other.speed};
    }
  }
  return best;
}

/// Nearest vehicle behind vehicle i in `lane` on the same route.
inline Neighbor find_follower(const World& w, std::size_t i, int lane) {
  const Vehicle& me = w.vehicles[i];
  Neighbor best;
  for (std::size_t j = 0; j < w.vehicles.size(); ++j) {
    if (j == i) continue;
    const Vehicle& other = w.vehicles[j];
    if (other.route != me.route || !occupies_lane(other, lane)) continue;
    if (other.s > me.s || me.s - other.s > w.params.lookahead) continue;
    const double gap = me.s - other.s - (me.length + other.length) / 2.0;
    if (gap < best.gap) best = {j, gap, other.speed};
  }
  return best;
}

inline IdmParams idm_params_for(const World& w, const Vehicle& v) {
  IdmParams p = w.params.idm;
  p.desired_speed = v.desired_speed;
  return p;
}

inline double idm_behind(const World& w, const Vehicle& v, const Neighbor& leader) {
  return idm_accel(leader.gap, v.speed, leader.speed, idm_params_for(w, v));
}

/// IDM acceleration of vehicle i, following the closest leader in every lane
/// it currently occupies.
inline double idm_for(const World& w, std::size_t i) {
  const Vehicle& v = w.vehicles[i];
  Neighbor leader = find_leader(w, i, v.lane_change ? v.lane_change->from : v.lane);
  if (v.lane_change) {
    Neighbor other = find_leader(w, i, v.lane_change->to);
    if (other.gap < leader.gap) leader = other;
  }
  return idm_behind(w, v, leader);
}

inline double command_accel(const ActionMagnitudes& m, Action a) {
  switch (a) {
    case Action::Accelerate: return m.accelerate;
    case Action::Decelerate: return m.decelerate;
    default: return 0.0;
  }
}

inline double longitudinal_accel(const World& w, std::size_t i) {
  const Vehicle& v = w.vehicles[i];
  switch (v.controller) {
    case Controller::IdmMobil: return idm_for(w, i);
    case Controller::RandomIv: {
      // Random intent, but never drives blindly into whatever is ahead.
      const double a = command_accel(w.params.actions, v.command);
      const Neighbor leader = find_leader(w, i, v.lane);
      return leader.index ? std::min(a, idm_behind(w, v, leader)) : a;
    }
    case Controller::Ego:
      return v.idm_longitudinal ? idm_for(w, i) : command_accel(w.params.actions, v.command);
  }
  return 0.0;
}

inline bool lane_change_possible(const World& w, std::size_t i, int target) {
  const Vehicle& v = w.vehicles[i];
  if (v.lane_change) return false;
  const Route& r = w.route_of(v);
  if (target < 0 || target >= r.lane_count || target == v.lane) return false;
  return v.s < r.end_of_lane(target);
}

inline void begin_lane_change(World& w, std::size_t i, int target) {
  Vehicle& v = w.vehicles[i];
  v.lane_change = LaneChange{v.lane, target, 0.0};
}

/// Sets the held command; lateral commands start a lane change when possible.
inline void apply_command(World& w, std::size_t i, Action a) {
  Vehicle& v = w.vehicles[i];
  v.command = a;
  int target = v.lane;
  if (a == Action::Merge || a == Action::ChangeLaneLeft) target = v.lane - 1;
  if (a == Action::ChangeLaneRight) target = v.lane + 1;
  if (target != v.lane && lane_change_possible(w, i, target)) begin_lane_change(w, i, target);
}

struct Integration {
  double speed;
  double distance;
};

/// Constant-acceleration update over dt with the speed clamped into
/// [v_min, v_max]; the distance accounts for reaching a bound mid-step.
inline Integration integrate(double v, double a, double dt, double v_min, double v_max) {
  const double unclamped = v + a * dt;
  if (a < 0.0 && unclamped < v_min) {
    const double t = std::max(0.0, (v - v_min) / -a);
    return {v_min, v * t + 0.5 * a * t * t + v_min * (dt - t)};
  }
  if (a > 0.0 && unclamped > v_max) {
    const double t = std::max(0.0, (v_max - v) / a);
    return {v_max, v * t + 0.5 * a * t * t + v_max * (dt - t)};
  }
  return {std::clamp(unclamped, v_min, v_max), v * dt + 0.5 * a * dt * dt};
}

/// Advances all vehicles by dt: accelerations are evaluated on the current
/// state first, then applied simultaneously.
inline void advance(World& w, double dt) {
  std::vector<double> accel(w.vehicles.size());
  for (std::size_t i = 0; i < w.vehicles.size(); ++i) accel[i] = longitudinal_accel(w, i);
  for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
    Vehicle& v = w.vehicles[i];
    const double v_min = std::max(0.0, v.v_min);
    const auto step = integrate(v.speed, accel[i], dt, v_min, v.v_max);
    v.accel = (step.speed - v.speed) / dt;
    v.speed = step.speed;
    v.s += step.distance;
    if (v.lane_change) {
      v.lane_change->elapsed += dt;
      if (v.lane_change->elapsed >= w.params.actions.lane_change_duration - 1e-9) {
        v.lane = v.lane_change->to;
        v.lane_change.reset();
      }
    }
  }
  w.time += dt;
}

inline World step(World w, double dt) {
  advance(w, dt);
  return w;
}

/// MOBIL evaluation of moving vehicle i into `target` (same route).
inline MobilInputs mobil_inputs(const World& w, std::size_t i, int target) {
  const Vehicle& me = w.vehicles[i];
  MobilInputs in;
  const Neighbor old_leader = find_leader(w, i, me.lane);
  const Neighbor new_leader = find_leader(w, i, target);
  in.own_before = idm_behind(w, me, old_leader);
  in.own_after = idm_behind(w, me, new_leader);

  const Neighbor new_follower = find_follower(w, i, target);
  if (new_follower.index) {
    const Vehicle& n = w.vehicles[*new_follower.index];
    in.new_follower_before = idm_behind(w, n, find_leader(w, *new_follower.index, target, i));
    in.new_follower_after = idm_behind(w, n, {i, new_follower.gap, me.speed});
  }
  const Neighbor old_follower = find_follower(w, i, me.lane);
  if (old_follower.index) {
    const Vehicle& o = w.vehicles[*old_follower.index];
    in.old_follower_before = idm_behind(w, o, {i, old_follower.gap, me.speed});
    in.old_follower_after = idm_behind(w, o, find_leader(w, *old_follower.index, me.lane, i));
  }
  return in;
}

/// Lane-change decision for vehicle i: -1 (left), +1 (right) or nullopt.
/// When both sides qualify the larger incentive wins, left on ties.
inline std::optional<int> mobil_decide(const World& w, std::size_t i) {
  const Vehicle& me = w.vehicles[i];
  if (me.lane_change) return std::nullopt;
  std::optional<int> best;
  double best_incentive = -std::numeric_limits<double>::infinity();
  for (int dir : {-1, +1}) {
    const int target = me.lane + dir;
    if (!lane_change_possible(w, i, target)) continue;
    const MobilInputs in = mobil_inputs(w, i, target);
    if (!mobil_accepts(in, w.params.mobil)) continue;
    const double inc = mobil_incentive(in, w.params.mobil);
    if (inc > best_incentive) {
      best_incentive = inc;
      best = dir;
    }
  }
  return best;
}

/// Uniform draw from an action set using the vehicle's own stream.
inline Action random_iv_action(CounterRng& rng, std::span<const Action> actions) {
  if (actions.empty()) throw std::invalid_argument("random_iv_action: empty action set");
  return actions[rng.index(actions.size())];
}

/// Collision candidates are pairs whose centers lie within this distance.
inline constexpr double kBroadPhaseRange = 20.0;

inline bool vehicles_collide(const World& w, std::size_t a, std::size_t b) {
  const OrientedRect ra = footprint(w, w.vehicles[a]);
  const OrientedRect rb = footprint(w, w.vehicles[b]);
  if (norm(ra.center - rb.center) > kBroadPhaseRange) return false;
  return overlaps(ra, rb);
}

/// First colliding pair (i < j) in index order, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> detect_collision(const World& w) {
  for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
    for (std::size_t j = i + 1; j < w.vehicles.size(); ++j) {
      if (vehicles_collide(w, i, j)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

/// Lowest-index vehicle the ego is colliding with.
inline std::optional<std::size_t> ego_collision(const World& w) {
  for (std::size_t j = 0; j < w.vehicles.size(); ++j) {
    if (j != w.ego && vehicles_collide(w, w.ego, j)) return j;
  }
  return std::nullopt;
}

}  // namespace qgdm::sim
