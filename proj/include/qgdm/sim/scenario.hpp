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

// Scenario layouts and randomized initial conditions.
//
// Roundabout: single-lane ring (radius 20 m, counter-clockwise) with four
// arms. The ego enters from the south and leaves to the north; the first
// interacting vehicle enters from the east (joining the ring where the ego
// passes) and the second, in the three-player variant, circulates from the
// west past the ego's entry.
//
// Merging: main lane 0 and a 150 m acceleration lane 1 to its right. The ego
// starts in lane 1 and must merge left; interacting vehicles drive lane 0.
//
// Highway: straight four-lane road, 1 km to the goal, with IDM/MOBIL
// background traffic. The ego's lane is drawn uniformly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgdm/sim/world.hpp"

namespace qgdm::sim {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double sample(CounterRng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
  bool valid() const { return lo <= hi && std::isfinite(lo) && std::isfinite(hi); }
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Highway;
  double timeout = 60.0;          ///< [s]
  double decision_period = 1.0;   ///< [s]
  SimParams sim;

  // Initial conditions. "Position" means distance to the ring entry for
  // roundabouts (negative: already on the ring), arc length along the road
  // for the ego in merging/highway, and offset from the ego for merging IVs.
  Range ego_speed{6.0, 10.0};
  Range ego_position{10.0, 30.0};
  Range iv_speed{6.0, 10.0};
  std::vector<Range> iv_positions;
  double ego_desired_speed = 10.0;
  double iv_desired_speed = 10.0;
  double ego_v_max = 12.0;
  double iv_v_min = 3.0;
  double iv_v_max = 12.0;

  // Roundabout geometry.
  double ring_radius = 20.0;
  double approach_length = 60.0;
  double exit_length = 40.0;
  double arm_offset = 3.0;  ///< lateral separation of entry and exit legs from the arm axis

  // Straight-road geometry (merging / highway).
  int lane_count = 2;
  double lane_width = 4.0;
  double road_length = 400.0;
  double merge_lane_length = 150.0;
  double goal_distance = 1000.0;  ///< highway goal arc length

  // Highway background traffic.
  int background_vehicles = 15;
  Range ov_position{0.0, 450.0};
  Range ov_speed{18.0, 24.0};
  Range ov_desired_speed{20.0, 28.0};
  double min_initial_gap = 12.0;  ///< same-lane bumper gap at placement [m]

  // No ego progress over this window counts as stuck.
  double stuck_window = 30.0;
  double stuck_distance = 1.0;
};

inline ScenarioSpec default_spec(ScenarioKind kind) {
  ScenarioSpec s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::RoundaboutTwoP:
    case ScenarioKind::RoundaboutThreeP:
      s.timeout = 60.0;
      s.lane_count = 1;
      s.ego_speed = {6.0, 10.0};
      s.ego_position = {10.0, 30.0};
      s.iv_speed = {6.0, 10.0};
      s.iv_positions = {Range{15.0, 45.0}};
      if (kind == ScenarioKind::RoundaboutThreeP) s.iv_positions.push_back(Range{-25.0, 5.0});
      s.ego_desired_speed = 10.0;
      s.iv_desired_speed = 10.0;
      s.ego_v_max = 12.0;
      s.iv_v_min = 3.0;
      s.iv_v_max = 12.0;
      break;
    case ScenarioKind::MergingTwoP:
    case ScenarioKind::MergingThreeP:
      s.timeout = 40.0;
      s.lane_count = 2;
      s.road_length = 400.0;
      s.merge_lane_length = 150.0;
      s.ego_speed = {10.0, 14.0};
      s.ego_position = {30.0, 60.0};
      s.iv_speed = {10.0, 14.0};
      s.iv_positions = {Range{-20.0, 5.0}};
      if (kind == ScenarioKind::MergingThreeP) s.iv_positions.push_back(Range{8.0, 30.0});
      s.ego_desired_speed = 14.0;
      s.iv_desired_speed = 14.0;
      s.ego_v_max = 20.0;
      s.iv_v_min = 4.0;
      s.iv_v_max = 18.0;
      break;
    case ScenarioKind::Highway:
      s.timeout = 120.0;
      s.lane_count = 4;
      s.road_length = 1200.0;
      s.goal_distance = 1000.0;
      s.ego_speed = {20.0, 24.0};
      s.ego_position = {100.0, 100.0};
      s.ego_desired_speed = 25.0;
      s.ego_v_max = 40.0;
      break;
  }
  return s;
}

inline void validate(const ScenarioSpec& s) {
  auto fail = [](const std::string& m) { throw std::invalid_argument("ScenarioSpec: " + m); };
  if (!(s.sim.dt > 0.0)) fail("dt must be positive");
  const double ratio = s.decision_period / s.sim.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    fail("timestep must divide the decision period");
  }
  if (!(s.timeout > 0.0)) fail("timeout must be positive");
  if (!s.ego_speed.valid() || !s.ego_position.valid() || !s.iv_speed.valid()) fail("empty range");
  for (const auto& r : s.iv_positions) {
    if (!r.valid()) fail("empty IV position range");
  }
  const std::size_t need = (s.kind == ScenarioKind::RoundaboutThreeP ||
                            s.kind == ScenarioKind::MergingThreeP)
                               ? 2
                               : (s.kind == ScenarioKind::Highway ? 0 : 1);
  if (s.iv_positions.size() != need) {
    fail("scenario " + std::string(to_string(s.kind)) + " needs " + std::to_string(need) +
         " IV position ranges");
  }
}

inline std::size_t decision_interval_steps(const ScenarioSpec& s) {
  return static_cast<std::size_t>(std::llround(s.decision_period / s.sim.dt));
}

/// Stream purposes for stream_key.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kVehicleStream = 2;

namespace detail {

// Route entering the ring at arm angle `arm`, circulating `quarter_turns`
// quarters counter-clockwise and leaving on the corresponding arm.
inline Route roundabout_route(const ScenarioSpec& s, double arm, int quarter_turns) {
  const double r = s.ring_radius;
  const double alpha = std::asin(s.arm_offset / r);
  const double exit_arm = arm + quarter_turns * std::numbers::pi / 2.0;
  const Vec2 entry = r * unit(arm - alpha);
  const Vec2 start = entry + s.approach_length * unit(arm);
  Path path = Path::line(start, arm + std::numbers::pi, s.approach_length);
  path.then_arc(r, quarter_turns * std::numbers::pi / 2.0 + 2.0 * alpha,
                arm - alpha + std::numbers::pi / 2.0);
  path.then_line(s.exit_length, exit_arm);
  return Route{std::move(path), 1, s.lane_width, {}};
}

inline double ring_arc_length(const ScenarioSpec& s, int quarter_turns) {
  const double alpha = std::asin(s.arm_offset / s.ring_radius);
  return s.ring_radius * (quarter_turns * std::numbers::pi / 2.0 + 2.0 * alpha);
}

inline Vehicle make_vehicle(int id, std::size_t route, double s, double speed) {
  Vehicle v;
  v.id = id;
  v.route = route;
  v.s = s;
  v.speed = speed;
  return v;
}

inline void make_random_iv(Vehicle& v, const ScenarioSpec& spec, std::uint64_t seed) {
  v.controller = Controller::RandomIv;
  v.desired_speed = spec.iv_desired_speed;
  v.v_min = spec.iv_v_min;
  v.v_max = spec.iv_v_max;
  v.command = Action::Idle;
  v.rng = CounterRng(stream_key(seed, kVehicleStream, static_cast<std::uint64_t>(v.id)));
}

inline void make_ego(Vehicle& v, const ScenarioSpec& spec) {
  v.controller = Controller::Ego;
  v.desired_speed = spec.ego_desired_speed;
  v.v_max = spec.ego_v_max;
  v.command = Action::Idle;
}

inline World build_roundabout(const ScenarioSpec& spec, CounterRng& rng, std::uint64_t seed) {
  constexpr double kSouth = -std::numbers::pi / 2.0;
  constexpr double kEast = 0.0;
  constexpr double kWest = std::numbers::pi;
  auto routes = std::make_shared<std::vector<Route>>();
  routes->push_back(roundabout_route(spec, kSouth, 2));
  routes->push_back(roundabout_route(spec, kEast, 2));
  if (spec.kind == ScenarioKind::RoundaboutThreeP) routes->push_back(roundabout_route(spec, kWest, 2));

  World w;
  w.kind = spec.kind;
  w.params = spec.sim;
  Vehicle ego = make_vehicle(0, 0, spec.approach_length - spec.ego_position.sample(rng),
                             spec.ego_speed.sample(rng));
  make_ego(ego, spec);
  ego.goal_s = spec.approach_length + ring_arc_length(spec, 2) + spec.exit_length / 2.0;
  w.vehicles.push_back(ego);
  for (std::size_t k = 0; k < spec.iv_positions.size(); ++k) {
    Vehicle iv = make_vehicle(static_cast<int>(k + 1), k + 1,
                              spec.approach_length - spec.iv_positions[k].sample(rng),
                              spec.iv_speed.sample(rng));
    make_random_iv(iv, spec, seed);
    iv.goal_s = spec.approach_length + ring_arc_length(spec, 2) + spec.exit_length / 2.0;
    w.vehicles.push_back(iv);
    w.interacting.push_back(k + 1);
  }
  w.routes = std::move(routes);
  return w;
}

inline World build_merging(const ScenarioSpec& spec, CounterRng& rng, std::uint64_t seed) {
  auto routes = std::make_shared<std::vector<Route>>();
  routes->push_back(Route{Path::line({0.0, 0.0}, 0.0, spec.road_length), 2, spec.lane_width,
                          {std::numeric_limits<double>::infinity(), spec.merge_lane_length}});
  World w;
  w.kind = spec.kind;
  w.params = spec.sim;
  Vehicle ego = make_vehicle(0, 0, spec.ego_position.sample(rng), spec.ego_speed.sample(rng));
  make_ego(ego, spec);
  ego.lane = 1;
  ego.goal = GoalKind::MergeLeft;
  w.vehicles.push_back(ego);
  for (std::size_t k = 0; k < spec.iv_positions.size(); ++k) {
    Vehicle iv = make_vehicle(static_cast<int>(k + 1), 0, ego.s + spec.iv_positions[k].sample(rng),
                              spec.iv_speed.sample(rng));
    make_random_iv(iv, spec, seed);
    iv.lane = 0;
    w.vehicles.push_back(iv);
    w.interacting.push_back(k + 1);
  }
  w.routes = std::move(routes);
  return w;
}

inline World build_highway(const ScenarioSpec& spec, CounterRng& rng) {
  auto routes = std::make_shared<std::vector<Route>>();
  routes->push_back(
      Route{Path::line({0.0, 0.0}, 0.0, spec.road_length), spec.lane_count, spec.lane_width, {}});
  World w;
  w.kind = spec.kind;
  w.params = spec.sim;
  Vehicle ego = make_vehicle(0, 0, spec.ego_position.sample(rng), spec.ego_speed.sample(rng));
  make_ego(ego, spec);
  ego.lane = static_cast<int>(rng.index(static_cast<std::size_t>(spec.lane_count)));
  ego.idm_longitudinal = true;
  ego.goal_s = spec.goal_distance;
  w.vehicles.push_back(ego);
  for (int k = 0; k < spec.background_vehicles; ++k) {
    Vehicle ov = make_vehicle(k + 1, 0, spec.ov_position.sample(rng), spec.ov_speed.sample(rng));
    ov.lane = static_cast<int>(rng.index(static_cast<std::size_t>(spec.lane_count)));
    ov.controller = Controller::IdmMobil;
    ov.desired_speed = spec.ov_desired_speed.sample(rng);
    ov.v_max = 40.0;
    w.vehicles.push_back(ov);
  }
  w.routes = std::move(routes);
  return w;
}

// Rejects overlapping starts and, on shared multi-lane roads, same-lane
// gaps below the minimum.
inline bool placement_feasible(const World& w, const ScenarioSpec& spec) {
  for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
    for (std::size_t j = i + 1; j < w.vehicles.size(); ++j) {
      const Vehicle& a = w.vehicles[i];
      const Vehicle& b = w.vehicles[j];
      if (overlaps(footprint(w, a), footprint(w, b))) return false;
      if (a.route == b.route && a.lane == b.lane && w.route_of(a).lane_count > 1) {
        const double gap = std::abs(a.s - b.s) - (a.length + b.length) / 2.0;
        if (gap < spec.min_initial_gap) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

inline constexpr int kMaxPlacementAttempts = 100;

/// Deterministic in (spec, seed). Resamples infeasible placements up to 100
/// times before giving up.
inline World init_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  validate(spec);
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    CounterRng rng(stream_key(seed, kInitStream, static_cast<std::uint64_t>(attempt)));
    World w;
    switch (spec.kind) {
      case ScenarioKind::RoundaboutTwoP:
      case ScenarioKind::RoundaboutThreeP: w = detail::build_roundabout(spec, rng, seed); break;
      case ScenarioKind::MergingTwoP:
      case ScenarioKind::MergingThreeP: w = detail::build_merging(spec, rng, seed); break;
      case ScenarioKind::Highway: w = detail::build_highway(spec, rng); break;
    }
    if (detail::placement_feasible(w, spec)) return w;
  }
  throw std::runtime_error("init_scenario: no feasible placement for " +
                           std::string(to_string(spec.kind)) + " with seed " +
                           std::to_string(seed) + " after " +
                           std::to_string(kMaxPlacementAttempts) + " attempts");
}

/// Players, their (masked) action sets and the ego's safe action for the
/// game at the current decision step.
struct GameSetup {
  std::vector<std::size_t> players;
  std::vector<std::vector<Action>> action_sets;
  std::size_t ego_safe_action = 0;
};

inline const std::vector<Action>& random_iv_actions() {
  static const std::vector<Action> actions = {Action::Accelerate, Action::Decelerate};
  return actions;
}

/// The vehicle closest to the ego by Euclidean distance; ties to lower id.
inline std::size_t closest_to_ego(const World& w) {
  const Vec2 ego = pose_of(w, w.ego_vehicle()).position;
  std::size_t best = w.ego;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < w.vehicles.size(); ++j) {
    if (j == w.ego) continue;
    const double d = norm(pose_of(w, w.vehicles[j]).position - ego);
    if (d < best_d || (d == best_d && w.vehicles[j].id < w.vehicles[best].id)) {
      best_d = d;
      best = j;
    }
  }
  if (best == w.ego) throw std::logic_error("closest_to_ego: no other vehicle");
  return best;
}

inline GameSetup game_setup(const World& w) {
  GameSetup g;
  g.players.push_back(w.ego);
  if (w.kind == ScenarioKind::Highway) {
    // Keeping the lane is always available, so it takes index 0 and the
    // feasible lane changes follow. Index 0 is where the quantum presets put
    // the ego's mass, and the default should be the one that needs no gap.
    std::vector<Action> ego_actions{Action::Idle};
    const int lane = w.ego_vehicle().lane;
    if (lane_change_possible(w, w.ego, lane - 1)) ego_actions.push_back(Action::ChangeLaneLeft);
    if (lane_change_possible(w, w.ego, lane + 1)) ego_actions.push_back(Action::ChangeLaneRight);
    g.ego_safe_action = 0;
    g.action_sets.push_back(std::move(ego_actions));
    if (w.vehicles.size() < 2) return g;
    g.players.push_back(closest_to_ego(w));
    g.action_sets.push_back({Action::Accelerate, Action::Decelerate, Action::Idle});
    return g;
  }
  if (is_merging(w.kind)) {
    g.action_sets.push_back({Action::Merge, Action::Decelerate});
  } else {
    g.action_sets.push_back({Action::Accelerate, Action::Decelerate});
  }
  g.ego_safe_action = 1;
  for (std::size_t iv : w.interacting) {
    g.players.push_back(iv);
    g.action_sets.push_back(random_iv_actions());
  }
  return g;
}

}  // namespace qgdm::sim
