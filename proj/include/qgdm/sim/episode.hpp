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

// Closed-loop episodes and batch metrics.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgdm/policies.hpp"
#include "qgdm/sim/scenario.hpp"
#include "qgdm/sim/world.hpp"

namespace qgdm::sim {

enum class Outcome { Success, Collision, Stuck, Timeout };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::Collision: return "collision";
    case Outcome::Stuck: return "stuck";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

/// Headway is capped at this sensor range when nobody is ahead.
inline constexpr double kSensorRange = 100.0;

struct EgoState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double s = 0.0;
  double speed = 0.0;
  double accel = 0.0;
  int lane = 0;

  friend bool operator==(const EgoState&, const EgoState&) = default;
};

struct DecisionRecord {
  double time = 0.0;
  Action action = Action::Idle;
  policy::DecisionStep step = policy::DecisionStep::RuleBased;
  std::vector<int> players;  ///< vehicle ids, ego first
  std::vector<std::vector<std::string>> action_sets;
  std::vector<std::vector<double>> payoffs;  ///< [player][profile]
  std::vector<double> distribution;          ///< step-3 distribution, if any
  std::vector<double> expected_utility;
  EgoState ego;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

/// Per-episode sums; merged associatively into AggregateMetrics.
struct EpisodeStats {
  std::size_t ego_steps = 0;
  double speed_sum = 0.0;
  double accel_sum = 0.0;  ///< of |a|
  std::size_t headway_steps = 0;
  double headway_sum = 0.0;
  std::size_t n_cll = 0;
  std::size_t n_clr = 0;
  std::size_t n_kl = 0;
  std::size_t decisions = 0;
  double latency_sum_ms = 0.0;
  double latency_max_ms = 0.0;

  friend bool operator==(const EpisodeStats&, const EpisodeStats&) = default;
};

struct EpisodeResult {
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Timeout;
  double duration = 0.0;
  std::optional<int> collided_with;  ///< id of the other vehicle
  EgoState final_ego;
  std::vector<DecisionRecord> trace;
  EpisodeStats stats;

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

struct EpisodeOptions {
  bool record_trace = false;
  bool measure_latency = true;
};

inline EgoState ego_state(const World& w) {
  const Vehicle& e = w.ego_vehicle();
  const Pose p = pose_of(w, e);
  return {p.position.x, p.position.y, p.heading, e.s, e.speed, e.accel, e.lane};
}

/// Bumper gap to the vehicle ahead in the ego's lane, capped at the sensor
/// range. The end of a lane is not a vehicle.
inline double headway(const World& w) {
  const Vehicle& e = w.ego_vehicle();
  double best = kSensorRange;
  for (std::size_t j = 0; j < w.vehicles.size(); ++j) {
    if (j == w.ego) continue;
    const Vehicle& o = w.vehicles[j];
    if (o.route != e.route || !occupies_lane(o, e.lane) || o.s <= e.s) continue;
    best = std::min(best, std::max(0.0, o.s - e.s - (o.length + e.length) / 2.0));
  }
  return best;
}

namespace detail {

inline bool goal_reached(const World& w) {
  const Vehicle& e = w.ego_vehicle();
  if (e.goal == GoalKind::MergeLeft) return e.lane == 0 && !e.lane_change;
  return e.s >= e.goal_s;
}

inline bool at_merge_lane_end(const World& w) {
  const Vehicle& e = w.ego_vehicle();
  if (e.goal != GoalKind::MergeLeft || e.lane_change || e.lane == 0) return false;
  return e.s + e.length / 2.0 >= w.route_of(e).end_of_lane(e.lane);
}

inline DecisionRecord make_record(const World& w, const policy::Decision& d) {
  DecisionRecord r;
  r.time = w.time;
  r.action = d.action;
  r.step = d.step;
  for (std::size_t i : d.players) r.players.push_back(w.vehicles[i].id);
  if (d.game) {
    for (std::size_t p = 0; p < d.game->n_players(); ++p) {
      r.action_sets.push_back(d.game->action_labels(p));
      auto& row = r.payoffs.emplace_back();
      for (std::size_t k = 0; k < d.game->num_profiles(); ++k) row.push_back(d.game->utility(p, k));
    }
  }
  if (d.distribution) {
    for (std::size_t k = 0; k < d.distribution->space().size(); ++k) {
      r.distribution.push_back((*d.distribution)[k]);
    }
  }
  r.expected_utility = d.expected_utility;
  r.ego = ego_state(w);
  return r;
}

}  // namespace detail

/// One closed-loop run. Every decision period the ego policy runs on the
/// current scene and its action is held; random IVs redraw, background
/// traffic runs MOBIL. Physics advances at dt. Ends on an ego collision,
/// goal completion, being stuck, or the timeout.
using Decider = std::function<policy::Decision(const World&)>;

/// The episode loop on a prepared world; `spec` supplies timing and the
/// stuck rule. Scripted tests pass their own world and decider.
inline EpisodeResult simulate(World w, const ScenarioSpec& spec, std::uint64_t seed,
                              const Decider& decide, const EpisodeOptions& opt = {}) {
  EpisodeResult res;
  res.seed = seed;
  const std::size_t period = decision_interval_steps(spec);
  const auto max_steps = static_cast<std::size_t>(std::llround(spec.timeout / spec.sim.dt));
  double anchor_s = w.ego_vehicle().s;
  double anchor_t = 0.0;
  std::optional<Outcome> outcome;

  for (std::size_t k = 0; k < max_steps && !outcome; ++k) {
    if (k % period == 0) {
      // Ego first, on the scene as everyone else sees it.
      const bool mid_change = w.ego_vehicle().lane_change.has_value();
      if (!mid_change) {
        const auto t0 = std::chrono::steady_clock::now();
        const policy::Decision d = decide(w);
        const auto t1 = std::chrono::steady_clock::now();
        if (opt.measure_latency) {
          const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
          res.stats.latency_sum_ms += ms;
          res.stats.latency_max_ms = std::max(res.stats.latency_max_ms, ms);
        }
        ++res.stats.decisions;
        if (w.kind == ScenarioKind::Highway) {
          if (d.action == Action::ChangeLaneLeft) ++res.stats.n_cll;
          else if (d.action == Action::ChangeLaneRight) ++res.stats.n_clr;
          else ++res.stats.n_kl;
        }
        if (opt.record_trace) res.trace.push_back(detail::make_record(w, d));
        apply_command(w, w.ego, d.action);
      }
      for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
        Vehicle& v = w.vehicles[i];
        if (v.controller == Controller::RandomIv) {
          v.command = random_iv_action(v.rng, random_iv_actions());
        }
      }
      // MOBIL decisions all see the same pre-decision scene.
      const World before = w;
      for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
        if (w.vehicles[i].controller != Controller::IdmMobil) continue;
        if (auto dir = mobil_decide(before, i)) {
          begin_lane_change(w, i, w.vehicles[i].lane + *dir);
        }
      }
    }

    advance(w, spec.sim.dt);

    const Vehicle& e = w.ego_vehicle();
    ++res.stats.ego_steps;
    res.stats.speed_sum += e.speed;
    res.stats.accel_sum += std::abs(e.accel);
    if (w.kind == ScenarioKind::Highway) {
      ++res.stats.headway_steps;
      res.stats.headway_sum += headway(w);
    }

    if (const auto other = ego_collision(w)) {
      outcome = Outcome::Collision;
      res.collided_with = w.vehicles[*other].id;
    } else if (detail::goal_reached(w)) {
      outcome = Outcome::Success;
    } else if (detail::at_merge_lane_end(w)) {
      outcome = Outcome::Stuck;
    } else {
      if (e.s - anchor_s >= spec.stuck_distance) {
        anchor_s = e.s;
        anchor_t = w.time;
      } else if (w.time - anchor_t >= spec.stuck_window - 1e-9) {
        outcome = Outcome::Stuck;
      }
    }
  }
  if (!outcome) {
    // Still in the merge lane at the timeout: never merged.
    const Vehicle& e = w.ego_vehicle();
    outcome = (e.goal == GoalKind::MergeLeft && e.lane != 0) ? Outcome::Stuck : Outcome::Timeout;
  }
  res.outcome = *outcome;
  res.duration = w.time;
  res.final_ego = ego_state(w);
  return res;
}

inline EpisodeResult run_episode(const policy::PolicyConfig& pol, const ScenarioSpec& spec,
                                 std::uint64_t seed, const EpisodeOptions& opt = {}) {
  World w = init_scenario(spec, seed);
  if (pol.kind == policy::PolicyKind::Rule) w.vehicles[w.ego].idm_longitudinal = true;
  return simulate(std::move(w), spec, seed,
                  [&pol](const World& scene) { return policy::decide(pol, scene); }, opt);
}

struct AggregateMetrics {
  std::size_t episodes = 0;
  std::size_t n_col = 0;
  std::size_t n_success = 0;
  std::size_t n_stuck = 0;
  std::size_t n_timeout = 0;
  double duration_sum = 0.0;
  EpisodeStats stats;

  double cr_pct() const { return pct(n_col); }
  double sr_pct() const { return pct(n_success); }
  double stuck_pct() const { return pct(n_stuck); }
  double timeout_pct() const { return pct(n_timeout); }
  double hd() const { return ratio(stats.headway_sum, stats.headway_steps); }
  double v_mean() const { return ratio(stats.speed_sum, stats.ego_steps); }
  double a_mean() const { return ratio(stats.accel_sum, stats.ego_steps); }
  double t_mean() const { return ratio(duration_sum, episodes); }
  double rho_cll() const { return maneuver_pct(stats.n_cll); }
  double rho_clr() const { return maneuver_pct(stats.n_clr); }
  double rho_kl() const { return maneuver_pct(stats.n_kl); }
  double latency_mean_ms() const { return ratio(stats.latency_sum_ms, stats.decisions); }
  double latency_max_ms() const { return stats.latency_max_ms; }

  void add(const EpisodeResult& r) {
    AggregateMetrics one;
    one.episodes = 1;
    one.n_col = r.outcome == Outcome::Collision;
    one.n_success = r.outcome == Outcome::Success;
    one.n_stuck = r.outcome == Outcome::Stuck;
    one.n_timeout = r.outcome == Outcome::Timeout;
    one.duration_sum = r.duration;
    one.stats = r.stats;
    merge(one);
  }

  void merge(const AggregateMetrics& o) {
    episodes += o.episodes;
    n_col += o.n_col;
    n_success += o.n_success;
    n_stuck += o.n_stuck;
    n_timeout += o.n_timeout;
    duration_sum += o.duration_sum;
    stats.ego_steps += o.stats.ego_steps;
    stats.speed_sum += o.stats.speed_sum;
    stats.accel_sum += o.stats.accel_sum;
    stats.headway_steps += o.stats.headway_steps;
    stats.headway_sum += o.stats.headway_sum;
    stats.n_cll += o.stats.n_cll;
    stats.n_clr += o.stats.n_clr;
    stats.n_kl += o.stats.n_kl;
    stats.decisions += o.stats.decisions;
    stats.latency_sum_ms += o.stats.latency_sum_ms;
    stats.latency_max_ms = std::max(stats.latency_max_ms, o.stats.latency_max_ms);
  }

 private:
  static double ratio(double num, std::size_t den) {
    return den == 0 ? 0.0 : num / static_cast<double>(den);
  }
  double pct(std::size_t n) const { return 100.0 * ratio(static_cast<double>(n), episodes); }
  double maneuver_pct(std::size_t n) const {
    const std::size_t total = stats.n_cll + stats.n_clr + stats.n_kl;
    return 100.0 * ratio(static_cast<double>(n), total);
  }
};

/// Metrics over a non-empty batch, merged in list order.
inline AggregateMetrics compute_metrics(std::span<const EpisodeResult> results) {
  if (results.empty()) throw std::invalid_argument("compute_metrics: empty result list");
  AggregateMetrics m;
  for (const auto& r : results) m.add(r);
  return m;
}

}  // namespace qgdm::sim
