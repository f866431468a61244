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

// Experiment configuration, read from JSON.
//
// Top-level keys (all optional except scenarios and policies):
//   scenarios        list of scenario names (roundabout-2p, roundabout-3p,
//                    merging-2p, merging-3p, highway)
//   policies         list of policy names (rule, utility, cg-epd, cg-ms,
//                    cg-ne, qgdm-u, qgdm-g)
//   episodes         episodes per (scenario, policy); default 2000, 200 for
//                    highway
//   seed, out, format ("csv" | "json"), threads (0 = hardware),
//   trace, measure_latency, eu_weighting ("joint" | "conditional")
//   payoff, utility_payoff   PayoffWeights fields
//   idm, mobil, actions      driver-model and action-magnitude fields
//   dt, decision_period
//   quantum          { "qgdm-u" | "qgdm-g": { "2p2s" | "3p2s" | "2p3s": {
//                      "gamma": g, "operators": [ {"theta": t} | {"gate": "H"} ],
//                      "initial": {"basis": k} | {"phases": [...]} } } }
//   scenario_overrides  { name: { ScenarioSpec fields, "episodes": n } }

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qgdm/policies.hpp"
#include "qgdm/quantum/circuits.hpp"
#include "qgdm/sim/scenario.hpp"

namespace qgdm::harness {

using nlohmann::json;

enum class ReportFormat { Csv, Json };

struct ScenarioEntry {
  sim::ScenarioSpec spec;
  std::size_t episodes = 0;
};

struct ExperimentConfig {
  std::vector<ScenarioEntry> scenarios;
  std::vector<policy::PolicyConfig> policies;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  ReportFormat format = ReportFormat::Csv;
  unsigned threads = 0;
  bool trace = false;
  bool measure_latency = true;
};

inline std::size_t default_episodes(sim::ScenarioKind k) {
  return k == sim::ScenarioKind::Highway ? 200 : 2000;
}

inline unsigned effective_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      fail(std::string("bad value for '") + key + "': " + e.what());
    }
  }
}

inline void read_range(const json& j, const char* key, sim::Range& out) {
  if (auto it = j.find(key); it != j.end()) {
    if (!it->is_array() || it->size() != 2) fail(std::string("'") + key + "' must be [lo, hi]");
    out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
}

inline void read_weights(const json& j, payoff::PayoffWeights& w) {
  read(j, "safety", w.safety);
  read(j, "comfort", w.comfort);
  read(j, "efficiency", w.efficiency);
  read(j, "horizon", w.horizon);
  read(j, "ttc_floor", w.ttc_floor);
  read(j, "max_accel", w.max_accel);
  read(j, "progress_blend", w.progress_blend);
  read(j, "interaction_range", w.interaction_range);
  w.validate();
}

inline void read_sim(const json& j, sim::SimParams& p) {
  read(j, "dt", p.dt);
  if (auto it = j.find("idm"); it != j.end()) {
    read(*it, "desired_speed", p.idm.desired_speed);
    read(*it, "time_headway", p.idm.time_headway);
    read(*it, "min_gap", p.idm.min_gap);
    read(*it, "max_accel", p.idm.max_accel);
    read(*it, "comfort_decel", p.idm.comfort_decel);
    read(*it, "max_decel", p.idm.max_decel);
    read(*it, "exponent", p.idm.exponent);
  }
  if (auto it = j.find("mobil"); it != j.end()) {
    read(*it, "politeness", p.mobil.politeness);
    read(*it, "safe_decel", p.mobil.safe_decel);
    read(*it, "threshold", p.mobil.threshold);
  }
  if (auto it = j.find("actions"); it != j.end()) {
    read(*it, "accelerate", p.actions.accelerate);
    read(*it, "decelerate", p.actions.decelerate);
    read(*it, "lane_change_duration", p.actions.lane_change_duration);
  }
  read(j, "lookahead", p.lookahead);
}

inline void read_spec(const json& j, sim::ScenarioSpec& s) {
  read(j, "timeout", s.timeout);
  read(j, "decision_period", s.decision_period);
  read_sim(j, s.sim);
  read_range(j, "ego_speed", s.ego_speed);
  read_range(j, "ego_position", s.ego_position);
  read_range(j, "iv_speed", s.iv_speed);
  if (auto it = j.find("iv_positions"); it != j.end()) {
    s.iv_positions.clear();
    for (const auto& r : *it) {
      if (!r.is_array() || r.size() != 2) fail("iv_positions entries must be [lo, hi]");
      s.iv_positions.push_back({r[0].get<double>(), r[1].get<double>()});
    }
  }
  read(j, "ego_desired_speed", s.ego_desired_speed);
  read(j, "iv_desired_speed", s.iv_desired_speed);
  read(j, "ego_v_max", s.ego_v_max);
  read(j, "iv_v_min", s.iv_v_min);
  read(j, "iv_v_max", s.iv_v_max);
  read(j, "ring_radius", s.ring_radius);
  read(j, "approach_length", s.approach_length);
  read(j, "exit_length", s.exit_length);
  read(j, "arm_offset", s.arm_offset);
  read(j, "lane_count", s.lane_count);
  read(j, "lane_width", s.lane_width);
  read(j, "road_length", s.road_length);
  read(j, "merge_lane_length", s.merge_lane_length);
  read(j, "goal_distance", s.goal_distance);
  read(j, "background_vehicles", s.background_vehicles);
  read_range(j, "ov_position", s.ov_position);
  read_range(j, "ov_speed", s.ov_speed);
  read_range(j, "ov_desired_speed", s.ov_desired_speed);
  read(j, "min_initial_gap", s.min_initial_gap);
  read(j, "stuck_window", s.stuck_window);
  read(j, "stuck_distance", s.stuck_distance);
}

inline quantum::QuantumGameConfig read_quantum(const json& j, quantum::QuantumModel model,
                                               quantum::CircuitKind circuit) {
  quantum::QuantumGameConfig cfg = quantum::preset(model, circuit);
  cfg.circuit = circuit;
  read(j, "gamma", cfg.gamma);
  if (auto it = j.find("operators"); it != j.end()) {
    cfg.player_ops.clear();
    for (const auto& op : *it) {
      if (op.contains("theta")) {
        cfg.player_ops.emplace_back(quantum::UnitaryOp{op["theta"].get<double>()});
      } else if (op.contains("gate")) {
        const auto name = op["gate"].get<std::string>();
        const auto g = quantum::parse_gate_name(name);
        if (!g) fail("unknown gate '" + name + "'");
        cfg.player_ops.emplace_back(quantum::GateOp{*g});
      } else {
        fail("operator needs 'theta' or 'gate'");
      }
    }
  }
  if (auto it = j.find("initial"); it != j.end()) {
    if (it->contains("basis")) {
      cfg.initial = quantum::BasisState{(*it)["basis"].get<std::size_t>()};
    } else {
      quantum::EqualSuperposition e;
      read(*it, "phases", e.phases);
      cfg.initial = e;
    }
  }
  try {
    quantum::validate(cfg);
    quantum::build_initial_state(cfg.initial, quantum::n_qubits(circuit));
  } catch (const std::exception& e) {
    fail(std::string("quantum override for ") + std::string(quantum::to_string(circuit)) +
         ": " + e.what());
  }
  return cfg;
}

}  // namespace detail

/// Parses and validates a configuration document.
inline ExperimentConfig parse_config(const json& j) {
  using detail::fail;
  using detail::read;
  if (!j.is_object()) fail("top level must be an object");
  ExperimentConfig cfg;

  std::vector<std::string> scenario_names, policy_names;
  read(j, "scenarios", scenario_names);
  read(j, "policies", policy_names);
  if (scenario_names.empty()) fail("scenario list is empty");
  if (policy_names.empty()) fail("policy list is empty");

  std::optional<std::size_t> episodes;
  if (j.contains("episodes")) {
    const auto n = j["episodes"].get<long long>();
    if (n < 1) fail("episode count must be >= 1");
    episodes = static_cast<std::size_t>(n);
  }
  read(j, "seed", cfg.seed);
  read(j, "out", cfg.out_dir);
  std::string format = "csv";
  read(j, "format", format);
  if (format == "csv") cfg.format = ReportFormat::Csv;
  else if (format == "json") cfg.format = ReportFormat::Json;
  else fail("format must be csv or json");
  read(j, "threads", cfg.threads);
  read(j, "trace", cfg.trace);
  read(j, "measure_latency", cfg.measure_latency);

  policy::PolicyConfig base;
  if (auto it = j.find("payoff"); it != j.end()) detail::read_weights(*it, base.payoff);
  if (auto it = j.find("utility_payoff"); it != j.end()) {
    detail::read_weights(*it, base.utility_payoff);
  }
  std::string weighting = "joint";
  read(j, "eu_weighting", weighting);
  if (weighting == "joint") base.eu_weighting = game::EuWeighting::Joint;
  else if (weighting == "conditional") base.eu_weighting = game::EuWeighting::Conditional;
  else fail("eu_weighting must be joint or conditional");

  std::map<std::string, std::map<quantum::CircuitKind, quantum::QuantumGameConfig>> quantum;
  if (auto it = j.find("quantum"); it != j.end()) {
    for (const auto& [model, circuits] : it->items()) {
      if (model != "qgdm-u" && model != "qgdm-g") fail("quantum overrides apply to qgdm-u/qgdm-g");
      for (const auto& [cname, body] : circuits.items()) {
        const auto ck = quantum::parse_circuit_kind(cname);
        if (!ck) fail("unknown circuit '" + cname + "'");
        const auto qm = model == "qgdm-u" ? quantum::QuantumModel::Unitary
                                          : quantum::QuantumModel::Gate;
        quantum[model][*ck] = detail::read_quantum(body, qm, *ck);
      }
    }
  }

  for (const auto& name : policy_names) {
    const auto kind = policy::parse_policy_kind(name);
    if (!kind) fail("unknown policy '" + name + "'");
    policy::PolicyConfig p = base;
    p.kind = *kind;
    if (auto q = quantum.find(name); q != quantum.end()) p.quantum_overrides = q->second;
    cfg.policies.push_back(std::move(p));
  }

  const json overrides = j.value("scenario_overrides", json::object());
  for (const auto& name : scenario_names) {
    const auto kind = sim::parse_scenario_kind(name);
    if (!kind) fail("unknown scenario '" + name + "'");
    ScenarioEntry e{sim::default_spec(*kind), episodes.value_or(default_episodes(*kind))};
    detail::read_sim(j, e.spec.sim);
    read(j, "decision_period", e.spec.decision_period);
    if (auto it = overrides.find(name); it != overrides.end()) {
      detail::read_spec(*it, e.spec);
      if (it->contains("episodes")) {
        const auto n = (*it)["episodes"].get<long long>();
        if (n < 1) fail("episode count must be >= 1");
        e.episodes = static_cast<std::size_t>(n);
      }
    }
    try {
      sim::validate(e.spec);
    } catch (const std::exception& ex) {
      fail(ex.what());
    }
    cfg.scenarios.push_back(std::move(e));
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace qgdm::harness
