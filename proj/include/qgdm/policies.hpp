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

// Decision pipeline and baselines.
//
// Game policies solve the scene's game in three steps: (1) a strictly
// dominant ego action is taken if one exists; (2) otherwise, if exactly one
// pure Nash equilibrium exists, its ego action is taken; (3) otherwise a
// probability provider supplies a joint distribution and the ego maximizes
// expected utility. Policies differ only in the provider of step 3.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgdm/game/distributions.hpp"
#include "qgdm/game/normal_form_game.hpp"
#include "qgdm/game/solvers.hpp"
#include "qgdm/log.hpp"
#include "qgdm/payoff.hpp"
#include "qgdm/quantum/circuits.hpp"
#include "qgdm/sim/scenario.hpp"
#include "qgdm/sim/world.hpp"

namespace qgdm::policy {

using sim::Action;

enum class PolicyKind { Rule, Utility, CgEpd, CgMs, CgNe, QgdmU, QgdmG };

inline constexpr PolicyKind kAllPolicies[] = {PolicyKind::Rule,  PolicyKind::Utility,
                                              PolicyKind::CgEpd, PolicyKind::CgMs,
                                              PolicyKind::CgNe,  PolicyKind::QgdmU,
                                              PolicyKind::QgdmG};

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Rule: return "rule";
    case PolicyKind::Utility: return "utility";
    case PolicyKind::CgEpd: return "cg-epd";
    case PolicyKind::CgMs: return "cg-ms";
    case PolicyKind::CgNe: return "cg-ne";
    case PolicyKind::QgdmU: return "qgdm-u";
    case PolicyKind::QgdmG: return "qgdm-g";
  }
  return "?";
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
  for (PolicyKind k : kAllPolicies) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline bool is_game_policy(PolicyKind k) {
  return k != PolicyKind::Rule && k != PolicyKind::Utility;
}

enum class ProviderKind { Epd, MixedStrategy, NashUniform, QuantumUnitary, QuantumGate };

/// Step-3 probability source. Quantum providers use the preset for the
/// game's circuit unless an override for that circuit is given.
struct ProbabilityProvider {
  ProviderKind kind = ProviderKind::Epd;
  std::map<quantum::CircuitKind, quantum::QuantumGameConfig> overrides;
};

inline quantum::QuantumGameConfig quantum_config(const ProbabilityProvider& provider,
                                                 quantum::CircuitKind circuit) {
  if (auto it = provider.overrides.find(circuit); it != provider.overrides.end()) {
    return it->second;
  }
  const auto model = provider.kind == ProviderKind::QuantumUnitary ? quantum::QuantumModel::Unitary
                                                                   : quantum::QuantumModel::Gate;
  return quantum::preset(model, circuit);
}

inline game::JointDistribution provide_unchecked(const ProbabilityProvider& provider,
                                                 const game::NormalFormGame& g) {
  switch (provider.kind) {
    case ProviderKind::Epd: return game::epd_distribution(g);
    case ProviderKind::MixedStrategy: return game::mixed_strategy_distribution(g);
    case ProviderKind::NashUniform: return game::nash_distribution(g);
    case ProviderKind::QuantumUnitary:
    case ProviderKind::QuantumGate: {
      std::vector<std::size_t> counts(g.space().action_counts().begin(),
                                      g.space().action_counts().end());
      const auto circuit = quantum::circuit_for(counts);
      const auto cfg = quantum_config(provider, circuit);
      if (cfg.circuit != circuit) {
        throw std::invalid_argument("quantum override circuit does not match the game");
      }
      return quantum::profile_probabilities(quantum::evaluate_circuit(cfg), circuit, counts);
    }
  }
  throw std::logic_error("provide: unknown provider");
}

/// Provider output for `g`; any failure falls back to EPD with a warning.
inline game::JointDistribution provide(const ProbabilityProvider& provider,
                                       const game::NormalFormGame& g) {
  try {
    auto dist = provide_unchecked(provider, g);
    if (!(dist.space() == g.space())) throw std::logic_error("provider returned wrong shape");
    return dist;
  } catch (const std::exception& e) {
    warn(std::string("probability provider failed, using EPD: ") + e.what());
    return game::epd_distribution(g);
  }
}

enum class DecisionStep { StrictlyDominant, UniqueNash, ExpectedUtility, RuleBased, UtilityBased };

inline std::string_view to_string(DecisionStep s) {
  switch (s) {
    case DecisionStep::StrictlyDominant: return "sds";
    case DecisionStep::UniqueNash: return "unique-ne";
    case DecisionStep::ExpectedUtility: return "expected-utility";
    case DecisionStep::RuleBased: return "rule";
    case DecisionStep::UtilityBased: return "utility";
  }
  return "?";
}

struct PipelineResult {
  std::size_t action = 0;
  DecisionStep step = DecisionStep::ExpectedUtility;
  std::optional<game::JointDistribution> distribution;
  std::vector<double> expected_utility;
};

/// Steps 1-3 for the player at index 0 (the ego).
inline PipelineResult solve_pipeline(const game::NormalFormGame& g,
                                     const ProbabilityProvider& provider, game::TieBreak tie,
                                     game::EuWeighting weighting = game::EuWeighting::Joint) {
  PipelineResult r;
  if (auto sds = game::find_strictly_dominant(g, 0)) {
    r.action = *sds;
    r.step = DecisionStep::StrictlyDominant;
    return r;
  }
  const auto equilibria = game::find_pure_nash(g);
  if (equilibria.size() == 1) {
    r.action = equilibria.front()[0];
    r.step = DecisionStep::UniqueNash;
    return r;
  }
  r.distribution = provide(provider, g);
  r.expected_utility = game::expected_utilities(g, 0, *r.distribution, weighting);
  r.action = game::select_action(r.expected_utility, tie);
  r.step = DecisionStep::ExpectedUtility;
  return r;
}

inline ProbabilityProvider provider_for(PolicyKind k) {
  switch (k) {
    case PolicyKind::CgEpd: return {ProviderKind::Epd, {}};
    case PolicyKind::CgMs: return {ProviderKind::MixedStrategy, {}};
    case PolicyKind::CgNe: return {ProviderKind::NashUniform, {}};
    case PolicyKind::QgdmU: return {ProviderKind::QuantumUnitary, {}};
    case PolicyKind::QgdmG: return {ProviderKind::QuantumGate, {}};
    default: throw std::invalid_argument("provider_for: not a game policy");
  }
}

struct PolicyConfig {
  PolicyKind kind = PolicyKind::QgdmG;
  payoff::PayoffWeights payoff;
  /// Weights of the utility-based baseline (safety-heavy by default).
  payoff::PayoffWeights utility_payoff{0.7, 0.1, 0.2};
  game::EuWeighting eu_weighting = game::EuWeighting::Joint;
  /// Per-circuit quantum parameter overrides for qgdm-u / qgdm-g.
  std::map<quantum::CircuitKind, quantum::QuantumGameConfig> quantum_overrides;
};

struct Decision {
  Action action = Action::Idle;
  DecisionStep step = DecisionStep::RuleBased;
  std::vector<std::size_t> players;
  std::optional<game::NormalFormGame> game;
  std::optional<game::JointDistribution> distribution;
  std::vector<double> expected_utility;
};

/// Argmax of the ego's own payoff over its actions with every other vehicle
/// keeping its current behavior; ties go to the safe action.
inline std::size_t utility_based_choice(const sim::World& w, const sim::GameSetup& setup,
                                        const payoff::PayoffWeights& weights,
                                        std::vector<double>* scores = nullptr) {
  const auto& ego_actions = setup.action_sets.front();
  std::vector<double> values;
  for (Action a : ego_actions) {
    const std::size_t who[1] = {w.ego};
    const Action what[1] = {a};
    const auto traj = payoff::rollout_profile(w, who, what, weights.horizon);
    values.push_back(payoff::score_profile(traj, w.ego, weights));
  }
  if (scores) *scores = values;
  return game::select_action(values, {setup.ego_safe_action});
}

inline Action utility_based_decide(const sim::World& w, const payoff::PayoffWeights& weights) {
  const auto setup = sim::game_setup(w);
  return setup.action_sets.front()[utility_based_choice(w, setup, weights)];
}

/// IDM longitudinal control is part of the vehicle mode; laterally the ego
/// follows MOBIL wherever there are lanes to change into.
inline Action rule_based_decide(const sim::World& w) {
  if (sim::is_roundabout(w.kind)) return Action::Idle;
  const auto dir = sim::mobil_decide(w, w.ego);
  if (!dir) return Action::Idle;
  if (sim::is_merging(w.kind)) return *dir < 0 ? Action::Merge : Action::Idle;
  return *dir < 0 ? Action::ChangeLaneLeft : Action::ChangeLaneRight;
}

inline Decision decide(const PolicyConfig& cfg, const sim::World& w) {
  Decision d;
  if (cfg.kind == PolicyKind::Rule) {
    d.action = rule_based_decide(w);
    d.step = DecisionStep::RuleBased;
    d.players = {w.ego};
    return d;
  }
  const auto setup = sim::game_setup(w);
  d.players = setup.players;
  // Nobody to play against: a one-player choice on the same payoff.
  if (setup.players.size() < 2) {
    const auto& weights = cfg.kind == PolicyKind::Utility ? cfg.utility_payoff : cfg.payoff;
    d.action = setup.action_sets.front()[utility_based_choice(w, setup, weights,
                                                              &d.expected_utility)];
    d.step = DecisionStep::UtilityBased;
    return d;
  }
  if (cfg.kind == PolicyKind::Utility) {
    d.action = setup.action_sets.front()[utility_based_choice(w, setup, cfg.utility_payoff,
                                                              &d.expected_utility)];
    d.step = DecisionStep::UtilityBased;
    return d;
  }
  auto provider = provider_for(cfg.kind);
  if (cfg.kind == PolicyKind::QgdmU || cfg.kind == PolicyKind::QgdmG) {
    provider.overrides = cfg.quantum_overrides;
  }
  d.game = payoff::build_game(w, setup, cfg.payoff);
  auto r = solve_pipeline(*d.game, provider, {setup.ego_safe_action}, cfg.eu_weighting);
  d.action = setup.action_sets.front()[r.action];
  d.step = r.step;
  d.distribution = std::move(r.distribution);
  d.expected_utility = std::move(r.expected_utility);
  return d;
}

}  // namespace qgdm::policy
