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

// Classical solution concepts over a NormalFormGame: strict dominance, pure
// Nash enumeration, expected utility and argmax action selection.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qgdm/game/normal_form_game.hpp"

namespace qgdm::game {

/// Returns a* if it beats every other action of `player` against every
/// opponent profile.
inline std::optional<std::size_t> find_strictly_dominant(const NormalFormGame& g,
                                                         std::size_t player) {
  if (player >= g.n_players()) throw std::out_of_range("find_strictly_dominant: bad player");
  const auto& space = g.space();
  const std::size_t n_actions = g.num_actions(player);
  if (n_actions == 1) return 0;
  for (std::size_t candidate = 0; candidate < n_actions; ++candidate) {
    bool dominant = true;
    for (std::size_t k = 0; k < space.size() && dominant; ++k) {
      if (space.action_in(k, player) != candidate) continue;
      const double u_star = g.utility(player, k);
      for (std::size_t alt = 0; alt < n_actions; ++alt) {
        if (alt == candidate) continue;
        if (!(u_star > g.utility(player, space.with_action(k, player, alt)))) {
          dominant = false;
          break;
        }
      }
    }
    if (dominant) return candidate;
  }
  return std::nullopt;
}

inline bool is_pure_nash(const NormalFormGame& g, std::size_t profile_index) {
  const auto& space = g.space();
  for (std::size_t p = 0; p < g.n_players(); ++p) {
    const double u = g.utility(p, profile_index);
    for (std::size_t alt = 0; alt < g.num_actions(p); ++alt) {
      if (g.utility(p, space.with_action(profile_index, p, alt)) > u) return false;
    }
  }
  return true;
}

/// All pure Nash equilibria in lexicographic profile order.
inline std::vector<ActionProfile> find_pure_nash(const NormalFormGame& g) {
  std::vector<ActionProfile> out;
  for (std::size_t k = 0; k < g.num_profiles(); ++k) {
    if (is_pure_nash(g, k)) out.push_back(g.space().profile_at(k));
  }
  return out;
}

/// How joint probabilities enter the expected-utility sum.
enum class EuWeighting {
  Joint,        ///< sum_{a_-i} p(a_i, a_-i) u_i(a_i, a_-i), as printed.
  Conditional,  ///< same sum divided by the marginal p(a_i), when positive.
};

inline std::vector<double> expected_utilities(const NormalFormGame& g, std::size_t player,
                                              const JointDistribution& dist,
                                              EuWeighting weighting = EuWeighting::Joint) {
  if (!(dist.space() == g.space())) {
    throw std::invalid_argument("expected_utilities: distribution shape does not match game");
  }
  const auto& space = g.space();
  std::vector<double> eu(g.num_actions(player), 0.0);
  std::vector<double> mass(g.num_actions(player), 0.0);
  for (std::size_t k = 0; k < space.size(); ++k) {
    const std::size_t a = space.action_in(k, player);
    eu[a] += dist[k] * g.utility(player, k);
    mass[a] += dist[k];
  }
  if (weighting == EuWeighting::Conditional) {
    for (std::size_t a = 0; a < eu.size(); ++a) {
      if (mass[a] > 0.0) eu[a] /= mass[a];
    }
  }
  return eu;
}

struct TieBreak {
  /// Action preferred among exact ties; lowest index otherwise.
  std::optional<std::size_t> safe_action;
};

inline std::size_t select_action(std::span<const double> eu, TieBreak tie = {}) {
  if (eu.empty()) throw std::invalid_argument("select_action: empty expected-utility array");
  std::size_t best = 0;
  for (std::size_t a = 1; a < eu.size(); ++a) {
    if (eu[a] > eu[best]) best = a;
  }
  if (tie.safe_action && *tie.safe_action < eu.size() && eu[*tie.safe_action] == eu[best]) {
    return *tie.safe_action;
  }
  return best;
}

}  // namespace qgdm::game
