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

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgdm::game {

inline constexpr double kDistributionTolerance = 1e-9;

/// One action index per player, player 0 first.
using ActionProfile = std::vector<std::size_t>;

/// Shape of an action space: number of actions per player. Profiles are
/// enumerated lexicographically with player 0 as the most significant digit,
/// which is also the qubit order used by the quantum circuits.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<std::size_t> action_counts)
      : counts_(std::move(action_counts)) {
    if (counts_.empty()) throw std::invalid_argument("ProfileSpace: no players");
    strides_.assign(counts_.size(), 1);
    for (std::size_t p = counts_.size(); p-- > 0;) {
      if (counts_[p] == 0) throw std::invalid_argument("ProfileSpace: empty action set");
      strides_[p] = size_;
      size_ *= counts_[p];
    }
  }

  std::size_t n_players() const { return counts_.size(); }
  std::size_t num_actions(std::size_t player) const { return counts_.at(player); }
  std::span<const std::size_t> action_counts() const { return counts_; }
  std::size_t size() const { return size_; }

  std::size_t index_of(std::span<const std::size_t> profile) const {
    if (profile.size() != counts_.size()) {
      throw std::invalid_argument("ProfileSpace: profile has wrong player count");
    }
    std::size_t idx = 0;
    for (std::size_t p = 0; p < counts_.size(); ++p) {
      if (profile[p] >= counts_[p]) {
        throw std::out_of_range("ProfileSpace: action " + std::to_string(profile[p]) +
                                " out of range for player " + std::to_string(p));
      }
      idx += profile[p] * strides_[p];
    }
    return idx;
  }

  ActionProfile profile_at(std::size_t index) const {
    ActionProfile out(counts_.size());
    for (std::size_t p = 0; p < counts_.size(); ++p) {
      out[p] = (index / strides_[p]) % counts_[p];
    }
    return out;
  }

  /// Index of the profile equal to `index` except that `player` plays `action`.
  std::size_t with_action(std::size_t index, std::size_t player, std::size_t action) const {
    const std::size_t current = (index / strides_[player]) % counts_[player];
    return index - current * strides_[player] + action * strides_[player];
  }

  std::size_t action_in(std::size_t index, std::size_t player) const {
    return (index / strides_[player]) % counts_[player];
  }

  friend bool operator==(const ProfileSpace& a, const ProfileSpace& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Finite n-player normal-form game with payoffs in [0, 1].
class NormalFormGame {
 public:
  explicit NormalFormGame(std::vector<std::vector<std::string>> action_labels)
      : labels_(std::move(action_labels)), space_(counts_of(labels_)) {
    if (labels_.size() < 2 || labels_.size() > 3) {
      throw std::invalid_argument("NormalFormGame: 2 or 3 players supported, got " +
                                  std::to_string(labels_.size()));
    }
    for (const auto& set : labels_) {
      if (set.size() > 3) {
        throw std::invalid_argument("NormalFormGame: at most 3 actions per player");
      }
    }
    utilities_.assign(labels_.size() * space_.size(), 0.0);
  }

  /// Unlabelled game with the given action counts.
  static NormalFormGame with_counts(std::span<const std::size_t> counts) {
    std::vector<std::vector<std::string>> labels;
    for (std::size_t n : counts) {
      std::vector<std::string> set;
      for (std::size_t a = 0; a < n; ++a) set.push_back("a" + std::to_string(a));
      labels.push_back(std::move(set));
    }
    return NormalFormGame(std::move(labels));
  }

  std::size_t n_players() const { return labels_.size(); }
  std::size_t num_actions(std::size_t player) const { return space_.num_actions(player); }
  std::size_t num_profiles() const { return space_.size(); }
  const ProfileSpace& space() const { return space_; }
  const std::vector<std::string>& action_labels(std::size_t player) const {
    return labels_.at(player);
  }

  double utility(std::size_t player, std::size_t profile_index) const {
    return utilities_[player * space_.size() + profile_index];
  }
  double utility(std::size_t player, std::span<const std::size_t> profile) const {
    return utility(player, space_.index_of(profile));
  }

  void set_utility(std::size_t player, std::size_t profile_index, double value) {
    if (player >= n_players() || profile_index >= space_.size()) {
      throw std::out_of_range("NormalFormGame::set_utility: index out of range");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::invalid_argument("NormalFormGame: payoff " + std::to_string(value) +
                                  " outside [0, 1]");
    }
    utilities_[player * space_.size() + profile_index] = value;
  }
  void set_utility(std::size_t player, std::span<const std::size_t> profile, double value) {
    set_utility(player, space_.index_of(profile), value);
  }

  /// Flat payoff table, player-major.
  std::span<const double> utilities() const { return utilities_; }

  friend bool operator==(const NormalFormGame&, const NormalFormGame&) = default;

 private:
  static ProfileSpace counts_of(const std::vector<std::vector<std::string>>& labels) {
    std::vector<std::size_t> counts;
    for (const auto& set : labels) counts.push_back(set.size());
    return ProfileSpace(std::move(counts));
  }

  std::vector<std::vector<std::string>> labels_;
  ProfileSpace space_;
  std::vector<double> utilities_;
};

/// Probability mass over the action profiles of a ProfileSpace.
class JointDistribution {
 public:
  JointDistribution(ProfileSpace space, std::vector<double> probabilities)
      : space_(std::move(space)), probs_(std::move(probabilities)) {
    if (probs_.size() != space_.size()) {
      throw std::invalid_argument("JointDistribution: expected " +
                                  std::to_string(space_.size()) + " probabilities");
    }
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("JointDistribution: negative or non-finite probability");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
      throw std::invalid_argument("JointDistribution: probabilities sum to " +
                                  std::to_string(sum));
    }
  }

  static JointDistribution uniform(const ProfileSpace& space) {
    return JointDistribution(space, std::vector<double>(space.size(), 1.0 / space.size()));
  }

  static JointDistribution point_mass(const ProfileSpace& space, std::size_t index) {
    std::vector<double> p(space.size(), 0.0);
    p.at(index) = 1.0;
    return JointDistribution(space, std::move(p));
  }

  const ProfileSpace& space() const { return space_; }
  std::span<const double> probabilities() const { return probs_; }
  double operator[](std::size_t index) const { return probs_[index]; }
  double probability(std::span<const std::size_t> profile) const {
    return probs_[space_.index_of(profile)];
  }
  double probability(std::initializer_list<std::size_t> profile) const {
    return probability(std::span<const std::size_t>(profile.begin(), profile.size()));
  }

  /// Marginal distribution of one player's action.
  std::vector<double> marginal(std::size_t player) const {
    std::vector<double> m(space_.num_actions(player), 0.0);
    for (std::size_t k = 0; k < probs_.size(); ++k) m[space_.action_in(k, player)] += probs_[k];
    return m;
  }

 private:
  ProfileSpace space_;
  std::vector<double> probs_;
};

}  // namespace qgdm::game
