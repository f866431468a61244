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

// Classical probability providers for the expected-utility step: equal
// probability (EPD), uniform over pure Nash equilibria, and a mixed Nash
// equilibrium by support enumeration.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "qgdm/game/normal_form_game.hpp"
#include "qgdm/game/solvers.hpp"

namespace qgdm::game {

inline JointDistribution epd_distribution(const NormalFormGame& g) {
  return JointDistribution::uniform(g.space());
}

inline JointDistribution nash_distribution(const NormalFormGame& g) {
  std::vector<std::size_t> equilibria;
  for (std::size_t k = 0; k < g.num_profiles(); ++k) {
    if (is_pure_nash(g, k)) equilibria.push_back(k);
  }
  if (equilibria.empty()) return epd_distribution(g);
  std::vector<double> p(g.num_profiles(), 0.0);
  for (std::size_t k : equilibria) p[k] = 1.0 / static_cast<double>(equilibria.size());
  return JointDistribution(g.space(), std::move(p));
}

/// A mixed strategy for each of two players.
struct MixedProfile {
  std::vector<double> row;
  std::vector<double> col;
};

namespace detail {

// Gaussian elimination with partial pivoting on an augmented n x (n+1)
// system. Returns nullopt when a pivot falls below `eps`.
inline std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a,
                                                       double eps = 1e-12) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < eps) return std::nullopt;
    std::swap(a[pivot], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

// Subsets of {0..n-1} of the given size, in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Strategy of `mover` that makes `opponent` indifferent across `opp_support`.
// payoff(own, opp) is the opponent's payoff. Unknowns: the mover's weights on
// `support` followed by the opponent's common value.
template <typename Payoff>
std::optional<std::vector<double>> indifference_weights(const std::vector<std::size_t>& support,
                                                        const std::vector<std::size_t>& opp_support,
                                                        std::size_t n_mover, Payoff payoff) {
  const std::size_t k = support.size();
  std::vector<std::vector<double>> sys(k + 1, std::vector<double>(k + 2, 0.0));
  for (std::size_t r = 0; r < opp_support.size(); ++r) {
    for (std::size_t c = 0; c < k; ++c) sys[r][c] = payoff(support[c], opp_support[r]);
    sys[r][k] = -1.0;
    sys[r][k + 1] = 0.0;
  }
  for (std::size_t c = 0; c < k; ++c) sys[k][c] = 1.0;
  sys[k][k + 1] = 1.0;
  auto sol = solve_linear(std::move(sys));
  if (!sol) return std::nullopt;
  std::vector<double> w(n_mover, 0.0);
  for (std::size_t c = 0; c < k; ++c) w[support[c]] = (*sol)[c];
  return w;
}

}  // namespace detail

/// Support enumeration for two-player games. Supports are tried from the
/// largest size down, lexicographically within a size; the first pair whose
/// indifference solution is a probability vector with no profitable pure
/// deviation is returned.
inline std::optional<MixedProfile> solve_mixed_two_player(const NormalFormGame& g,
                                                          double tol = 1e-9) {
  if (g.n_players() != 2) return std::nullopt;
  const std::size_t m = g.num_actions(0);
  const std::size_t n = g.num_actions(1);
  auto u = [&](std::size_t player, std::size_t i, std::size_t j) {
    const std::size_t profile[2] = {i, j};
    return g.utility(player, std::span<const std::size_t>(profile, 2));
  };
  for (std::size_t k = std::min(m, n); k >= 1; --k) {
    for (const auto& rows : detail::subsets_of_size(m, k)) {
      for (const auto& cols : detail::subsets_of_size(n, k)) {
        // Row weights make the column player indifferent over `cols`.
        auto x = detail::indifference_weights(rows, cols, m, [&](std::size_t i, std::size_t j) {
          return u(1, i, j);
        });
        auto y = detail::indifference_weights(cols, rows, n, [&](std::size_t j, std::size_t i) {
          return u(0, i, j);
        });
        if (!x || !y) continue;
        auto valid = [&](std::vector<double>& w) {
          for (double& p : w) {
            if (p < -tol || p > 1.0 + tol) return false;
            p = std::clamp(p, 0.0, 1.0);
          }
          double sum = 0.0;
          for (double p : w) sum += p;
          for (double& p : w) p /= sum;
          return true;
        };
        if (!valid(*x) || !valid(*y)) continue;
        // No pure deviation may gain more than tol.
        std::vector<double> row_payoff(m, 0.0), col_payoff(n, 0.0);
        double row_value = 0.0, col_value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            row_payoff[i] += (*y)[j] * u(0, i, j);
            col_payoff[j] += (*x)[i] * u(1, i, j);
            row_value += (*x)[i] * (*y)[j] * u(0, i, j);
            col_value += (*x)[i] * (*y)[j] * u(1, i, j);
          }
        }
        const bool stable =
            std::all_of(row_payoff.begin(), row_payoff.end(),
                        [&](double v) { return v <= row_value + tol; }) &&
            std::all_of(col_payoff.begin(), col_payoff.end(),
                        [&](double v) { return v <= col_value + tol; });
        if (stable) return MixedProfile{std::move(*x), std::move(*y)};
      }
    }
  }
  return std::nullopt;
}

/// Product of the mixed equilibrium strategies for two-player games; EPD for
/// three players or when enumeration finds nothing.
inline JointDistribution mixed_strategy_distribution(const NormalFormGame& g) {
  auto mixed = solve_mixed_two_player(g);
  if (!mixed) return epd_distribution(g);
  std::vector<double> p(g.num_profiles(), 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < g.num_profiles(); ++k) {
    p[k] = mixed->row[g.space().action_in(k, 0)] * mixed->col[g.space().action_in(k, 1)];
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return JointDistribution(g.space(), std::move(p));
}

}  // namespace qgdm::game
