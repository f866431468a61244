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

// Entangle / play / disentangle circuits for two-player two-strategy,
// three-player two-strategy and two-player three-strategy games, plus the
// mapping from final amplitudes to a distribution over action profiles.
//
// Qubit order: qubit 0 is the most significant bit of a basis index and
// belongs to player 1 (the ego). In the three-strategy circuit each player
// owns a pair of adjacent qubits whose two bits encode the strategy index
// (00 -> 0, 01 -> 1, 10 -> 2).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qgdm/game/normal_form_game.hpp"
#include "qgdm/quantum/gates.hpp"
#include "qgdm/quantum/linalg.hpp"

namespace qgdm::quantum {

enum class CircuitKind { TwoPTwoS, ThreePTwoS, TwoPThreeS };

inline std::string_view to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::TwoPTwoS: return "2p2s";
    case CircuitKind::ThreePTwoS: return "3p2s";
    case CircuitKind::TwoPThreeS: return "2p3s";
  }
  return "?";
}

inline std::optional<CircuitKind> parse_circuit_kind(std::string_view s) {
  if (s == "2p2s") return CircuitKind::TwoPTwoS;
  if (s == "3p2s") return CircuitKind::ThreePTwoS;
  if (s == "2p3s") return CircuitKind::TwoPThreeS;
  return std::nullopt;
}

inline std::size_t n_players(CircuitKind k) { return k == CircuitKind::ThreePTwoS ? 3 : 2; }
inline std::size_t n_qubits(CircuitKind k) {
  switch (k) {
    case CircuitKind::TwoPTwoS: return 2;
    case CircuitKind::ThreePTwoS: return 3;
    case CircuitKind::TwoPThreeS: return 4;
  }
  return 0;
}
inline std::size_t qubits_per_player(CircuitKind k) {
  return k == CircuitKind::TwoPThreeS ? 2 : 1;
}

/// Circuit for a game with the given per-player action counts. Any player
/// with three actions needs the paired-qubit circuit.
inline CircuitKind circuit_for(std::span<const std::size_t> action_counts) {
  bool three = false;
  for (std::size_t c : action_counts) {
    if (c < 1 || c > 3) throw std::invalid_argument("circuit_for: 1 to 3 actions per player");
    three = three || c == 3;
  }
  if (action_counts.size() == 2) return three ? CircuitKind::TwoPThreeS : CircuitKind::TwoPTwoS;
  if (action_counts.size() == 3 && !three) return CircuitKind::ThreePTwoS;
  throw std::invalid_argument("circuit_for: no circuit for this game shape");
}

struct UnitaryOp {
  double theta = 0.0;
  friend bool operator==(const UnitaryOp&, const UnitaryOp&) = default;
};
struct GateOp {
  GateName name = GateName::Identity;
  friend bool operator==(const GateOp&, const GateOp&) = default;
};

/// A player's quantum move: U(theta) or one of the five named gates.
using QuantumOperatorSpec = std::variant<UnitaryOp, GateOp>;

inline ComplexMatrix single_qubit_matrix(const QuantumOperatorSpec& op) {
  return std::visit(
      [](const auto& o) -> ComplexMatrix {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, UnitaryOp>) {
          return unitary_u(o.theta);
        } else {
          return gate(o.name);
        }
      },
      op);
}

struct EqualSuperposition {
  /// Optional per-amplitude phases in radians; empty means all zero.
  std::vector<double> phases;
  friend bool operator==(const EqualSuperposition&, const EqualSuperposition&) = default;
};
struct BasisState {
  std::size_t index = 0;
  friend bool operator==(const BasisState&, const BasisState&) = default;
};

using InitialStateSpec = std::variant<EqualSuperposition, BasisState>;

struct QuantumGameConfig {
  CircuitKind circuit = CircuitKind::TwoPTwoS;
  double gamma = 0.0;
  std::vector<QuantumOperatorSpec> player_ops;
  InitialStateSpec initial = EqualSuperposition{};

  friend bool operator==(const QuantumGameConfig&, const QuantumGameConfig&) = default;
};

inline StateVector build_initial_state(const InitialStateSpec& spec, std::size_t n_qubits) {
  require_qubit_count(n_qubits, "build_initial_state");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (const auto* basis = std::get_if<BasisState>(&spec)) {
    return StateVector::basis(n_qubits, basis->index);
  }
  const auto& epd = std::get<EqualSuperposition>(spec);
  if (!epd.phases.empty() && epd.phases.size() != dim) {
    throw std::invalid_argument("build_initial_state: expected " + std::to_string(dim) +
                                " phases");
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Complex> amps(dim, Complex{amp, 0.0});
  for (std::size_t k = 0; k < epd.phases.size(); ++k) amps[k] = std::polar(amp, epd.phases[k]);
  return StateVector(n_qubits, std::move(amps));
}

inline void validate(const QuantumGameConfig& cfg) {
  if (cfg.player_ops.size() != n_players(cfg.circuit)) {
    throw std::invalid_argument("QuantumGameConfig: circuit " +
                                std::string(to_string(cfg.circuit)) + " needs " +
                                std::to_string(n_players(cfg.circuit)) + " player operators");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= std::numbers::pi / 2.0 + 1e-12)) {
    throw std::invalid_argument("QuantumGameConfig: gamma outside [0, pi/2]");
  }
}

/// The tensor product of all players' operators (each squared for the
/// paired-qubit circuit).
inline ComplexMatrix players_operator(const QuantumGameConfig& cfg) {
  std::vector<ComplexMatrix> factors;
  for (const auto& op : cfg.player_ops) {
    ComplexMatrix m = single_qubit_matrix(op);
    if (qubits_per_player(cfg.circuit) == 2) m = tensor_product(m, m);
    factors.push_back(std::move(m));
  }
  return tensor_product(std::span<const ComplexMatrix>(factors));
}

/// psi_f = J^dagger(gamma) (QO_1 x ... x QO_n) J(gamma) psi_0.
inline StateVector evaluate_circuit(const QuantumGameConfig& cfg) {
  validate(cfg);
  const std::size_t nq = n_qubits(cfg.circuit);
  const ComplexMatrix j = entangler_j(cfg.gamma, nq);
  StateVector psi = build_initial_state(cfg.initial, nq);
  psi = mat_apply(j, psi);
  psi = mat_apply(players_operator(cfg), psi);
  psi = mat_apply(dagger(j), psi);
  if (!psi.is_normalized()) {
    throw std::logic_error("evaluate_circuit: final state lost normalization");
  }
  return psi;
}

/// Distribution over action profiles. `action_counts` defaults to the full
/// strategy count of the circuit; smaller counts (masked actions) drop the
/// basis codes beyond them and renormalize, falling back to EPD when no mass
/// is left.
inline game::JointDistribution profile_probabilities(const StateVector& final_state,
                                                     CircuitKind circuit,
                                                     std::vector<std::size_t> action_counts = {}) {
  const std::size_t strategies = circuit == CircuitKind::TwoPThreeS ? 3 : 2;
  const std::size_t players = n_players(circuit);
  if (action_counts.empty()) action_counts.assign(players, strategies);
  if (action_counts.size() != players) {
    throw std::invalid_argument("profile_probabilities: action count list has wrong length");
  }
  for (std::size_t c : action_counts) {
    if (c < 1 || c > strategies) {
      throw std::invalid_argument("profile_probabilities: action count exceeds circuit");
    }
  }
  if (final_state.n_qubits() != n_qubits(circuit)) {
    throw std::invalid_argument("profile_probabilities: state size does not match circuit");
  }
  const auto born = born_probabilities(final_state);
  game::ProfileSpace space(action_counts);
  std::vector<double> p(space.size(), 0.0);

  const std::size_t bits = qubits_per_player(circuit);
  const std::size_t code_mask = (std::size_t{1} << bits) - 1;
  double kept = 0.0;
  game::ActionProfile profile(players);
  for (std::size_t k = 0; k < born.size(); ++k) {
    bool valid = true;
    for (std::size_t pl = 0; pl < players; ++pl) {
      const std::size_t shift = (players - 1 - pl) * bits;
      const std::size_t code = (k >> shift) & code_mask;
      if (code >= action_counts[pl]) {
        valid = false;
        break;
      }
      profile[pl] = code;
    }
    if (!valid) continue;
    p[space.index_of(profile)] += born[k];
    kept += born[k];
  }
  if (kept <= game::kDistributionTolerance) return game::JointDistribution::uniform(space);
  for (double& v : p) v /= kept;
  return game::JointDistribution(std::move(space), std::move(p));
}

enum class QuantumModel { Unitary, Gate };

inline std::string_view to_string(QuantumModel m) {
  return m == QuantumModel::Unitary ? "qgdm-u" : "qgdm-g";
}

/// Best-found parameter rows. The unitary model uses theta = pi/2 for the ego
/// and 0 for every opponent without entanglement; the gate model uses
/// (I, sigma_y) at maximal entanglement from |10> for 2P/2S, and
/// (H, sigma_x, ...) at gamma = pi/3 from EPD otherwise.
inline QuantumGameConfig preset(QuantumModel model, CircuitKind circuit) {
  QuantumGameConfig cfg;
  cfg.circuit = circuit;
  const std::size_t players = n_players(circuit);
  if (model == QuantumModel::Unitary) {
    cfg.gamma = 0.0;
    cfg.player_ops.push_back(UnitaryOp{std::numbers::pi / 2.0});
    for (std::size_t p = 1; p < players; ++p) cfg.player_ops.push_back(UnitaryOp{0.0});
    cfg.initial = EqualSuperposition{};
    return cfg;
  }
  if (circuit == CircuitKind::TwoPTwoS) {
    cfg.gamma = std::numbers::pi / 2.0;
    cfg.player_ops = {GateOp{GateName::Identity}, GateOp{GateName::SigmaY}};
    cfg.initial = BasisState{2};
    return cfg;
  }
  cfg.gamma = std::numbers::pi / 3.0;
  cfg.player_ops.push_back(GateOp{GateName::H});
  for (std::size_t p = 1; p < players; ++p) cfg.player_ops.push_back(GateOp{GateName::SigmaX});
  cfg.initial = EqualSuperposition{};
  return cfg;
}

}  // namespace qgdm::quantum
