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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qgdm/quantum/circuits.hpp"

namespace qgdm::quantum {
namespace {

using namespace std::complex_literals;
constexpr double kPi = std::numbers::pi;
using Amps = std::vector<Complex>;
using Mat2 = std::array<Complex, 4>;

// Independent state-vector oracle: qubit 0 is the most significant bit.
Amps apply_1q(const Amps& psi, std::size_t n, std::size_t q, const Mat2& m) {
  Amps out(psi.size());
  const std::size_t bit = std::size_t{1} << (n - 1 - q);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const std::size_t b = (k & bit) ? 1 : 0;
    const std::size_t k0 = k & ~bit, k1 = k | bit;
    out[k] = m[b * 2 + 0] * psi[k0] + m[b * 2 + 1] * psi[k1];
  }
  return out;
}

// exp(-i g/2 X..X): cos(g/2) psi - i sin(g/2) psi[complement].
Amps apply_j(const Amps& psi, double gamma, bool inverse) {
  Amps out(psi.size());
  const double c = std::cos(gamma / 2.0), s = std::sin(gamma / 2.0) * (inverse ? -1.0 : 1.0);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    out[k] = c * psi[k] - 1.0i * s * psi[psi.size() - 1 - k];
  }
  return out;
}

Mat2 oracle_matrix(const QuantumOperatorSpec& op) {
  if (const auto* u = std::get_if<UnitaryOp>(&op)) {
    const double c = std::cos(u->theta / 2.0), s = std::sin(u->theta / 2.0);
    return {c, s, -s, c};
  }
  const double r = 1.0 / std::sqrt(2.0);
  switch (std::get<GateOp>(op).name) {
    case GateName::H: return {r, r, r, -r};
    case GateName::SigmaX: return {0.0, 1.0, 1.0, 0.0};
    case GateName::SigmaY: return {0.0, -1.0i, 1.0i, 0.0};
    case GateName::SigmaZ: return {1.0, 0.0, 0.0, -1.0};
    case GateName::Identity: return {1.0, 0.0, 0.0, 1.0};
  }
  return {};
}

Amps oracle_final(const QuantumGameConfig& cfg) {
  const std::size_t n = n_qubits(cfg.circuit);
  const std::size_t per = qubits_per_player(cfg.circuit);
  const std::size_t dim = std::size_t{1} << n;
  Amps psi(dim);
  if (const auto* b = std::get_if<BasisState>(&cfg.initial)) {
    psi[b->index] = 1.0;
  } else {
    const auto& e = std::get<EqualSuperposition>(cfg.initial);
    for (std::size_t k = 0; k < dim; ++k) {
      psi[k] = std::polar(1.0 / std::sqrt(double(dim)), e.phases.empty() ? 0.0 : e.phases[k]);
    }
  }
  psi = apply_j(psi, cfg.gamma, false);
  for (std::size_t p = 0; p < cfg.player_ops.size(); ++p) {
    for (std::size_t q = 0; q < per; ++q) {
      psi = apply_1q(psi, n, p * per + q, oracle_matrix(cfg.player_ops[p]));
    }
  }
  return apply_j(psi, cfg.gamma, true);
}

std::vector<double> moduli(std::span<const Complex> a) {
  std::vector<double> p;
  for (auto x : a) p.push_back(std::norm(x));
  return p;
}

std::vector<double> dist_values(const game::JointDistribution& d) {
  std::vector<double> v;
  for (std::size_t k = 0; k < d.space().size(); ++k) v.push_back(d[k]);
  return v;
}

// Matrix-vector product written out for the 4x4 chain oracle.
std::array<Complex, 4> mul4(const std::array<std::array<Complex, 4>, 4>& m,
                            const std::array<Complex, 4>& v) {
  std::array<Complex, 4> out{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r] += m[r][c] * v[c];
  }
  return out;
}

const CircuitKind kCircuits[] = {CircuitKind::TwoPTwoS, CircuitKind::ThreePTwoS,
                                 CircuitKind::TwoPThreeS};

TEST(CircuitKind, ShapesAndSelection) {
  EXPECT_EQ(n_qubits(CircuitKind::TwoPTwoS), 2u);
  EXPECT_EQ(n_qubits(CircuitKind::ThreePTwoS), 3u);
  EXPECT_EQ(n_qubits(CircuitKind::TwoPThreeS), 4u);
  const std::size_t c22[] = {2, 2}, c222[] = {2, 2, 2}, c33[] = {3, 3}, c23[] = {2, 3};
  const std::size_t c333[] = {3, 3, 3};
  EXPECT_EQ(circuit_for(c22), CircuitKind::TwoPTwoS);
  EXPECT_EQ(circuit_for(c222), CircuitKind::ThreePTwoS);
  EXPECT_EQ(circuit_for(c33), CircuitKind::TwoPThreeS);
  EXPECT_EQ(circuit_for(c23), CircuitKind::TwoPThreeS);
  EXPECT_THROW(circuit_for(c333), std::invalid_argument);
  EXPECT_EQ(parse_circuit_kind("3p2s"), CircuitKind::ThreePTwoS);
  EXPECT_FALSE(parse_circuit_kind("4p2s").has_value());
}

TEST(InitialState, EpdAndBasis) {
  const auto s2 = build_initial_state(BasisState{2}, 2);
  EXPECT_EQ(moduli(s2.amplitudes()), (std::vector<double>{0, 0, 1, 0}));
  const auto e2 = build_initial_state(EqualSuperposition{}, 2);
  for (auto a : e2.amplitudes()) EXPECT_EQ(a, Complex(0.5, 0.0));
  const auto e4 = build_initial_state(EqualSuperposition{}, 4);
  ASSERT_EQ(e4.dimension(), 16u);
  for (auto a : e4.amplitudes()) EXPECT_EQ(a, Complex(0.25, 0.0));
  EXPECT_THROW(build_initial_state(BasisState{8}, 3), std::out_of_range);
  EXPECT_THROW(build_initial_state(EqualSuperposition{{0.0, 1.0}}, 2), std::invalid_argument);
}

TEST(EvaluateCircuit, IdentityOperatorsAtMaxEntanglement) {
  QuantumGameConfig cfg{CircuitKind::TwoPTwoS, kPi / 2.0,
                        {GateOp{GateName::Identity}, GateOp{GateName::Identity}}, BasisState{0}};
  const auto psi = evaluate_circuit(cfg);
  EXPECT_NEAR(std::abs(psi[0] - Complex(1.0, 0.0)), 0.0, 1e-12);
}

TEST(EvaluateCircuit, BitFlipWithoutEntanglement) {
  QuantumGameConfig cfg{CircuitKind::TwoPTwoS, 0.0,
                        {GateOp{GateName::SigmaX}, GateOp{GateName::Identity}}, BasisState{0}};
  const auto psi = evaluate_circuit(cfg);
  EXPECT_EQ(moduli(psi.amplitudes()), (std::vector<double>{0, 0, 1, 0}));
}

TEST(EvaluateCircuit, WrongOperatorCountThrows) {
  QuantumGameConfig cfg{CircuitKind::ThreePTwoS, 0.0,
                        {GateOp{GateName::SigmaX}, GateOp{GateName::Identity}}, BasisState{0}};
  EXPECT_THROW(evaluate_circuit(cfg), std::invalid_argument);
  cfg.player_ops.push_back(GateOp{GateName::H});
  cfg.gamma = 2.0;
  EXPECT_THROW(evaluate_circuit(cfg), std::invalid_argument);
}

TEST(EvaluateCircuit, MatchesIndependentOracleOnRandomConfigs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> theta(0.0, kPi), gamma(0.0, kPi / 2.0);
  std::uniform_int_distribution<int> pick(0, 5);
  for (CircuitKind c : kCircuits) {
    for (int trial = 0; trial < 100; ++trial) {
      QuantumGameConfig cfg;
      cfg.circuit = c;
      cfg.gamma = gamma(rng);
      for (std::size_t p = 0; p < n_players(c); ++p) {
        const int k = pick(rng);
        if (k == 5) cfg.player_ops.emplace_back(UnitaryOp{theta(rng)});
        else cfg.player_ops.emplace_back(GateOp{static_cast<GateName>(k)});
      }
      if (trial % 2) {
        cfg.initial = BasisState{static_cast<std::size_t>(trial) % (std::size_t{1} << n_qubits(c))};
      }
      const auto psi = evaluate_circuit(cfg);
      EXPECT_NEAR(std::sqrt(psi.norm_squared()), 1.0, 1e-9);
      const auto oracle = oracle_final(cfg);
      for (std::size_t k = 0; k < oracle.size(); ++k) {
        EXPECT_NEAR(std::abs(psi[k] - oracle[k]), 0.0, 1e-10);
      }
    }
  }
}

TEST(EvaluateCircuit, PresetsAreNormalized) {
  for (CircuitKind c : kCircuits) {
    for (QuantumModel m : {QuantumModel::Unitary, QuantumModel::Gate}) {
      EXPECT_NEAR(std::sqrt(evaluate_circuit(preset(m, c)).norm_squared()), 1.0, 1e-9);
    }
  }
}

// gamma = 0 with I / X operators is a classical bit flip of each player's
// initial code.
TEST(ClassicalRecovery, BitFlipOracle) {
  for (CircuitKind c : kCircuits) {
    const std::size_t nq = n_qubits(c), players = n_players(c), per = qubits_per_player(c);
    const std::size_t strategies = c == CircuitKind::TwoPThreeS ? 3 : 2;
    for (std::size_t init = 0; init < (std::size_t{1} << nq); ++init) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << players); ++mask) {
        QuantumGameConfig cfg{c, 0.0, {}, BasisState{init}};
        std::size_t flip = 0;
        for (std::size_t p = 0; p < players; ++p) {
          const bool x = (mask >> (players - 1 - p)) & 1;
          cfg.player_ops.emplace_back(GateOp{x ? GateName::SigmaX : GateName::Identity});
          if (x) flip |= ((std::size_t{1} << per) - 1) << ((players - 1 - p) * per);
        }
        const std::size_t final_code = init ^ flip;
        game::ActionProfile expected(players);
        bool valid = true;
        for (std::size_t p = 0; p < players; ++p) {
          expected[p] = (final_code >> ((players - 1 - p) * per)) & ((std::size_t{1} << per) - 1);
          valid = valid && expected[p] < strategies;
        }
        const auto dist = profile_probabilities(evaluate_circuit(cfg), c);
        if (!valid) {
          // All mass on a dead code: EPD fallback.
          for (std::size_t k = 0; k < dist.space().size(); ++k) {
            EXPECT_DOUBLE_EQ(dist[k], 1.0 / static_cast<double>(dist.space().size()));
          }
          continue;
        }
        const std::size_t idx = dist.space().index_of(expected);
        for (std::size_t k = 0; k < dist.space().size(); ++k) {
          EXPECT_EQ(dist[k], k == idx ? 1.0 : 0.0)
              << to_string(c) << " init=" << init << " mask=" << mask;
        }
      }
    }
  }
}

TEST(ClassicalRecovery, IdentityOperatorsKeepInitialDistribution) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (CircuitKind c : kCircuits) {
    const std::size_t dim = std::size_t{1} << n_qubits(c);
    std::vector<InitialStateSpec> inits = {EqualSuperposition{}, BasisState{0}, BasisState{dim - 1},
                                           BasisState{1}};
    std::vector<double> phases(dim);
    for (double& p : phases) p = ph(rng);
    inits.push_back(EqualSuperposition{phases});
    for (double gamma : {0.0, kPi / 6.0, kPi / 3.0, kPi / 2.0}) {
      for (const auto& init : inits) {
        QuantumGameConfig cfg{c, gamma,
                              std::vector<QuantumOperatorSpec>(n_players(c), GateOp{GateName::Identity}),
                              init};
        const auto before = born_probabilities(build_initial_state(init, n_qubits(c)));
        const auto after = born_probabilities(evaluate_circuit(cfg));
        for (std::size_t k = 0; k < dim; ++k) EXPECT_NEAR(after[k], before[k], 1e-12);
      }
    }
  }
}

TEST(ProfileProbabilities, DecodesTwoPlayerBasisState) {
  const auto d = profile_probabilities(StateVector::basis(2, 2), CircuitKind::TwoPTwoS);
  EXPECT_EQ(d.probability({1, 0}), 1.0);
  EXPECT_EQ(d.probability({0, 0}), 0.0);
}

TEST(ProfileProbabilities, UniformFourQubitsRenormalizesToNinths) {
  const auto d = profile_probabilities(build_initial_state(EqualSuperposition{}, 4),
                                       CircuitKind::TwoPThreeS);
  ASSERT_EQ(d.space().size(), 9u);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(d[k], 1.0 / 9.0, 1e-15);
}

TEST(ProfileProbabilities, GhzState) {
  const double r = 1.0 / std::sqrt(2.0);
  StateVector ghz(3, {r, 0, 0, 0, 0, 0, 0, r});
  const auto d = profile_probabilities(ghz, CircuitKind::ThreePTwoS);
  EXPECT_NEAR(d.probability({0, 0, 0}), 0.5, 1e-15);
  EXPECT_NEAR(d.probability({1, 1, 1}), 0.5, 1e-15);
  EXPECT_NEAR(d.probability({0, 1, 0}), 0.0, 1e-15);
}

TEST(ProfileProbabilities, MaskedActionsDropAndRenormalize) {
  // Ego limited to two of three strategies: codes 10 and 11 of its pair drop.
  const auto d = profile_probabilities(build_initial_state(EqualSuperposition{}, 4),
                                       CircuitKind::TwoPThreeS, {2, 3});
  ASSERT_EQ(d.space().size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(d[k], 1.0 / 6.0, 1e-15);
  EXPECT_THROW(profile_probabilities(StateVector::basis(2, 0), CircuitKind::TwoPTwoS, {3, 2}),
               std::invalid_argument);
  EXPECT_THROW(profile_probabilities(StateVector::basis(3, 0), CircuitKind::TwoPTwoS),
               std::invalid_argument);
}

TEST(Entanglement, OpponentOperatorCouplesAtMaxGamma) {
  const GateName gates[] = {GateName::H, GateName::SigmaX, GateName::SigmaY, GateName::SigmaZ,
                            GateName::Identity};
  double best = 0.0;
  for (GateName p1 : gates) {
    for (GateName a : gates) {
      for (GateName b : gates) {
        auto run = [&](GateName p2) {
          QuantumGameConfig cfg{CircuitKind::TwoPTwoS, kPi / 2.0, {GateOp{p1}, GateOp{p2}},
                                BasisState{0}};
          return dist_values(profile_probabilities(evaluate_circuit(cfg), cfg.circuit));
        };
        const auto da = run(a), db = run(b);
        double l1 = 0.0;
        for (std::size_t k = 0; k < 4; ++k) l1 += std::abs(da[k] - db[k]);
        best = std::max(best, l1);
      }
    }
  }
  EXPECT_GT(best, 0.1);
}

TEST(Presets, TableRows) {
  const auto g2 = preset(QuantumModel::Gate, CircuitKind::TwoPTwoS);
  EXPECT_EQ(g2.gamma, kPi / 2.0);
  ASSERT_EQ(g2.player_ops.size(), 2u);
  EXPECT_EQ(std::get<GateOp>(g2.player_ops[0]).name, GateName::Identity);
  EXPECT_EQ(std::get<GateOp>(g2.player_ops[1]).name, GateName::SigmaY);
  EXPECT_EQ(moduli(build_initial_state(g2.initial, 2).amplitudes()),
            (std::vector<double>{0, 0, 1, 0}));

  for (CircuitKind c : {CircuitKind::ThreePTwoS, CircuitKind::TwoPThreeS}) {
    const auto g = preset(QuantumModel::Gate, c);
    EXPECT_DOUBLE_EQ(g.gamma, kPi / 3.0);
    EXPECT_EQ(std::get<GateOp>(g.player_ops[0]).name, GateName::H);
    for (std::size_t p = 1; p < g.player_ops.size(); ++p) {
      EXPECT_EQ(std::get<GateOp>(g.player_ops[p]).name, GateName::SigmaX);
    }
    EXPECT_TRUE(std::holds_alternative<EqualSuperposition>(g.initial));
  }

  for (CircuitKind c : kCircuits) {
    const auto u = preset(QuantumModel::Unitary, c);
    EXPECT_EQ(u.gamma, 0.0);
    ASSERT_EQ(u.player_ops.size(), n_players(c));
    EXPECT_DOUBLE_EQ(std::get<UnitaryOp>(u.player_ops[0]).theta, kPi / 2.0);
    for (std::size_t p = 1; p < u.player_ops.size(); ++p) {
      EXPECT_EQ(std::get<UnitaryOp>(u.player_ops[p]).theta, 0.0);
    }
    EXPECT_TRUE(std::holds_alternative<EqualSuperposition>(u.initial));
  }
}

// (I, sigma_y), gamma = pi/2, |10>, as an explicit 4x4 matrix chain.
TEST(Presets, GateTwoPlayerMatchesMatrixChainOracle) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex mi = -1.0i * r, pi_ = 1.0i * r;
  const std::array<std::array<Complex, 4>, 4> j = {{{r, 0, 0, mi},
                                                    {0, r, mi, 0},
                                                    {0, mi, r, 0},
                                                    {mi, 0, 0, r}}};
  const std::array<std::array<Complex, 4>, 4> jd = {{{r, 0, 0, pi_},
                                                     {0, r, pi_, 0},
                                                     {0, pi_, r, 0},
                                                     {pi_, 0, 0, r}}};
  // I (x) sigma_y
  const std::array<std::array<Complex, 4>, 4> ops = {{{0, -1.0i, 0, 0},
                                                      {1.0i, 0, 0, 0},
                                                      {0, 0, 0, -1.0i},
                                                      {0, 0, 1.0i, 0}}};
  const auto chain = mul4(jd, mul4(ops, mul4(j, {0, 0, 1, 0})));
  const auto psi = evaluate_circuit(preset(QuantumModel::Gate, CircuitKind::TwoPTwoS));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(psi[k] - chain[k]), 0.0, 1e-10);
  const auto d = profile_probabilities(psi, CircuitKind::TwoPTwoS);
  EXPECT_NEAR(d.probability({0, 0}), std::norm(chain[0]), 1e-10);
  EXPECT_NEAR(d.probability({0, 0}), 1.0, 1e-10);  // the chain collapses to -|00>
}

TEST(Presets, UnitaryModelPutsEgoOnFirstAction) {
  const auto d2 = profile_probabilities(evaluate_circuit(preset(QuantumModel::Unitary, CircuitKind::TwoPTwoS)),
                                        CircuitKind::TwoPTwoS);
  EXPECT_NEAR(d2.probability({0, 0}), 0.5, 1e-12);
  EXPECT_NEAR(d2.probability({0, 1}), 0.5, 1e-12);
  const auto d3 = profile_probabilities(evaluate_circuit(preset(QuantumModel::Unitary, CircuitKind::TwoPThreeS)),
                                        CircuitKind::TwoPThreeS);
  for (std::size_t iv = 0; iv < 3; ++iv) EXPECT_NEAR(d3.probability({0, iv}), 1.0 / 3.0, 1e-12);
}

TEST(Presets, GateThreePlayerMarginals) {
  const auto d = profile_probabilities(
      evaluate_circuit(preset(QuantumModel::Gate, CircuitKind::ThreePTwoS)), CircuitKind::ThreePTwoS);
  const auto m0 = d.marginal(0), m1 = d.marginal(1);
  EXPECT_NEAR(m0[0], 0.75, 1e-12);
  EXPECT_NEAR(m0[1], 0.25, 1e-12);
  EXPECT_NEAR(m1[0], 0.5, 1e-12);
}

}  // namespace
}  // namespace qgdm::quantum
