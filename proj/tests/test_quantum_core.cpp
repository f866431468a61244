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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qgdm/quantum/gates.hpp"
#include "qgdm/quantum/linalg.hpp"

namespace qgdm::quantum {
namespace {

using namespace std::complex_literals;
constexpr double kPi = std::numbers::pi;

// Truncated power series of exp(A); converges fast for the small norms used
// here (||A|| <= pi/4).
ComplexMatrix series_exp(const ComplexMatrix& a, int terms = 30) {
  ComplexMatrix sum = ComplexMatrix::identity(a.rows());
  ComplexMatrix term = ComplexMatrix::identity(a.rows());
  for (int k = 1; k < terms; ++k) {
    term = Complex{1.0 / k, 0.0} * (term * a);
    sum = sum + term;
  }
  return sum;
}

ComplexMatrix random_unitary_2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  // e^{ia} [[e^{ib} cos c, e^{id} sin c], [-e^{-id} sin c, e^{-ib} cos c]]
  const Complex g = std::polar(1.0, a);
  return ComplexMatrix(2, 2,
                       {g * std::polar(1.0, b) * std::cos(c), g * std::polar(1.0, d) * std::sin(c),
                        -g * std::polar(1.0, -d) * std::sin(c),
                        g * std::polar(1.0, -b) * std::cos(c)});
}

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector(n, amps);
}

TEST(ComplexMatrix, RejectsBadShapes) {
  EXPECT_THROW(ComplexMatrix(0, 2), std::invalid_argument);
  EXPECT_THROW(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
  EXPECT_THROW(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), std::invalid_argument);
}

TEST(ComplexMatrix, ProductByHand) {
  const ComplexMatrix a(2, 2, {1.0, 2.0i, 0.0, 1.0});
  const ComplexMatrix b(2, 2, {1.0, 0.0, 1.0i, 3.0});
  const ComplexMatrix p = a * b;
  // [[1 + 2i*i, 6i], [i, 3]]
  EXPECT_EQ(p(0, 0), Complex(-1.0, 0.0));
  EXPECT_EQ(p(0, 1), Complex(0.0, 6.0));
  EXPECT_EQ(p(1, 0), Complex(0.0, 1.0));
  EXPECT_EQ(p(1, 1), Complex(3.0, 0.0));
}

TEST(TensorProduct, SigmaXWithIdentityByHand) {
  const ComplexMatrix k = tensor_product(gate(GateName::SigmaX), gate(GateName::Identity));
  // X (x) I swaps the halves: rows 0,1 <-> rows 2,3.
  const ComplexMatrix expected(4, 4, {0, 0, 1, 0,
                                      0, 0, 0, 1,
                                      1, 0, 0, 0,
                                      0, 1, 0, 0});
  EXPECT_EQ(k, expected);
}

TEST(TensorProduct, GeneralEntriesByHand) {
  const ComplexMatrix a(2, 2, {1.0, 2.0, 3.0, 4.0});
  const ComplexMatrix b(2, 2, {0.0, 1.0i, 1.0, 0.0});
  const ComplexMatrix k = tensor_product(a, b);
  ASSERT_EQ(k.rows(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      EXPECT_EQ(k(r, c), a(r / 2, c / 2) * b(r % 2, c % 2)) << r << "," << c;
    }
  }
}

TEST(TensorProduct, MixedProductProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_unitary_2(rng), b = random_unitary_2(rng);
    const auto c = random_unitary_2(rng), d = random_unitary_2(rng);
    const auto lhs = tensor_product(a, b) * tensor_product(c, d);
    const auto rhs = tensor_product(a * c, b * d);
    EXPECT_LE(frobenius_distance(lhs, rhs), 1e-12);
  }
}

TEST(TensorProduct, FoldIsAssociative) {
  std::mt19937_64 rng(8);
  const ComplexMatrix f[3] = {random_unitary_2(rng), random_unitary_2(rng), random_unitary_2(rng)};
  const auto folded = tensor_product(std::span<const ComplexMatrix>(f));
  const auto right = tensor_product(f[0], tensor_product(f[1], f[2]));
  EXPECT_LE(frobenius_distance(folded, right), 1e-13);
  EXPECT_THROW(tensor_product(std::span<const ComplexMatrix>()), std::invalid_argument);
}

TEST(Gates, NamedGatesAreUnitary) {
  for (GateName g : {GateName::H, GateName::SigmaX, GateName::SigmaY, GateName::SigmaZ,
                     GateName::Identity}) {
    EXPECT_TRUE(is_unitary(gate(g))) << to_string(g);
  }
}

TEST(Gates, PaulisSquareToIdentity) {
  for (GateName g : {GateName::H, GateName::SigmaX, GateName::SigmaY, GateName::SigmaZ}) {
    const auto m = gate(g);
    EXPECT_LE(frobenius_distance(m * m, ComplexMatrix::identity(2)), 1e-15) << to_string(g);
  }
}

TEST(Gates, ParseNames) {
  EXPECT_EQ(parse_gate_name("H"), GateName::H);
  EXPECT_EQ(parse_gate_name("Y"), GateName::SigmaY);
  EXPECT_EQ(parse_gate_name("I2"), GateName::Identity);
  EXPECT_FALSE(parse_gate_name("T").has_value());
  EXPECT_THROW(gate("sqrtX"), std::invalid_argument);
}

TEST(UnitaryU, EntriesAndUnitarity) {
  for (int k = 0; k <= 16; ++k) {
    const double theta = kPi * k / 16.0;
    const auto u = unitary_u(theta);
    EXPECT_TRUE(is_unitary(u));
    EXPECT_DOUBLE_EQ(u(0, 0).real(), std::cos(theta / 2.0));
    EXPECT_DOUBLE_EQ(u(0, 1).real(), std::sin(theta / 2.0));
    EXPECT_DOUBLE_EQ(u(1, 0).real(), -std::sin(theta / 2.0));
  }
  EXPECT_EQ(unitary_u(0.0), ComplexMatrix::identity(2));
}

TEST(UnitaryU, OutOfRangeThetaClampsWithWarning) {
  std::vector<std::string> seen;
  auto previous = set_warning_sink([&](std::string_view m) { seen.emplace_back(m); });
  const auto u = unitary_u(4.0);
  set_warning_sink(std::move(previous));
  EXPECT_EQ(u, unitary_u(kPi));
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_NE(seen[0].find("clamped"), std::string::npos);
  EXPECT_THROW(unitary_u(std::nan("")), std::invalid_argument);
}

TEST(Entangler, ClosedFormMatchesSeriesExponential) {
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto x = pauli_x_string(n);
    for (double gamma : {0.0, kPi / 7.0, kPi / 6.0, kPi / 3.0, 0.4, kPi / 2.0}) {
      const auto oracle = series_exp(Complex{0.0, -gamma / 2.0} * x);
      EXPECT_LE(frobenius_distance(entangler_j(gamma, n), oracle), 1e-10)
          << "n=" << n << " gamma=" << gamma;
    }
  }
}

TEST(Entangler, PauliStringMatchesKroneckerOfPaulis) {
  for (std::size_t n = 2; n <= 4; ++n) {
    ComplexMatrix k = gate(GateName::SigmaX);
    for (std::size_t i = 1; i < n; ++i) k = tensor_product(k, gate(GateName::SigmaX));
    EXPECT_EQ(pauli_x_string(n), k);
  }
}

TEST(Entangler, UnitaryAndDaggerInverts) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (double gamma = 0.0; gamma <= kPi / 2.0 + 1e-12; gamma += kPi / 20.0) {
      const auto j = entangler_j(gamma, n);
      EXPECT_TRUE(is_unitary(j, 1e-10));
      EXPECT_LE(frobenius_distance(dagger(j) * j, ComplexMatrix::identity(j.rows())), 1e-10);
    }
  }
}

TEST(Entangler, RejectsBadArguments) {
  EXPECT_THROW(entangler_j(-0.1, 2), std::invalid_argument);
  EXPECT_THROW(entangler_j(kPi / 2.0 + 0.01, 2), std::invalid_argument);
  EXPECT_THROW(entangler_j(0.1, 1), std::invalid_argument);
  EXPECT_THROW(entangler_j(0.1, 5), std::invalid_argument);
  EXPECT_NO_THROW(entangler_j(kPi / 2.0, 4));
}

TEST(StateVector, BasisAndValidation) {
  const auto s = StateVector::basis(2, 2);
  EXPECT_EQ(s[2], Complex(1.0, 0.0));
  EXPECT_EQ(s[0], Complex(0.0, 0.0));
  EXPECT_THROW(StateVector::basis(2, 4), std::out_of_range);
  EXPECT_THROW(StateVector(2, {1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(StateVector(1, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(StateVector(2, {1.0, 0.0}), std::invalid_argument);
}

TEST(StateVector, MatApplyDimensionMismatchThrows) {
  EXPECT_THROW(mat_apply(ComplexMatrix::identity(8), StateVector::basis(2, 0)),
               std::invalid_argument);
}

TEST(StateVector, BitFlipOnQubitZero) {
  const auto op = tensor_product(gate(GateName::SigmaX), gate(GateName::Identity));
  const auto out = mat_apply(op, StateVector::basis(2, 0));
  EXPECT_EQ(out, StateVector::basis(2, 2));
}

TEST(Properties, RandomProductsStayUnitaryAndPreserveNorm) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<ComplexMatrix> factors;
    for (std::size_t q = 0; q < n; ++q) factors.push_back(random_unitary_2(rng));
    const auto op = entangler_j(0.3, n) * tensor_product(std::span<const ComplexMatrix>(factors));
    EXPECT_TRUE(is_unitary(op, 1e-10));
    const auto psi = mat_apply(op, random_state(rng, n));
    EXPECT_NEAR(std::sqrt(psi.norm_squared()), 1.0, 1e-9);
  }
}

TEST(Properties, GlobalPhaseLeavesBornProbabilitiesUnchanged) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto psi = random_state(rng, n);
    const Complex g = std::polar(1.0, phase(rng));
    std::vector<Complex> rotated(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& a : rotated) a *= g;
    const auto p0 = born_probabilities(psi);
    const auto p1 = born_probabilities(StateVector(n, rotated));
    for (std::size_t k = 0; k < p0.size(); ++k) EXPECT_NEAR(p0[k], p1[k], 1e-12);
  }
}

TEST(Born, RejectsUnnormalizedState) {
  EXPECT_THROW(born_probabilities(StateVector::unchecked(2, {1.0, 1.0, 0.0, 0.0})),
               std::invalid_argument);
}

}  // namespace
}  // namespace qgdm::quantum
