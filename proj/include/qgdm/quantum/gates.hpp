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

// Single-qubit gates, the one-parameter rotation U(theta), the n-qubit
// entangler J(gamma) and the Born rule.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgdm/log.hpp"
#include "qgdm/quantum/linalg.hpp"

namespace qgdm::quantum {

enum class GateName { H, SigmaX, SigmaY, SigmaZ, Identity };

inline std::string_view to_string(GateName g) {
  switch (g) {
    case GateName::H: return "H";
    case GateName::SigmaX: return "X";
    case GateName::SigmaY: return "Y";
    case GateName::SigmaZ: return "Z";
    case GateName::Identity: return "I";
  }
  return "?";
}

/// Accepts the short names (H, X, Y, Z, I) and the long ones (SigmaX, ...).
inline std::optional<GateName> parse_gate_name(std::string_view name) {
  if (name == "H" || name == "Hadamard") return GateName::H;
  if (name == "X" || name == "SigmaX" || name == "sx") return GateName::SigmaX;
  if (name == "Y" || name == "SigmaY" || name == "sy") return GateName::SigmaY;
  if (name == "Z" || name == "SigmaZ" || name == "sz") return GateName::SigmaZ;
  if (name == "I" || name == "I2" || name == "Identity") return GateName::Identity;
  return std::nullopt;
}

inline ComplexMatrix gate(GateName name) {
  using namespace std::complex_literals;
  const double r = 1.0 / std::numbers::sqrt2;
  switch (name) {
    case GateName::H: return ComplexMatrix(2, 2, {r, r, r, -r});
    case GateName::SigmaX: return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
    case GateName::SigmaY: return ComplexMatrix(2, 2, {0.0, -1.0i, 1.0i, 0.0});
    case GateName::SigmaZ: return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
    case GateName::Identity: return ComplexMatrix::identity(2);
  }
  throw std::invalid_argument("gate: unknown gate");
}

inline ComplexMatrix gate(std::string_view name) {
  auto parsed = parse_gate_name(name);
  if (!parsed) throw std::invalid_argument("gate: unknown gate name '" + std::string(name) + "'");
  return gate(*parsed);
}

/// Clamps theta into [0, pi], warning when it had to.
inline double clamp_theta(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("unitary_u: theta is not finite");
  const double clamped = std::clamp(theta, 0.0, std::numbers::pi);
  if (clamped != theta) {
    warn("unitary_u: theta " + std::to_string(theta) + " outside [0, pi], clamped to " +
         std::to_string(clamped));
  }
  return clamped;
}

/// Real rotation [[cos t/2, sin t/2], [-sin t/2, cos t/2]].
inline ComplexMatrix unitary_u(double theta) {
  const double t = clamp_theta(theta);
  const double c = std::cos(t / 2.0);
  const double s = std::sin(t / 2.0);
  return ComplexMatrix(2, 2, {c, s, -s, c});
}

inline void require_qubit_count(std::size_t n_qubits, std::string_view who) {
  if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
    throw std::invalid_argument(std::string(who) + ": qubit count must be in [2, 4], got " +
                                std::to_string(n_qubits));
  }
}

/// The n-fold tensor power of sigma_x (a permutation matrix).
inline ComplexMatrix pauli_x_string(std::size_t n_qubits) {
  require_qubit_count(n_qubits, "pauli_x_string");
  const std::size_t dim = std::size_t{1} << n_qubits;
  ComplexMatrix m(dim, dim);
  // Flipping every bit maps basis index k to (dim - 1) - k.
  for (std::size_t k = 0; k < dim; ++k) m(dim - 1 - k, k) = 1.0;
  return m;
}

/// exp(-i gamma/2 X^{(x)n}) in closed form, using (X^{(x)n})^2 = I.
inline ComplexMatrix entangler_j(double gamma, std::size_t n_qubits) {
  constexpr double kSlack = 1e-12;
  if (!(gamma >= -kSlack && gamma <= std::numbers::pi / 2.0 + kSlack)) {
    throw std::invalid_argument("entangler_j: gamma " + std::to_string(gamma) +
                                " outside [0, pi/2]");
  }
  require_qubit_count(n_qubits, "entangler_j");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const Complex c{std::cos(gamma / 2.0), 0.0};
  const Complex s{0.0, -std::sin(gamma / 2.0)};
  return c * ComplexMatrix::identity(dim) + s * pauli_x_string(n_qubits);
}

inline std::vector<double> born_probabilities(const StateVector& s) {
  if (!s.is_normalized()) {
    throw std::invalid_argument("born_probabilities: state not normalized (norm^2 = " +
                                std::to_string(s.norm_squared()) + ")");
  }
  std::vector<double> p;
  p.reserve(s.dimension());
  for (const auto& a : s.amplitudes()) p.push_back(std::norm(a));
  return p;
}

}  // namespace qgdm::quantum
