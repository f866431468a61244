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

// Dense complex matrices and state vectors for circuits of at most four
// qubits (dimension <= 16). Everything here is a value type.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgdm::quantum {

using Complex = std::complex<double>;

/// Tolerance for operator identities such as M^dagger M = I (Frobenius norm).
inline constexpr double kOperatorTolerance = 1e-10;
/// Tolerance on the 2-norm of a state vector.
inline constexpr double kNormTolerance = 1e-9;

inline constexpr std::size_t kMinQubits = 2;
inline constexpr std::size_t kMaxQubits = 4;

class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
    if (entries_.size() != rows * cols) {
      throw std::invalid_argument("ComplexMatrix: entry count " +
                                  std::to_string(entries_.size()) +
                                  " != rows*cols " +
                                  std::to_string(rows * cols));
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Complex> entries() const { return entries_; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw std::invalid_argument("ComplexMatrix product: inner dimension mismatch");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (auto& e : out.entries_) e *= scalar;
    return out;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw std::invalid_argument("ComplexMatrix sum: dimension mismatch");
    }
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
    return out;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a + Complex{-1.0, 0.0} * b;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

/// Frobenius norm of (a - b).
inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("frobenius_distance: dimension mismatch");
  }
  double sum = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) sum += std::norm(ea[i] - eb[i]);
  return std::sqrt(sum);
}

/// Kronecker product; a's index is the more significant one.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex coeff = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = coeff * b(br, bc);
        }
      }
    }
  }
  return out;
}

/// Left fold of tensor_product over a non-empty list.
inline ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor_product: no factors");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_product(out, factors[i]);
  return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
  }
  return out;
}

inline bool is_unitary(const ComplexMatrix& m, double tol = kOperatorTolerance) {
  if (!m.is_square()) return false;
  return frobenius_distance(dagger(m) * m, ComplexMatrix::identity(m.rows())) <= tol;
}

class StateVector {
 public:
  /// Validates qubit count, length and normalization.
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
      : StateVector(n_qubits, std::move(amplitudes), Unchecked{}) {
    if (!is_normalized()) {
      throw std::invalid_argument("StateVector: amplitudes not normalized (norm^2 = " +
                                  std::to_string(norm_squared()) + ")");
    }
  }

  /// Skips the normalization check; used for raw amplitude buffers.
  static StateVector unchecked(std::size_t n_qubits, std::vector<Complex> amplitudes) {
    return StateVector(n_qubits, std::move(amplitudes), Unchecked{});
  }

  static StateVector basis(std::size_t n_qubits, std::size_t index) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) {
      throw std::out_of_range("StateVector::basis: index " + std::to_string(index) +
                              " out of range for " + std::to_string(n_qubits) +
                              " qubits");
    }
    std::vector<Complex> amps(dim, Complex{});
    amps[index] = 1.0;
    return StateVector(n_qubits, std::move(amps));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t k) const { return amplitudes_[k]; }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return sum;
  }

  bool is_normalized(double tol = kNormTolerance) const {
    return std::abs(std::sqrt(norm_squared()) - 1.0) <= tol;
  }

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  struct Unchecked {};

  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes, Unchecked)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
      throw std::invalid_argument("StateVector: qubit count must be in [2, 4], got " +
                                  std::to_string(n_qubits));
    }
    if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
      throw std::invalid_argument("StateVector: expected 2^n amplitudes");
    }
  }

  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

inline StateVector mat_apply(const ComplexMatrix& m, const StateVector& s) {
  if (m.cols() != s.dimension() || m.rows() != s.dimension()) {
    throw std::invalid_argument("mat_apply: operator is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + ", state has dimension " +
                                std::to_string(s.dimension()));
  }
  std::vector<Complex> out(s.dimension(), Complex{});
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * s[c];
    out[r] = acc;
  }
  return StateVector::unchecked(s.n_qubits(), std::move(out));
}

}  // namespace qgdm::quantum
