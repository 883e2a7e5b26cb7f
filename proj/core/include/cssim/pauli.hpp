// Copyright 2026 The cssim Authors
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

// Symplectic representation of the N-qubit Pauli group.
//
// A Pauli string is stored as two bit vectors x, z of length N. Qubit q lives
// in word q / 64 at bit 63 - q % 64, so comparing words as unsigned integers
// orders strings lexicographically with qubit 0 most significant. The operator
// encoded by (x, z) is
//
//     sigma(x, z) = i^{x.z} (X^x0 Z^z0) (x) ... (x) (X^x{N-1} Z^z{N-1}),
//
// which is Hermitian and equals the usual letter string (x = z = 1 gives Y).
// A PauliTerm additionally carries a power of i and a complex coefficient.
// Computational basis index b has qubit 0 as its most significant bit.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cssim {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr double kCoeffTolerance = 1e-12;
inline constexpr std::size_t kMaxDenseQubits = 14;

inline constexpr std::size_t words_for(std::size_t n_qubits) {
  return (n_qubits + 63) / 64;
}
inline constexpr std::uint64_t qubit_mask(std::size_t q) {
  return std::uint64_t{1} << (63 - (q & 63));
}

/// Single-qubit Pauli letter.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char to_char(Pauli p);

class PauliTerm {
 public:
  PauliTerm() = default;
  /// Identity on `n_qubits` with coefficient 1.
  explicit PauliTerm(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }

  bool x(std::size_t q) const { return (x_[q >> 6] & qubit_mask(q)) != 0; }
  bool z(std::size_t q) const { return (z_[q >> 6] & qubit_mask(q)) != 0; }
  void set_x(std::size_t q, bool v);
  void set_z(std::size_t q, bool v);
  Pauli op(std::size_t q) const {
    return static_cast<Pauli>(static_cast<int>(x(q)) | (static_cast<int>(z(q)) << 1));
  }
  void set_op(std::size_t q, Pauli p);

  /// Power of i multiplying sigma(x, z), reduced mod 4.
  int phase_exponent() const { return phase_; }
  void set_phase_exponent(int k) { phase_ = ((k % 4) + 4) % 4; }

  Complex coefficient() const { return coeff_; }
  void set_coefficient(Complex c) { coeff_ = c; }

  /// coefficient * i^phase_exponent, the full scalar in front of sigma(x, z).
  Complex scalar() const;
  /// Same operator with the phase folded into the coefficient.
  PauliTerm canonical() const;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

  std::size_t weight() const;
  bool is_identity() const;
  std::vector<std::size_t> support() const;

  /// Equal symplectic vectors (ignores phase and coefficient).
  bool same_string(const PauliTerm& other) const;
  /// Letter string such as "XIZY".
  std::string str() const;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;

 private:
  friend class PauliSum;
  friend PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);
  std::size_t n_qubits_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  int phase_ = 0;
  Complex coeff_{1.0, 0.0};
};

/// Parses a letter string over {I, X, Y, Z}. Throws ParseError naming the
/// offending position.
PauliTerm encode_pauli(std::string_view text, Complex coefficient = 1.0);

struct DecodedPauli {
  std::string text;
  Complex phase;  // i^phase_exponent
};
DecodedPauli decode_pauli(const PauliTerm& term);

/// Single-qubit Pauli `p` at position `qubit`.
PauliTerm single_qubit(std::size_t n_qubits, std::size_t qubit, Pauli p, Complex coefficient = 1.0);
/// p^{(x) n}.
PauliTerm uniform_string(std::size_t n_qubits, Pauli p);

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);
/// (x_a . z_b + z_a . x_b) mod 2; zero iff the two strings commute.
int symplectic_product(const PauliTerm& a, const PauliTerm& b);
inline bool commutes(const PauliTerm& a, const PauliTerm& b) {
  return symplectic_product(a, b) == 0;
}
/// Qubit-wise commutation: every single-qubit factor pair commutes.
bool qubitwise_commutes(const PauliTerm& a, const PauliTerm& b);

/// Dense row-major GF(2) matrix with unpacked bytes. Used for small results
/// such as commutation matrices; bulk GF(2) work lives in gf2.hpp.
struct BinaryMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  BinaryMatrix() = default;
  BinaryMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  std::uint8_t operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::uint8_t& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;
};

/// Linear combination of Pauli strings held as packed symplectic matrices
/// X | Z plus a coefficient vector. Rows are always stored with their i-power
/// folded into the coefficient.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits);
  PauliSum(std::size_t n_qubits, std::span<const PauliTerm> terms);

  /// Convenience: {"XX", 1.0}, {"ZI", -0.5}, ...
  static PauliSum from_strings(
      std::initializer_list<std::pair<std::string_view, Complex>> terms);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  std::size_t words_per_row() const { return words_; }

  void add(const PauliTerm& term);
  void reserve(std::size_t m);

  PauliTerm term(std::size_t m) const;
  Complex coefficient(std::size_t m) const { return coeffs_[m]; }
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<const std::uint64_t> x_row(std::size_t m) const {
    return {x_.data() + m * words_, words_};
  }
  std::span<const std::uint64_t> z_row(std::size_t m) const {
    return {z_.data() + m * words_, words_};
  }
  bool x(std::size_t m, std::size_t q) const { return (x_[m * words_ + (q >> 6)] & qubit_mask(q)) != 0; }
  bool z(std::size_t m, std::size_t q) const { return (z_[m * words_ + (q >> 6)] & qubit_mask(q)) != 0; }

  /// Merge duplicate strings, drop |c| <= tol, sort by (X bits, Z bits).
  PauliSum simplify(double tol = kCoeffTolerance) const;

  /// True when every coefficient is real within `tol` (all strings are
  /// Hermitian, so this is Hermiticity of the canonical form).
  bool is_hermitian(double tol = kCoeffTolerance) const;
  double coefficient_norm() const;

  PauliSum scaled(Complex factor) const;
  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator-(const PauliSum& other) const;
  /// Operator product, simplified.
  PauliSum operator*(const PauliSum& other) const;

  /// Terms as letter strings with coefficients, in storage order.
  std::string str() const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  std::size_t n_qubits_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  std::vector<Complex> coeffs_;
};

/// Entry (m, n) = 1 iff A_m and B_n anticommute.
BinaryMatrix commutation_matrix(const PauliSum& a, const PauliSum& b);
/// 1 - <B, B>: adjacency of the compatibility (commutation) graph.
BinaryMatrix compatibility_adjacency(const PauliSum& sum);

/// Conjugation U P U^dagger by U = exp(i * angle * generator). The generator
/// must be a Hermitian Pauli with scalar +-1.
struct CliffordRotation {
  PauliTerm generator;
  double angle = 0.0;
  /// True when angle is +-pi/4, so conjugation keeps single strings single.
  bool is_discrete() const;

  static CliffordRotation quarter_turn(PauliTerm generator, int sign = +1);
  CliffordRotation inverse() const { return {generator, -angle}; }
};

PauliTerm clifford_conjugate(const PauliTerm& term, const CliffordRotation& rotation);
PauliSum clifford_conjugate(const PauliSum& sum, std::span<const CliffordRotation> rotations);

struct QwcGroup {
  PauliSum terms;
  /// Measurement basis letter per qubit; qubits untouched by the group get Z.
  std::vector<Pauli> basis;
};
/// Greedy first-fit over the simplified term order.
std::vector<QwcGroup> qwc_partition(const PauliSum& sum);

/// Dense 2^N x 2^N Kronecker expansion. Throws CapacityError above 14 qubits.
DenseMatrix to_matrix(const PauliTerm& term);
DenseMatrix to_matrix(const PauliSum& sum);

/// Action of a term on computational basis states:
/// term |b> = base * (-1)^{popcount(z & b)} |b ^ x>. Requires N < 64.
struct BasisAction {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex base;
};
BasisAction basis_action(const PauliTerm& term);
BasisAction basis_action(const PauliSum& sum, std::size_t m);

/// Matrix-free application to a state vector.
StateVector apply(const PauliTerm& term, const StateVector& psi);
StateVector apply(const PauliSum& sum, const StateVector& psi);
/// <psi|O|psi>.
Complex expectation(const PauliSum& sum, const StateVector& psi);
Complex expectation(const PauliTerm& term, const StateVector& psi);

/// Operator text format: one term per line, "coeff_real coeff_imag STRING".
/// An optional "# qubits N" line fixes the register size (needed for the zero
/// operator). Coefficients are written with 17 significant digits so that reading the
/// output back reproduces every double exactly. '#' starts a comment.
std::string to_text(const PauliSum& sum);
PauliSum from_text(std::string_view text);
void write_text(std::ostream& os, const PauliSum& sum);

}  // namespace cssim
