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

#include "cssim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cssim/error.hpp"

namespace cssim {
namespace {

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int dot(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  int n = 0;
  for (std::size_t w = 0; w < a.size(); ++w) n += std::popcount(a[w] & b[w]);
  return n;
}

int xor_dot(std::span<const std::uint64_t> a1, std::span<const std::uint64_t> a2,
            std::span<const std::uint64_t> b1, std::span<const std::uint64_t> b2) {
  int n = 0;
  for (std::size_t w = 0; w < a1.size(); ++w) n += std::popcount((a1[w] ^ a2[w]) & (b1[w] ^ b2[w]));
  return n;
}

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": qubit count mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

// Basis-index masks for registers that fit a state vector.
struct IndexMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int xz = 0;  // popcount(x & z)
};

IndexMasks index_masks(std::span<const std::uint64_t> xw, std::span<const std::uint64_t> zw,
                       std::size_t n) {
  IndexMasks m;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (xw[q >> 6] & qubit_mask(q)) m.x |= bit;
    if (zw[q >> 6] & qubit_mask(q)) m.z |= bit;
  }
  m.xz = std::popcount(m.x & m.z);
  return m;
}

void check_dense(std::size_t n) {
  if (n > kMaxDenseQubits) {
    throw CapacityError("dense export limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits, got " + std::to_string(n));
  }
}

void check_state(std::size_t n, const StateVector& psi) {
  if (n >= 63 || psi.size() != static_cast<Eigen::Index>(std::uint64_t{1} << n)) {
    throw DimensionError("state dimension " + std::to_string(psi.size()) +
                         " does not match " + std::to_string(n) + " qubits");
  }
}

int compare_rows(std::span<const std::uint64_t> xa, std::span<const std::uint64_t> za,
                 std::span<const std::uint64_t> xb, std::span<const std::uint64_t> zb) {
  for (std::size_t w = 0; w < xa.size(); ++w) {
    if (xa[w] != xb[w]) return xa[w] < xb[w] ? -1 : 1;
  }
  for (std::size_t w = 0; w < za.size(); ++w) {
    if (za[w] != zb[w]) return za[w] < zb[w] ? -1 : 1;
  }
  return 0;
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[static_cast<int>(p)];
}

// ---------------------------------------------------------------- PauliTerm

PauliTerm::PauliTerm(std::size_t n_qubits)
    : n_qubits_(n_qubits), x_(words_for(n_qubits), 0), z_(words_for(n_qubits), 0) {}

void PauliTerm::set_x(std::size_t q, bool v) {
  if (v) {
    x_[q >> 6] |= qubit_mask(q);
  } else {
    x_[q >> 6] &= ~qubit_mask(q);
  }
}

void PauliTerm::set_z(std::size_t q, bool v) {
  if (v) {
    z_[q >> 6] |= qubit_mask(q);
  } else {
    z_[q >> 6] &= ~qubit_mask(q);
  }
}

void PauliTerm::set_op(std::size_t q, Pauli p) {
  set_x(q, (static_cast<int>(p) & 1) != 0);
  set_z(q, (static_cast<int>(p) & 2) != 0);
}

Complex PauliTerm::scalar() const { return coeff_ * kIPow[phase_]; }

PauliTerm PauliTerm::canonical() const {
  PauliTerm t = *this;
  t.coeff_ = scalar();
  t.phase_ = 0;
  return t;
}

std::size_t PauliTerm::weight() const {
  std::size_t n = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) n += std::popcount(x_[w] | z_[w]);
  return n;
}

bool PauliTerm::is_identity() const {
  return std::all_of(x_.begin(), x_.end(), [](auto w) { return w == 0; }) &&
         std::all_of(z_.begin(), z_.end(), [](auto w) { return w == 0; });
}

std::vector<std::size_t> PauliTerm::support() const {
  std::vector<std::size_t> s;
  for (std::size_t q = 0; q < n_qubits_; ++q) {
    if (x(q) || z(q)) s.push_back(q);
  }
  return s;
}

bool PauliTerm::same_string(const PauliTerm& other) const {
  return n_qubits_ == other.n_qubits_ && x_ == other.x_ && z_ == other.z_;
}

std::string PauliTerm::str() const {
  std::string s(n_qubits_, 'I');
  for (std::size_t q = 0; q < n_qubits_; ++q) s[q] = to_char(op(q));
  return s;
}

PauliTerm encode_pauli(std::string_view text, Complex coefficient) {
  PauliTerm t(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I': break;
      case 'X': t.set_op(q, Pauli::X); break;
      case 'Y': t.set_op(q, Pauli::Y); break;
      case 'Z': t.set_op(q, Pauli::Z); break;
      default:
        throw ParseError("invalid Pauli character '" + std::string(1, text[q]) +
                         "' at position " + std::to_string(q));
    }
  }
  t.set_coefficient(coefficient);
  return t;
}

DecodedPauli decode_pauli(const PauliTerm& term) {
  return {term.str(), kIPow[term.phase_exponent()]};
}

PauliTerm single_qubit(std::size_t n_qubits, std::size_t qubit, Pauli p, Complex coefficient) {
  PauliTerm t(n_qubits);
  t.set_op(qubit, p);
  t.set_coefficient(coefficient);
  return t;
}

PauliTerm uniform_string(std::size_t n_qubits, Pauli p) {
  PauliTerm t(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) t.set_op(q, p);
  return t;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  check_same_size(a.n_qubits(), b.n_qubits(), "multiply");
  PauliTerm out(a.n_qubits());
  auto ax = a.x_words(), az = a.z_words(), bx = b.x_words(), bz = b.z_words();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    out.x_[w] = ax[w] ^ bx[w];
    out.z_[w] = az[w] ^ bz[w];
  }
  const int e = a.phase_exponent() + b.phase_exponent() + dot(ax, az) + dot(bx, bz) +
                2 * dot(az, bx) - xor_dot(ax, bx, az, bz);
  out.set_phase_exponent(e);
  out.set_coefficient(a.coefficient() * b.coefficient());
  return out;
}

int symplectic_product(const PauliTerm& a, const PauliTerm& b) {
  check_same_size(a.n_qubits(), b.n_qubits(), "symplectic_product");
  return (dot(a.x_words(), b.z_words()) + dot(a.z_words(), b.x_words())) & 1;
}

bool qubitwise_commutes(const PauliTerm& a, const PauliTerm& b) {
  check_same_size(a.n_qubits(), b.n_qubits(), "qubitwise_commutes");
  auto ax = a.x_words(), az = a.z_words(), bx = b.x_words(), bz = b.z_words();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    // A position fails when both factors are non-identity and differ.
    const std::uint64_t both = (ax[w] | az[w]) & (bx[w] | bz[w]);
    const std::uint64_t differ = (ax[w] ^ bx[w]) | (az[w] ^ bz[w]);
    if (both & differ) return false;
  }
  return true;
}

// ----------------------------------------------------------------- PauliSum

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits), words_(words_for(n_qubits)) {}

PauliSum::PauliSum(std::size_t n_qubits, std::span<const PauliTerm> terms) : PauliSum(n_qubits) {
  reserve(terms.size());
  for (const auto& t : terms) add(t);
}

PauliSum PauliSum::from_strings(
    std::initializer_list<std::pair<std::string_view, Complex>> terms) {
  if (terms.size() == 0) throw InvalidArgument("from_strings: no terms");
  PauliSum s(terms.begin()->first.size());
  for (const auto& [text, c] : terms) s.add(encode_pauli(text, c));
  return s;
}

void PauliSum::reserve(std::size_t m) {
  x_.reserve(m * words_);
  z_.reserve(m * words_);
  coeffs_.reserve(m);
}

void PauliSum::add(const PauliTerm& term) {
  check_same_size(n_qubits_, term.n_qubits(), "PauliSum::add");
  x_.insert(x_.end(), term.x_.begin(), term.x_.end());
  z_.insert(z_.end(), term.z_.begin(), term.z_.end());
  coeffs_.push_back(term.scalar());
}

PauliTerm PauliSum::term(std::size_t m) const {
  PauliTerm t(n_qubits_);
  std::copy_n(x_.begin() + static_cast<std::ptrdiff_t>(m * words_), words_, t.x_.begin());
  std::copy_n(z_.begin() + static_cast<std::ptrdiff_t>(m * words_), words_, t.z_.begin());
  t.coeff_ = coeffs_[m];
  return t;
}

PauliSum PauliSum::simplify(double tol) const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_rows(x_row(a), z_row(a), x_row(b), z_row(b)) < 0;
  });
  PauliSum out(n_qubits_);
  out.reserve(size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    Complex c = 0.0;
    while (j < order.size() &&
           compare_rows(x_row(order[i]), z_row(order[i]), x_row(order[j]), z_row(order[j])) == 0) {
      c += coeffs_[order[j]];
      ++j;
    }
    if (std::abs(c) > tol) {
      auto xr = x_row(order[i]);
      auto zr = z_row(order[i]);
      out.x_.insert(out.x_.end(), xr.begin(), xr.end());
      out.z_.insert(out.z_.end(), zr.begin(), zr.end());
      out.coeffs_.push_back(c);
    }
    i = j;
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](Complex c) { return std::abs(c.imag()) <= tol; });
}

double PauliSum::coefficient_norm() const {
  double s = 0.0;
  for (auto c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

PauliSum PauliSum::scaled(Complex factor) const {
  PauliSum out = *this;
  for (auto& c : out.coeffs_) c *= factor;
  return out;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  check_same_size(n_qubits_, other.n_qubits_, "PauliSum::operator+");
  PauliSum out = *this;
  out.x_.insert(out.x_.end(), other.x_.begin(), other.x_.end());
  out.z_.insert(out.z_.end(), other.z_.begin(), other.z_.end());
  out.coeffs_.insert(out.coeffs_.end(), other.coeffs_.begin(), other.coeffs_.end());
  return out.simplify();
}

PauliSum PauliSum::operator-(const PauliSum& other) const { return *this + other.scaled(-1.0); }

PauliSum PauliSum::operator*(const PauliSum& other) const {
  check_same_size(n_qubits_, other.n_qubits_, "PauliSum::operator*");
  PauliSum out(n_qubits_);
  out.reserve(size() * other.size());
  for (std::size_t a = 0; a < size(); ++a) {
    const PauliTerm ta = term(a);
    for (std::size_t b = 0; b < other.size(); ++b) out.add(multiply(ta, other.term(b)));
  }
  return out.simplify();
}

std::string PauliSum::str() const {
  std::ostringstream os;
  for (std::size_t m = 0; m < size(); ++m) {
    const auto c = coeffs_[m];
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
    os << ")" << term(m).str() << (m + 1 < size() ? " + " : "");
  }
  return os.str();
}

// -------------------------------------------------------------- commutation

BinaryMatrix commutation_matrix(const PauliSum& a, const PauliSum& b) {
  check_same_size(a.n_qubits(), b.n_qubits(), "commutation_matrix");
  BinaryMatrix out(a.size(), b.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    for (std::size_t n = 0; n < b.size(); ++n) {
      out(m, n) = static_cast<std::uint8_t>(
          (dot(a.x_row(m), b.z_row(n)) + dot(a.z_row(m), b.x_row(n))) & 1);
    }
  }
  return out;
}

BinaryMatrix compatibility_adjacency(const PauliSum& sum) {
  BinaryMatrix adj = commutation_matrix(sum, sum);
  for (auto& v : adj.data) v ^= 1;
  return adj;
}

// --------------------------------------------------------- Clifford rotation

bool CliffordRotation::is_discrete() const {
  return std::abs(std::abs(angle) - std::numbers::pi / 4) < 1e-15;
}

CliffordRotation CliffordRotation::quarter_turn(PauliTerm generator, int sign) {
  return {std::move(generator), sign >= 0 ? std::numbers::pi / 4 : -std::numbers::pi / 4};
}

namespace {

void check_generator(const PauliTerm& g) {
  const Complex s = g.scalar();
  if (std::abs(s.imag()) > 1e-12 || std::abs(std::abs(s.real()) - 1.0) > 1e-12) {
    throw InvalidArgument("rotation generator must be a Hermitian Pauli with scalar +-1, got " +
                          g.str());
  }
}

}  // namespace

PauliTerm clifford_conjugate(const PauliTerm& term, const CliffordRotation& rotation) {
  check_generator(rotation.generator);
  if (commutes(term, rotation.generator)) return term;
  if (!rotation.is_discrete()) {
    throw InvalidArgument("a non-Clifford angle maps a single Pauli to a sum; use the PauliSum overload");
  }
  // exp(i a G) Q exp(-i a G) = cos(2a) Q + i sin(2a) G Q for {G, Q} = 0.
  PauliTerm out = multiply(rotation.generator, term);
  out.set_phase_exponent(out.phase_exponent() + (rotation.angle > 0 ? 1 : 3));
  return out;
}

PauliSum clifford_conjugate(const PauliSum& sum, std::span<const CliffordRotation> rotations) {
  PauliSum current = sum;
  for (const auto& rot : rotations) {
    check_same_size(sum.n_qubits(), rot.generator.n_qubits(), "clifford_conjugate");
    check_generator(rot.generator);
    PauliSum next(sum.n_qubits());
    next.reserve(current.size() * (rot.is_discrete() ? 1 : 2));
    const double c2 = std::cos(2 * rot.angle);
    const double s2 = std::sin(2 * rot.angle);
    for (std::size_t m = 0; m < current.size(); ++m) {
      PauliTerm t = current.term(m);
      if (commutes(t, rot.generator)) {
        next.add(t);
        continue;
      }
      if (rot.is_discrete()) {
        next.add(clifford_conjugate(t, rot));
        continue;
      }
      PauliTerm rotated = multiply(rot.generator, t);
      rotated.set_coefficient(rotated.coefficient() * Complex(0.0, s2));
      t.set_coefficient(t.coefficient() * c2);
      next.add(t);
      next.add(rotated);
    }
    current = next.simplify(0.0);
  }
  return current.simplify();
}

// ---------------------------------------------------------------------- QWC

std::vector<QwcGroup> qwc_partition(const PauliSum& sum) {
  const PauliSum ordered = sum.simplify();
  const std::size_t n = ordered.n_qubits();
  struct Building {
    std::vector<Pauli> letters;
    std::vector<PauliTerm> terms;
  };
  std::vector<Building> groups;
  for (std::size_t m = 0; m < ordered.size(); ++m) {
    const PauliTerm t = ordered.term(m);
    auto fits = [&](const Building& g) {
      for (std::size_t q = 0; q < n; ++q) {
        const Pauli p = t.op(q);
        if (p != Pauli::I && g.letters[q] != Pauli::I && g.letters[q] != p) return false;
      }
      return true;
    };
    auto it = std::find_if(groups.begin(), groups.end(), fits);
    if (it == groups.end()) {
      groups.push_back({std::vector<Pauli>(n, Pauli::I), {}});
      it = std::prev(groups.end());
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (t.op(q) != Pauli::I) it->letters[q] = t.op(q);
    }
    it->terms.push_back(t);
  }
  std::vector<QwcGroup> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    QwcGroup group{PauliSum(n, g.terms), std::move(g.letters)};
    for (auto& b : group.basis) {
      if (b == Pauli::I) b = Pauli::Z;
    }
    out.push_back(std::move(group));
  }
  return out;
}

// -------------------------------------------------------------- dense/state

DenseMatrix to_matrix(const PauliTerm& term) {
  const std::size_t n = term.n_qubits();
  check_dense(n);
  const auto dim = std::uint64_t{1} << n;
  const IndexMasks m = index_masks(term.x_words(), term.z_words(), n);
  const Complex base = term.scalar() * kIPow[m.xz & 3];
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(m.z & b) & 1) ? -1.0 : 1.0;
    out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) = base * sign;
  }
  return out;
}

DenseMatrix to_matrix(const PauliSum& sum) {
  const std::size_t n = sum.n_qubits();
  check_dense(n);
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (std::size_t t = 0; t < sum.size(); ++t) {
    const IndexMasks m = index_masks(sum.x_row(t), sum.z_row(t), n);
    const Complex base = sum.coefficient(t) * kIPow[m.xz & 3];
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const double sign = (std::popcount(m.z & b) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(b ^ m.x), static_cast<Eigen::Index>(b)) += base * sign;
    }
  }
  return out;
}

BasisAction basis_action(const PauliTerm& term) {
  const IndexMasks m = index_masks(term.x_words(), term.z_words(), term.n_qubits());
  return {m.x, m.z, term.scalar() * kIPow[m.xz & 3]};
}

BasisAction basis_action(const PauliSum& sum, std::size_t t) {
  const IndexMasks m = index_masks(sum.x_row(t), sum.z_row(t), sum.n_qubits());
  return {m.x, m.z, sum.coefficient(t) * kIPow[m.xz & 3]};
}

namespace {

void accumulate(const IndexMasks& m, Complex scalar, const StateVector& psi, StateVector& out) {
  const Complex base = scalar * kIPow[m.xz & 3];
  const auto dim = static_cast<std::uint64_t>(psi.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(m.z & b) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ m.x)] += base * sign * psi[static_cast<Eigen::Index>(b)];
  }
}

}  // namespace

StateVector apply(const PauliTerm& term, const StateVector& psi) {
  check_state(term.n_qubits(), psi);
  StateVector out = StateVector::Zero(psi.size());
  accumulate(index_masks(term.x_words(), term.z_words(), term.n_qubits()), term.scalar(), psi, out);
  return out;
}

StateVector apply(const PauliSum& sum, const StateVector& psi) {
  check_state(sum.n_qubits(), psi);
  StateVector out = StateVector::Zero(psi.size());
  for (std::size_t t = 0; t < sum.size(); ++t) {
    accumulate(index_masks(sum.x_row(t), sum.z_row(t), sum.n_qubits()), sum.coefficient(t), psi, out);
  }
  return out;
}

Complex expectation(const PauliSum& sum, const StateVector& psi) {
  return psi.dot(apply(sum, psi));
}

Complex expectation(const PauliTerm& term, const StateVector& psi) {
  return psi.dot(apply(term, psi));
}

// --------------------------------------------------------------------- text

void write_text(std::ostream& os, const PauliSum& sum) {
  char buf[64];
  os << "# qubits " << sum.n_qubits() << '\n';
  for (std::size_t m = 0; m < sum.size(); ++m) {
    const Complex c = sum.coefficient(m);
    auto r1 = std::to_chars(buf, buf + sizeof(buf), c.real(), std::chars_format::general, 17);
    os.write(buf, r1.ptr - buf);
    os.put(' ');
    auto r2 = std::to_chars(buf, buf + sizeof(buf), c.imag(), std::chars_format::general, 17);
    os.write(buf, r2.ptr - buf);
    os << ' ' << sum.term(m).str() << '\n';
  }
}

std::string to_text(const PauliSum& sum) {
  std::ostringstream os;
  write_text(os, sum);
  return os.str();
}

PauliSum from_text(std::string_view text) {
  PauliSum out;
  bool sized = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("operator text line " + std::to_string(line_no) + ": " + why);
  };
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.starts_with("# qubits ")) {
      std::size_t n = 0;
      const auto digits = line.substr(9);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
      if (ec != std::errc()) fail("bad qubit count directive");
      if (sized && n != out.n_qubits()) fail("qubit count directive disagrees with terms");
      if (!sized) {
        out = PauliSum(n);
        sized = true;
      }
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (fields.empty()) continue;
    if (fields.size() != 3) fail("expected 'coeff_real coeff_imag PAULI_STRING'");
    double re = 0.0, im = 0.0;
    auto parse = [&](std::string_view f, double& v) {
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || p != f.data() + f.size()) fail("bad number '" + std::string(f) + "'");
    };
    parse(fields[0], re);
    parse(fields[1], im);
    PauliTerm t;
    try {
      t = encode_pauli(fields[2], Complex(re, im));
    } catch (const ParseError& e) {
      fail(e.what());
    }
    if (!sized) {
      out = PauliSum(t.n_qubits());
      sized = true;
    } else if (t.n_qubits() != out.n_qubits()) {
      fail("string length " + std::to_string(t.n_qubits()) + " differs from " +
           std::to_string(out.n_qubits()));
    }
    out.add(t);
  }
  if (!sized) throw ParseError("operator text contains no terms and no '# qubits N' directive");
  return out;
}

}  // namespace cssim
