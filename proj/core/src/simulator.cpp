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

#include "cssim/simulator.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/random.hpp"
#include "json.hpp"

namespace cssim {
namespace {

using Mat2 = Eigen::Matrix2cd;

Mat2 gate_matrix(const Gate& g) {
  const double c = std::cos(g.angle / 2);
  const double s = std::sin(g.angle / 2);
  const double r = std::numbers::sqrt2 / 2;
  Mat2 m;
  switch (g.kind) {
    case GateKind::Ry: m << c, -s, s, c; break;
    case GateKind::Rx: m << c, Complex(0, -s), Complex(0, -s), c; break;
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::S: m << 1, 0, 0, Complex(0, 1); break;
    case GateKind::Sdg: m << 1, 0, 0, Complex(0, -1); break;
    default: throw InvalidArgument("not a single-qubit gate");
  }
  return m;
}

// Applies the gate to a vector of 2^n amplitudes.
void apply_to_vector(Complex* v, const Gate& g, std::size_t n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t b0 = std::uint64_t{1} << (n - 1 - g.q0);
  switch (g.kind) {
    case GateKind::CPhase: {
      const std::uint64_t both = b0 | (std::uint64_t{1} << (n - 1 - g.q1));
      const Complex ph = std::polar(1.0, g.angle);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & both) == both) v[i] *= ph;
      }
      return;
    }
    case GateKind::CNOT: {
      const std::uint64_t b1 = std::uint64_t{1} << (n - 1 - g.q1);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & b0) && !(i & b1)) std::swap(v[i], v[i | b1]);
      }
      return;
    }
    default: {
      const Mat2 m = gate_matrix(g);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & b0) continue;
        const Complex a = v[i];
        const Complex b = v[i | b0];
        v[i] = m(0, 0) * a + m(0, 1) * b;
        v[i | b0] = m(1, 0) * a + m(1, 1) * b;
      }
    }
  }
}

void check_register(std::size_t n, std::size_t limit, const char* what) {
  if (n == 0) throw InvalidArgument(std::string(what) + ": empty register");
  if (n > limit) throw CapacityError(std::string(what) + " is limited to " + std::to_string(limit) + " qubits");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

// ------------------------------------------------------------------ circuit

Circuit& Circuit::push(const Gate& gate) {
  if (gate.q0 >= n_qubits_ || (gate.is_two_qubit() && (gate.q1 >= n_qubits_ || gate.q1 == gate.q0))) {
    throw InvalidArgument("gate qubit index out of range");
  }
  if (!std::isfinite(gate.angle)) throw InvalidArgument("gate angle must be finite");
  gates_.push_back(gate);
  return *this;
}

std::size_t Circuit::two_qubit_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_two_qubit(); }));
}

std::size_t Circuit::cnot_count() const {
  std::size_t n = 0;
  for (const auto& g : gates_) {
    if (g.kind == GateKind::CNOT) n += 1;
    if (g.kind == GateKind::CPhase) n += 2;
  }
  return n;
}

namespace {
constexpr std::array<std::string_view, 7> kGateNames = {"ry", "rx", "h", "s", "sdg", "cphase", "cnot"};
}

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << "qubits " << n_qubits_ << '\n';
  for (const auto& g : gates_) {
    os << kGateNames[static_cast<std::size_t>(g.kind)] << ' ' << g.q0;
    if (g.is_two_qubit()) os << ' ' << g.q1;
    if (g.kind == GateKind::Ry || g.kind == GateKind::Rx || g.kind == GateKind::CPhase) {
      os << ' ' << format_double(g.angle);
    }
    os << '\n';
  }
  return os.str();
}

Circuit Circuit::from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  Circuit c;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    auto fail = [&](const std::string& msg) {
      return ParseError("circuit line " + std::to_string(line_no) + ": " + msg);
    };
    if (!have_header) {
      if (name != "qubits" || !(ls >> c.n_qubits_)) throw fail("expected 'qubits N'");
      have_header = true;
      continue;
    }
    auto it = std::find(kGateNames.begin(), kGateNames.end(), name);
    if (it == kGateNames.end()) throw fail("unknown gate '" + name + "'");
    Gate g;
    g.kind = static_cast<GateKind>(it - kGateNames.begin());
    if (!(ls >> g.q0)) throw fail("missing qubit");
    if (g.is_two_qubit() && !(ls >> g.q1)) throw fail("missing target qubit");
    if (g.kind == GateKind::Ry || g.kind == GateKind::Rx || g.kind == GateKind::CPhase) {
      std::string tok;
      if (!(ls >> tok)) throw fail("missing angle");
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), g.angle);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) throw fail("bad angle '" + tok + "'");
    }
    try {
      c.push(g);
    } catch (const InvalidArgument& e) {
      throw fail(e.what());
    }
  }
  if (!have_header) throw ParseError("circuit text has no 'qubits N' header");
  return c;
}

Circuit build_ansatz(const AnsatzParams& theta, int lambda) {
  if (lambda < 1) throw InvalidArgument("noise scaling factor must be at least 1");
  Circuit c(kAnsatzQubits);
  for (std::size_t q = 0; q < 5; ++q) c.ry(q, theta[q]);
  const double phi = std::numbers::pi / lambda;
  c.sdg(2).h(2).h(1);
  for (int k = 0; k < lambda; ++k) c.cphase(2, 1, phi);
  c.rx(1, theta[5]);
  for (int k = 0; k < lambda; ++k) c.cphase(2, 1, phi);
  c.h(1).h(2).s(2);
  return c;
}

Circuit basis_change(std::span<const Pauli> basis) {
  Circuit c(basis.size());
  for (std::size_t q = 0; q < basis.size(); ++q) {
    if (basis[q] == Pauli::X) c.h(q);
    if (basis[q] == Pauli::Y) c.sdg(q).h(q);
  }
  return c;
}

// -------------------------------------------------------------- statevector

void apply_gate(StateVector& psi, const Gate& gate, std::size_t n_qubits) {
  apply_to_vector(psi.data(), gate, n_qubits);
}

StateVector run_statevector(const Circuit& circuit) {
  check_register(circuit.n_qubits(), kMaxStatevectorQubits, "statevector simulation");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << circuit.n_qubits()));
  psi[0] = 1.0;
  return run_statevector(circuit, std::move(psi));
}

StateVector run_statevector(const Circuit& circuit, StateVector psi) {
  check_register(circuit.n_qubits(), kMaxStatevectorQubits, "statevector simulation");
  if (static_cast<std::size_t>(psi.size()) != (std::size_t{1} << circuit.n_qubits())) {
    throw DimensionError("initial state does not match the circuit register");
  }
  for (const auto& g : circuit.gates()) apply_to_vector(psi.data(), g, circuit.n_qubits());
  return psi;
}

// ------------------------------------------------------------------- noise

Confusion NoiseModel::flip_confusion(double p10, double p01) {
  Confusion a;
  a << 1.0 - p10, p10, p01, 1.0 - p01;
  return a;
}

NoiseModel NoiseModel::uniform(std::size_t n_qubits, double p2, double p_spectator, double p10, double p01) {
  NoiseModel m;
  m.two_qubit_depolarizing_p = p2;
  m.spectator_depolarizing_p = p_spectator;
  m.readout.assign(n_qubits, flip_confusion(p10, p01));
  return m;
}

NoiseModel NoiseModel::surrogate(std::size_t n_qubits) {
  return uniform(n_qubits, 0.005, 0.0, 0.02, 0.04);
}

void NoiseModel::validate() const {
  auto prob = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  if (!prob(two_qubit_depolarizing_p) || !prob(spectator_depolarizing_p)) {
    throw InvalidArgument("depolarizing probabilities must lie in [0, 1]");
  }
  for (const auto& a : readout) {
    for (int i = 0; i < 2; ++i) {
      if (!prob(a(i, 0)) || !prob(a(i, 1)) || std::abs(a(i, 0) + a(i, 1) - 1.0) > 1e-12) {
        throw InvalidArgument("readout confusion rows must be probability vectors");
      }
    }
  }
}

Confusion NoiseModel::confusion(std::size_t q) const {
  if (readout.empty()) return Confusion::Identity();
  if (q >= readout.size()) throw DimensionError("no readout confusion for qubit " + std::to_string(q));
  return readout[q];
}

// ------------------------------------------------------------------ density

void apply_gate(DenseMatrix& rho, const Gate& gate, std::size_t n_qubits) {
  for (Eigen::Index j = 0; j < rho.cols(); ++j) apply_to_vector(rho.col(j).data(), gate, n_qubits);
  rho.adjointInPlace();
  for (Eigen::Index j = 0; j < rho.cols(); ++j) apply_to_vector(rho.col(j).data(), gate, n_qubits);
}

namespace {

// (1 - p) rho + p Tr_mask(rho) (x) I / 2^|mask|.
void depolarize_mask(DenseMatrix& rho, std::uint64_t mask, double p) {
  if (p == 0.0) return;
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  const int k = std::popcount(mask);
  const double norm = 1.0 / static_cast<double>(std::uint64_t{1} << k);
  // Enumerate the sub-register values by walking subsets of mask.
  std::vector<std::uint64_t> subs;
  std::uint64_t s = 0;
  do {
    subs.push_back(s);
    s = (s - mask) & mask;
  } while (s != 0);
  DenseMatrix out = (1.0 - p) * rho;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    for (std::uint64_t j = 0; j < dim; ++j) {
      if (j & mask) continue;
      Complex tr = 0.0;
      for (std::uint64_t v : subs) tr += rho(static_cast<Eigen::Index>(i | v), static_cast<Eigen::Index>(j | v));
      tr *= p * norm;
      for (std::uint64_t v : subs) out(static_cast<Eigen::Index>(i | v), static_cast<Eigen::Index>(j | v)) += tr;
    }
  }
  rho = std::move(out);
}

}  // namespace

void depolarize_pair(DenseMatrix& rho, std::size_t a, std::size_t b, std::size_t n_qubits, double p) {
  depolarize_mask(rho, (std::uint64_t{1} << (n_qubits - 1 - a)) | (std::uint64_t{1} << (n_qubits - 1 - b)), p);
}

void depolarize_qubit(DenseMatrix& rho, std::size_t q, std::size_t n_qubits, double p) {
  depolarize_mask(rho, std::uint64_t{1} << (n_qubits - 1 - q), p);
}

DenseMatrix run_density(const Circuit& circuit, const NoiseModel& noise) {
  check_register(circuit.n_qubits(), kMaxDensityQubits, "density simulation");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << circuit.n_qubits());
  DenseMatrix rho = DenseMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return run_density(circuit, noise, std::move(rho));
}

DenseMatrix run_density(const Circuit& circuit, const NoiseModel& noise, DenseMatrix rho) {
  const std::size_t n = circuit.n_qubits();
  check_register(n, kMaxDensityQubits, "density simulation");
  noise.validate();
  if (static_cast<std::size_t>(rho.rows()) != (std::size_t{1} << n) || rho.rows() != rho.cols()) {
    throw DimensionError("initial density matrix does not match the circuit register");
  }
  for (const auto& g : circuit.gates()) {
    apply_gate(rho, g, n);
    if (!g.is_two_qubit()) continue;
    depolarize_pair(rho, g.q0, g.q1, n, noise.two_qubit_depolarizing_p);
    if (noise.spectator_depolarizing_p > 0.0) {
      for (std::size_t q = 0; q < n; ++q) {
        if (q != g.q0 && q != g.q1) depolarize_qubit(rho, q, n, noise.spectator_depolarizing_p);
      }
    }
  }
  return rho;
}

// ------------------------------------------------------------------- counts

std::uint64_t Counts::shots() const {
  std::uint64_t s = 0;
  for (const auto& [k, v] : data) s += v;
  return s;
}

void Counts::add(std::uint64_t key, std::uint64_t count) {
  if (width() < 64 && (key >> width()) != 0) throw InvalidArgument("bitstring wider than the register");
  if (count > 0) data[key] += count;
}

Counts& Counts::operator+=(const Counts& other) {
  if (other.n_qubits != n_qubits || other.tiles != tiles) throw DimensionError("counts layouts differ");
  for (const auto& [k, v] : other.data) data[k] += v;
  return *this;
}

Counts Counts::untiled() const {
  if (tiles == 1) return *this;
  Counts out{n_qubits, 1, {}};
  const std::uint64_t mask = (std::uint64_t{1} << n_qubits) - 1;
  for (const auto& [k, v] : data) {
    for (std::size_t t = 0; t < tiles; ++t) {
      out.data[(k >> ((tiles - 1 - t) * n_qubits)) & mask] += v;
    }
  }
  return out;
}

std::string Counts::key_string(std::uint64_t key) const {
  std::string s(width(), '0');
  for (std::size_t i = 0; i < width(); ++i) {
    if ((key >> (width() - 1 - i)) & 1U) s[i] = '1';
  }
  return s;
}

std::uint64_t Counts::parse_key(std::string_view bits) const {
  if (bits.size() != width()) {
    throw ParseError("bitstring '" + std::string(bits) + "' has length " + std::to_string(bits.size()) +
                     ", expected " + std::to_string(width()));
  }
  std::uint64_t key = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError("bitstring '" + std::string(bits) + "' has a non-binary character");
    key = (key << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return key;
}

std::string Counts::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : data) j[key_string(k)] = v;
  return j.dump();
}

Counts Counts::from_json(std::string_view text, std::size_t n_qubits, std::size_t tiles) {
  Counts c{n_qubits, tiles, {}};
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("counts JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("counts JSON must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ParseError("counts JSON: count for '" + k + "' must be a nonnegative integer");
    }
    c.add(c.parse_key(k), v.get<std::uint64_t>());
  }
  return c;
}

// ----------------------------------------------------------------- sampling

std::vector<double> measurement_distribution(const StateVector& psi, std::span<const Pauli> basis) {
  const std::size_t n = basis.size();
  if (static_cast<std::size_t>(psi.size()) != (std::size_t{1} << n)) throw DimensionError("basis length mismatch");
  const StateVector rotated = run_statevector(basis_change(basis), psi);
  std::vector<double> p(static_cast<std::size_t>(rotated.size()));
  for (Eigen::Index i = 0; i < rotated.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(rotated[i]);
  return p;
}

std::vector<double> measurement_distribution(const DenseMatrix& rho, std::span<const Pauli> basis) {
  const std::size_t n = basis.size();
  if (static_cast<std::size_t>(rho.rows()) != (std::size_t{1} << n)) throw DimensionError("basis length mismatch");
  DenseMatrix r = rho;
  const Circuit change = basis_change(basis);
  for (const auto& g : change.gates()) apply_gate(r, g, n);
  std::vector<double> p(static_cast<std::size_t>(r.rows()));
  for (Eigen::Index i = 0; i < r.rows(); ++i) p[static_cast<std::size_t>(i)] = std::max(0.0, r(i, i).real());
  return p;
}

Counts sample_distribution(std::span<const double> probs, std::size_t n_qubits, std::size_t shots,
                           const NoiseModel& noise, std::size_t tiles, std::uint64_t seed) {
  if (shots == 0) throw InvalidArgument("shots must be at least 1");
  if (tiles == 0) throw InvalidArgument("tiles must be at least 1");
  if (probs.size() != (std::size_t{1} << n_qubits)) throw DimensionError("distribution size mismatch");
  if (n_qubits * tiles > 64) throw CapacityError("tiled bitstrings are limited to 64 bits");
  noise.validate();

  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw InvalidArgument("probabilities must be nonnegative");
    acc += probs[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw InvalidArgument("distribution has zero mass");

  std::vector<double> flip(2 * n_qubits, 0.0);  // [q][prepared bit]
  bool noisy = !noise.readout.empty();
  for (std::size_t q = 0; q < n_qubits && noisy; ++q) {
    const Confusion a = noise.confusion(q);
    flip[2 * q] = a(0, 1);
    flip[2 * q + 1] = a(1, 0);
  }

  std::vector<std::uint64_t> keys(shots, 0);
  for (std::size_t t = 0; t < tiles; ++t) {
    Rng rng = make_rng(seed, "tile", t);
    for (std::size_t s = 0; s < shots; ++s) {
      const double u = uniform01(rng) * acc;
      auto idx = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (idx >= probs.size()) idx = probs.size() - 1;
      if (noisy) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
          const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
          const double pf = flip[2 * q + ((idx & bit) ? 1 : 0)];
          if (uniform01(rng) < pf) idx ^= bit;
        }
      }
      keys[s] = (keys[s] << n_qubits) | idx;
    }
  }
  Counts c{n_qubits, tiles, {}};
  for (std::uint64_t k : keys) ++c.data[k];
  return c;
}

Counts sample_counts(const StateVector& psi, std::span<const Pauli> basis, std::size_t shots,
                     const NoiseModel& noise, std::size_t tiles, std::uint64_t seed) {
  return sample_distribution(measurement_distribution(psi, basis), basis.size(), shots, noise, tiles, seed);
}

Counts sample_counts(const DenseMatrix& rho, std::span<const Pauli> basis, std::size_t shots,
                     const NoiseModel& noise, std::size_t tiles, std::uint64_t seed) {
  return sample_distribution(measurement_distribution(rho, basis), basis.size(), shots, noise, tiles, seed);
}

// --------------------------------------------------------------- estimation

std::uint64_t measured_support(const PauliSum& group, std::size_t m, std::span<const Pauli> basis) {
  const std::size_t n = group.n_qubits();
  if (basis.size() != n) throw DimensionError("basis length does not match the group");
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const auto p = static_cast<Pauli>(static_cast<int>(group.x(m, q)) | (static_cast<int>(group.z(m, q)) << 1));
    if (p == Pauli::I) continue;
    if (p != basis[q]) throw InvalidArgument("term is not diagonal in the measurement basis");
    mask |= std::uint64_t{1} << (n - 1 - q);
  }
  return mask;
}

namespace {

struct DiagonalObservable {
  std::vector<std::uint64_t> masks;
  std::vector<double> coeffs;

  double operator()(std::uint64_t b) const {
    double g = 0.0;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      g += (std::popcount(b & masks[m]) & 1) ? -coeffs[m] : coeffs[m];
    }
    return g;
  }
};

DiagonalObservable diagonalize(const PauliSum& group, std::span<const Pauli> basis) {
  if (!group.is_hermitian(1e-9)) throw InvalidArgument("measured group must be Hermitian");
  DiagonalObservable d;
  for (std::size_t m = 0; m < group.size(); ++m) {
    d.masks.push_back(measured_support(group, m, basis));
    d.coeffs.push_back(group.coefficient(m).real());
  }
  return d;
}

}  // namespace

Estimate expectation_from_counts(const Counts& counts, const PauliSum& group, std::span<const Pauli> basis) {
  const Counts c = counts.untiled();
  if (c.n_qubits != group.n_qubits()) throw DimensionError("counts and group registers differ");
  const std::uint64_t shots = c.shots();
  if (shots == 0) throw EstimationError("no shots to estimate from");
  const auto g = diagonalize(group, basis);
  double mean = 0.0;
  for (const auto& [k, v] : c.data) mean += static_cast<double>(v) * g(k);
  mean /= static_cast<double>(shots);
  double ss = 0.0;
  for (const auto& [k, v] : c.data) {
    const double d = g(k) - mean;
    ss += static_cast<double>(v) * d * d;
  }
  Estimate e;
  e.value = mean;
  if (shots > 1) e.sigma = std::sqrt(ss / static_cast<double>(shots - 1) / static_cast<double>(shots));
  return e;
}

double expectation_from_distribution(std::span<const double> probs, const PauliSum& group,
                                     std::span<const Pauli> basis) {
  if (probs.size() != (std::size_t{1} << group.n_qubits())) throw DimensionError("distribution size mismatch");
  const auto g = diagonalize(group, basis);
  double e = 0.0;
  for (std::size_t b = 0; b < probs.size(); ++b) e += probs[b] * g(b);
  return e;
}

}  // namespace cssim
