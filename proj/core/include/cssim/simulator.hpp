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

// Gate-level circuits, statevector and density-matrix execution, and sampled
// measurement with readout noise.
//
// Bitstrings are written with qubit 0 leftmost. A Counts key stores the
// bitstring as an integer whose most significant of `width` bits is the
// leftmost character; tile t occupies characters [t N, (t + 1) N).

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cssim/pauli.hpp"

namespace cssim {

enum class GateKind : std::uint8_t { Ry, Rx, H, S, Sdg, CPhase, CNOT };

struct Gate {
  GateKind kind = GateKind::H;
  std::size_t q0 = 0;  // target, or control for two-qubit gates
  std::size_t q1 = 0;  // target of two-qubit gates
  double angle = 0.0;

  bool is_two_qubit() const { return kind == GateKind::CPhase || kind == GateKind::CNOT; }
  friend bool operator==(const Gate&, const Gate&) = default;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& ry(std::size_t q, double theta) { return push({GateKind::Ry, q, 0, theta}); }
  Circuit& rx(std::size_t q, double theta) { return push({GateKind::Rx, q, 0, theta}); }
  Circuit& h(std::size_t q) { return push({GateKind::H, q, 0, 0.0}); }
  Circuit& s(std::size_t q) { return push({GateKind::S, q, 0, 0.0}); }
  Circuit& sdg(std::size_t q) { return push({GateKind::Sdg, q, 0, 0.0}); }
  Circuit& cphase(std::size_t c, std::size_t t, double phi) { return push({GateKind::CPhase, c, t, phi}); }
  Circuit& cnot(std::size_t c, std::size_t t) { return push({GateKind::CNOT, c, t, 0.0}); }
  /// Throws InvalidArgument on a bad index or non-finite angle.
  Circuit& push(const Gate& gate);

  std::size_t two_qubit_count() const;
  /// CNOTs after lowering: each CPhase becomes two CNOTs.
  std::size_t cnot_count() const;

  /// One gate per line: "ry 0 1.5707963267948966", "cphase 2 1 0.785...".
  std::string to_text() const;
  static Circuit from_text(std::string_view text);

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
};

inline constexpr std::size_t kAnsatzQubits = 5;
inline constexpr std::size_t kAnsatzParams = 6;
using AnsatzParams = std::array<double, kAnsatzParams>;

/// Ry(theta_n) on qubits 0..4, then exp(-i theta_5 / 2 Z_1 Y_2) built as
/// S^dagger, H on qubit 2 and H on qubit 1, lambda CPhase(pi / lambda)
/// gates, Rx(theta_5) on qubit 1, lambda more CPhase gates and the inverse
/// basis change. Throws InvalidArgument for lambda < 1.
Circuit build_ansatz(const AnsatzParams& theta, int lambda);

/// Single-qubit rotations that map `basis[q]` onto Z before measurement:
/// X -> H, Y -> S^dagger then H.
Circuit basis_change(std::span<const Pauli> basis);

inline constexpr std::size_t kMaxStatevectorQubits = 20;
inline constexpr std::size_t kMaxDensityQubits = 10;

StateVector run_statevector(const Circuit& circuit);
StateVector run_statevector(const Circuit& circuit, StateVector psi);

/// Readout confusion A with A(i, j) = P(measure j | prepared i).
using Confusion = Eigen::Matrix2d;

struct NoiseModel {
  double two_qubit_depolarizing_p = 0.0;
  /// Single-qubit depolarizing applied to every qubit outside the pair after
  /// each two-qubit gate. Models crosstalk onto idle qubits.
  double spectator_depolarizing_p = 0.0;
  std::vector<Confusion> readout;  // empty = perfect readout

  static NoiseModel ideal() { return {}; }
  /// P(1|0) = p10 and P(0|1) = p01 on every qubit.
  static Confusion flip_confusion(double p10, double p01);
  static NoiseModel uniform(std::size_t n_qubits, double p2, double p_spectator, double p10, double p01);
  /// Default hardware surrogate: two-qubit depolarizing 0.005, no spectator
  /// noise, readout P(1|0) = 0.02 and P(0|1) = 0.04 on every qubit.
  static NoiseModel surrogate(std::size_t n_qubits);

  /// Throws InvalidArgument on probabilities outside [0, 1] or rows not summing to 1.
  void validate() const;
  Confusion confusion(std::size_t q) const;
};

/// Noisy execution from |0...0><0...0|. Each gate acts as a unitary channel;
/// after every CPhase and CNOT the pair gets two-qubit depolarizing noise and
/// the other qubits spectator noise. Limited to 10 qubits.
DenseMatrix run_density(const Circuit& circuit, const NoiseModel& noise);
DenseMatrix run_density(const Circuit& circuit, const NoiseModel& noise, DenseMatrix rho);

/// U rho U^dagger for a single gate.
void apply_gate(DenseMatrix& rho, const Gate& gate, std::size_t n_qubits);
void apply_gate(StateVector& psi, const Gate& gate, std::size_t n_qubits);
/// (1 - p) rho + p Tr_ab(rho) (x) I / 4.
void depolarize_pair(DenseMatrix& rho, std::size_t a, std::size_t b, std::size_t n_qubits, double p);
/// (1 - p) rho + p Tr_q(rho) (x) I / 2.
void depolarize_qubit(DenseMatrix& rho, std::size_t q, std::size_t n_qubits, double p);

struct Counts {
  std::size_t n_qubits = 0;  // per tile
  std::size_t tiles = 1;
  std::map<std::uint64_t, std::uint64_t> data;

  std::size_t width() const { return n_qubits * tiles; }
  std::uint64_t shots() const;
  void add(std::uint64_t key, std::uint64_t count = 1);
  /// Merge counts with the same layout.
  Counts& operator+=(const Counts& other);

  /// Splits every tiled bitstring into its per-tile N-bit samples.
  Counts untiled() const;
  /// Bit of `qubit` in a per-tile key (tiles == 1).
  bool bit(std::uint64_t key, std::size_t qubit) const { return (key >> (n_qubits - 1 - qubit)) & 1U; }

  std::string key_string(std::uint64_t key) const;
  std::uint64_t parse_key(std::string_view bits) const;

  /// {"bitstring": count, ...} in key order.
  std::string to_json() const;
  static Counts from_json(std::string_view json, std::size_t n_qubits, std::size_t tiles = 1);

  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Born probabilities after the basis change of `basis`.
std::vector<double> measurement_distribution(const StateVector& psi, std::span<const Pauli> basis);
std::vector<double> measurement_distribution(const DenseMatrix& rho, std::span<const Pauli> basis);

/// Draws `shots` samples per tile from `probs`, tile t using stream
/// (seed, "tile", t), then flips each bit with the readout confusion. Each
/// tiled key concatenates the s-th sample of every tile.
Counts sample_distribution(std::span<const double> probs, std::size_t n_qubits, std::size_t shots,
                           const NoiseModel& noise, std::size_t tiles, std::uint64_t seed);
Counts sample_counts(const StateVector& psi, std::span<const Pauli> basis, std::size_t shots,
                     const NoiseModel& noise, std::size_t tiles, std::uint64_t seed);
Counts sample_counts(const DenseMatrix& rho, std::span<const Pauli> basis, std::size_t shots,
                     const NoiseModel& noise, std::size_t tiles, std::uint64_t seed);

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// Mean of g(b) = sum_m c_m (-1)^{|b & support_m|} over the (untiled) shots,
/// with the standard error of the mean. Every term of `group` must be
/// diagonal in `basis`. Throws EstimationError on empty counts.
Estimate expectation_from_counts(const Counts& counts, const PauliSum& group, std::span<const Pauli> basis);
/// Exact value of the same estimator on a probability vector.
double expectation_from_distribution(std::span<const double> probs, const PauliSum& group,
                                     std::span<const Pauli> basis);

/// Bit mask (qubit 0 most significant) of the qubits a term touches; checks
/// that each letter matches the measured basis.
std::uint64_t measured_support(const PauliSum& group, std::size_t m, std::span<const Pauli> basis);

}  // namespace cssim
