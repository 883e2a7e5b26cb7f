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

// Heisenberg Hamiltonians on user-supplied lattices and the exact
// diagonalization observables built on them.

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cssim/pauli.hpp"

namespace cssim {

struct LatticeSpec {
  std::size_t n_sites = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // k < l

  /// Throws InvalidArgument on out-of-range, unordered or duplicate edges.
  void validate() const;
  std::vector<std::size_t> degrees() const;
};

/// Single 12-site star cell of the Kagome lattice (18 edges).
LatticeSpec kagome_cell_edges();

struct ModelParams {
  double jx = -1.0;
  double jy = -1.0;
  double jz = -1.0;
  double h = 0.0;

  static ModelParams xxx(double j, double h) { return {j, j, j, h}; }
};

/// H = -sum_edges [Jx XX + Jy YY + Jz ZZ] - h sum_n Z, simplified.
PauliSum build_heisenberg(const LatticeSpec& lattice, const ModelParams& params);

/// Exact spectral decomposition of a Hermitian Pauli sum. The Hamiltonian is
/// split into blocks of computational basis states connected by nonzero
/// off-diagonal matrix elements and each block is diagonalized densely.
/// Eigenvectors of a block are computed the first time they are needed.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const PauliSum& hamiltonian);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << n_qubits_; }
  std::size_t block_count() const { return blocks_.size(); }

  /// All eigenvalues, ascending.
  std::vector<double> eigenvalues() const;
  /// Eigenvector for the i-th lowest eigenvalue (full-register amplitudes).
  StateVector eigenvector(std::size_t i) const;
  double eigenvalue(std::size_t i) const { return order_[i].value; }

  /// exp(-i H t) psi.
  StateVector evolve(const StateVector& psi, double t) const;

 private:
  struct Block {
    std::vector<std::uint64_t> states;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;  // empty until requested
  };
  const Eigen::MatrixXcd& block_vectors(std::size_t b) const;
  struct Entry {
    double value;
    std::size_t block;
    Eigen::Index column;
  };
  std::size_t n_qubits_ = 0;
  mutable std::vector<Block> blocks_;
  std::vector<Entry> order_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
};

struct Eigenpairs {
  std::vector<double> values;         // ascending
  std::vector<StateVector> vectors;   // orthonormal
};

/// The k lowest eigenpairs (all of them if k exceeds the dimension).
/// Throws CapacityError above 14 qubits.
Eigenpairs exact_eigs(const PauliSum& hamiltonian, std::size_t k);

/// The k lowest eigenvalues without forming eigenvectors.
std::vector<double> lowest_eigenvalues(const PauliSum& hamiltonian, std::size_t k);
/// Every eigenpair within `tol` of the minimum eigenvalue.
Eigenpairs ground_space(const PauliSum& hamiltonian, double tol = 1e-8);

/// Deterministic representative of a (possibly degenerate) eigenspace.
///
/// Repeatedly compresses each probe operator into the current subspace and
/// keeps the lowest eigenspace of the probe with the most negative lowest
/// eigenvalue among those that split the subspace (first probe wins ties).
/// The returned vector has its largest amplitude real and positive.
StateVector space_representative(std::span<const StateVector> space, std::span<const PauliSum> probes);

/// Probe list used for lattice ground states: -sum_n Z_n (prefer the largest
/// magnetization), then Z_k Z_l on every edge (prefer a formed singlet bond).
std::vector<PauliSum> lattice_probes(const LatticeSpec& lattice);

/// Ground-state representative of a lattice Hamiltonian (the all-up state for
/// the zero operator).
StateVector ground_representative(const PauliSum& hamiltonian, const LatticeSpec& lattice);

/// |sum_n <Z_n>| / N.
double magnetization(const StateVector& state);

struct PhasePoint {
  double j = 0.0;
  double h = 0.0;
  double e0 = 0.0;
  double mz = 0.0;
};

/// XXX-model scan over J x h. Points are evaluated in parallel.
std::vector<PhasePoint> phase_scan(const LatticeSpec& lattice, std::span<const double> j_grid,
                                   std::span<const double> h_grid);

/// <psi0| e^{iHt} O e^{-iHt} |psi0> for each t (real part; the imaginary part
/// vanishes for Hermitian O).
std::vector<double> evolve_expectation(const PauliSum& hamiltonian, const StateVector& psi0,
                                       const PauliSum& observable, std::span<const double> times);

/// Symmetric N x N matrix of I(k:l) = S(k) + S(l) - S(kl) in nats, zero diagonal.
Eigen::MatrixXd mutual_information_matrix(const StateVector& state);

/// von Neumann entropy (nats) of a density matrix.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

/// sum_i |<psi|g_i>|^2 for an orthonormal set g.
double ground_overlap(const StateVector& psi, std::span<const StateVector> groundspace);

/// |b> on n qubits, qubit 0 the most significant bit of b.
StateVector basis_state(std::size_t n_qubits, std::uint64_t index);

}  // namespace cssim
