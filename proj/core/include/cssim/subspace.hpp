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

// Qubit tapering and contextual-subspace projection.
//
// A commuting, independent stabilizer set is rotated by quarter-turn Clifford
// rotations onto single-qubit X operators at distinct positions. Fixing those
// qubits to the chosen sector and tracing them out gives the reduced
// Hamiltonian; tapering is the case where every stabilizer is an exact
// symmetry.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cssim/pauli.hpp"
#include "cssim/symmetry.hpp"

namespace cssim {

struct StabilizerRotations {
  std::vector<CliffordRotation> rotations;  // applied in order
  std::vector<std::size_t> positions;       // one per generator, distinct
  std::vector<PauliTerm> images;            // rotated generators, each +-X at positions[k]
};

/// At most two quarter turns per generator; generator k lands on the lowest
/// position of its (rotated) support not used by an earlier generator.
/// Throws InvalidArgument for identity or dependent generators.
StabilizerRotations stabilizer_rotations(const StabilizerSet& stabilizers);

/// Sector from a reference state: nu_k = sign <psi|S_k|psi>. Expectations
/// within 1e-9 of zero are resolved by projecting `hamiltonian` into every
/// tied sector and keeping the lowest ground energy.
std::vector<int> sector_select(const StabilizerSet& stabilizers, const StateVector& psi_ref,
                               const PauliSum& hamiltonian);

struct SubspaceReduction {
  std::size_t n_qubits = 0;                 // full register
  StabilizerSet stabilizers;                // with sector
  std::vector<CliffordRotation> rotations;
  std::vector<std::size_t> removed_positions;
  std::vector<int> image_signs;             // rotated S_k = sign_k X_{removed_k}
  std::vector<std::int64_t> qubit_index_map;  // original -> reduced, -1 if removed
  PauliSum reduced_h;

  std::size_t n_reduced() const { return n_qubits - removed_positions.size(); }
};

/// Rotate, fix the stabilized qubits to their sector eigenvalues, drop terms
/// that act as Y or Z on a fixed qubit and re-index the rest.
SubspaceReduction project_subspace(const PauliSum& hamiltonian, const StabilizerSet& stabilizers);

/// Projects another operator with an existing reduction's rotations and sector.
PauliSum project_operator(const PauliSum& op, const SubspaceReduction& reduction);

/// Inserts the stabilized single-qubit states and undoes the rotations.
StateVector lift_state(const StateVector& sub_state, const SubspaceReduction& reduction);
/// Inverse of lift_state on the stabilized subspace: rotates and contracts the
/// fixed qubits with their sector eigenstates. Not renormalized.
StateVector restrict_state(const StateVector& full_state, const SubspaceReduction& reduction);

/// Pauli expansion of |psi><psi| (coefficients <psi|P|psi> / 2^N), dropping
/// terms with |coefficient| <= tol. Limited to 12 qubits.
PauliSum density_pauli_expansion(const StateVector& psi, double tol = 1e-10);

/// Scores approximate symmetries of |psi><psi|, keeps the K best compatible
/// ones and fixes their sector from psi.
StabilizerSet bias_from_reference(const PauliSum& hamiltonian, const StateVector& psi, std::size_t k);

/// Keeps the `m` largest-magnitude amplitudes (ties to the lower index) and
/// renormalizes.
StateVector truncate_amplitudes(const StateVector& psi, std::size_t m);

/// sqrt(F) psi + sqrt(1 - F) phi with phi a random unit vector orthogonal to
/// psi, so the overlap with psi is exactly F.
StateVector perturb_fidelity(const StateVector& psi, double fidelity, std::uint64_t seed);

// ------------------------------------------------------------ noncontextual

/// H = sum_e c_e (prod_{i in mask_e} S_i) C_{clique_e}, with C_{-1} = identity.
struct NoncontextualModel {
  struct Entry {
    std::uint64_t mask = 0;
    int clique = -1;
    double coefficient = 0.0;
  };

  std::size_t n_qubits = 0;
  std::vector<PauliTerm> symmetry_generators;
  std::vector<PauliTerm> clique_reps;
  std::vector<Entry> entries;

  PauliSum reconstruct() const;
};

/// Splits terms into those commuting with everything and the remainder, which
/// must fall into mutually anticommuting cliques of commuting terms. Cliques
/// are ordered by decreasing coefficient weight; each representative is the
/// first clique member in term order. Symmetry generators are the reduced
/// echelon basis (Z block before X block) of the universally commuting
/// strings and the clique ratios C_j t. Throws ContextualityError naming a
/// violating term triple.
NoncontextualModel noncontextual_decompose(const PauliSum& hamiltonian);

struct NoncontextualState {
  std::vector<int> nu;    // +-1 per symmetry generator
  std::vector<double> r;  // unit vector over clique representatives
};

struct NoncontextualSolution {
  NoncontextualState state;
  double energy = 0.0;
};

double noncontextual_energy(const NoncontextualModel& model, const NoncontextualState& state);

/// Exhaustive over sectors; per sector the clique vector minimizing a + r.b on
/// the unit sphere is r = -b / |b|.
NoncontextualSolution noncontextual_minimize(const NoncontextualModel& model);

// ------------------------------------------------------------- serialization

std::string reduction_to_json(const SubspaceReduction& reduction);
SubspaceReduction reduction_from_json(std::string_view json);

}  // namespace cssim
