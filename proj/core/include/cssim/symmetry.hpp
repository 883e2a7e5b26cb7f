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

// Exact and approximate Z2-symmetry extraction.
//
// Exact symmetries of H = sum_m c_m sigma_m are the kernel of B.Omega, where B
// is the M x 2N symplectic matrix of H. Column reduction of [B.Omega ; 1]
// yields an invertible Q with B.Omega.Q = R; zero columns of R index kernel
// elements and the remaining columns of Q are scored by how much coefficient
// weight they commute with.

#include <cstddef>
#include <span>
#include <vector>

#include "cssim/gf2.hpp"
#include "cssim/pauli.hpp"

namespace cssim {

/// B = X | Z (M x 2N).
BitMatrix symplectic_matrix(const PauliSum& sum);
/// B.Omega mod 2 = Z | X (M x 2N).
BitMatrix omega_matrix(const PauliSum& sum);

/// Pauli string whose symplectic vector (x | z) is column `col` of `q`.
PauliTerm pauli_from_column(const BitMatrix& q, std::size_t col, std::size_t n_qubits);

struct ColumnReduction {
  BitMatrix reduced;    // R, M x 2N
  BitMatrix transform;  // Q, 2N x 2N, invertible
};

/// Column Gaussian elimination. Rows are scanned top to bottom; in each row the
/// leftmost not-yet-pivot column holding a 1 becomes the pivot and is added to
/// every other non-pivot column with a 1 in that row.
ColumnReduction column_reduce(const BitMatrix& b_omega);

/// GF(2)-independent generators of the Pauli strings commuting with every
/// term of `sum` (identity excluded).
std::vector<PauliTerm> kernel_basis(const PauliSum& sum);

struct ScoredCandidate {
  PauliTerm pauli;
  double score = 0.0;
};

/// sqrt(sum of |c_m|^2 over terms commuting with `candidate` / sum of |c_m|^2).
double symmetry_score(const PauliSum& sum, const PauliTerm& candidate);

/// Scores every column of Q for the rows of B.Omega taken in order of
/// decreasing |c_m|, highest score first; ties broken by the symplectic order
/// of the candidate. Throws InvalidArgument on an all-zero operator.
std::vector<ScoredCandidate> approx_symmetry_scores(const PauliSum& sum);

/// Independent, pairwise-commuting Pauli generators with an optional sector.
struct StabilizerSet {
  std::vector<PauliTerm> generators;
  std::vector<int> sector;  // empty until a sector is chosen; otherwise +-1 per generator

  std::size_t size() const { return generators.size(); }
  bool has_sector() const { return !generators.empty() && sector.size() == generators.size(); }
  /// Throws InvalidArgument when the generators commute-check or rank-check fails.
  void validate() const;
};

bool pairwise_commuting(std::span<const PauliTerm> terms);
std::size_t symplectic_rank(std::span<const PauliTerm> terms);
inline bool independent(std::span<const PauliTerm> terms) {
  return symplectic_rank(terms) == terms.size();
}

/// Greedy pick of the K best candidates that stay commuting and independent.
/// `candidates` must already be sorted by decreasing score.
StabilizerSet select_stabilizers(std::span<const ScoredCandidate> candidates, std::size_t k);

}  // namespace cssim
