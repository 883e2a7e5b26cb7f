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

#include "cssim/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "cssim/error.hpp"

namespace cssim {
namespace {

int row_product(const PauliSum& sum, std::size_t m, const PauliTerm& t) {
  auto xr = sum.x_row(m), zr = sum.z_row(m);
  auto xt = t.x_words(), zt = t.z_words();
  int n = 0;
  for (std::size_t w = 0; w < xr.size(); ++w) n += std::popcount((xr[w] & zt[w]) ^ (zr[w] & xt[w]));
  return n & 1;
}

bool symplectic_less(const PauliTerm& a, const PauliTerm& b) {
  auto ax = a.x_words(), bx = b.x_words();
  if (!std::equal(ax.begin(), ax.end(), bx.begin())) {
    return std::lexicographical_compare(ax.begin(), ax.end(), bx.begin(), bx.end());
  }
  auto az = a.z_words(), bz = b.z_words();
  return std::lexicographical_compare(az.begin(), az.end(), bz.begin(), bz.end());
}

}  // namespace

BitMatrix symplectic_matrix(const PauliSum& sum) {
  const std::size_t n = sum.n_qubits();
  BitMatrix b(sum.size(), 2 * n);
  for (std::size_t m = 0; m < sum.size(); ++m) {
    for (std::size_t q = 0; q < n; ++q) {
      if (sum.x(m, q)) b.set(m, q, true);
      if (sum.z(m, q)) b.set(m, n + q, true);
    }
  }
  return b;
}

BitMatrix omega_matrix(const PauliSum& sum) {
  const std::size_t n = sum.n_qubits();
  BitMatrix b(sum.size(), 2 * n);
  for (std::size_t m = 0; m < sum.size(); ++m) {
    for (std::size_t q = 0; q < n; ++q) {
      if (sum.z(m, q)) b.set(m, q, true);
      if (sum.x(m, q)) b.set(m, n + q, true);
    }
  }
  return b;
}

PauliTerm pauli_from_column(const BitMatrix& q, std::size_t col, std::size_t n_qubits) {
  PauliTerm t(n_qubits);
  for (std::size_t i = 0; i < n_qubits; ++i) {
    t.set_x(i, q.get(i, col));
    t.set_z(i, q.get(n_qubits + i, col));
  }
  return t;
}

ColumnReduction column_reduce(const BitMatrix& b_omega) {
  // Work on the transpose so that column operations become packed row XORs.
  const std::size_t cols = b_omega.cols();
  BitMatrix rt = b_omega.transposed();
  BitMatrix qt = BitMatrix::identity(cols);
  std::vector<bool> is_pivot(cols, false);
  std::size_t pivots = 0;
  for (std::size_t m = 0; m < b_omega.rows() && pivots < cols; ++m) {
    std::size_t pivot = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!is_pivot[c] && rt.get(c, m)) {
        pivot = c;
        break;
      }
    }
    if (pivot == cols) continue;
    is_pivot[pivot] = true;
    ++pivots;
    for (std::size_t c = pivot + 1; c < cols; ++c) {
      if (!is_pivot[c] && rt.get(c, m)) {
        rt.add_row(pivot, c);
        qt.add_row(pivot, c);
      }
    }
  }
  return {rt.transposed(), qt.transposed()};
}

std::vector<PauliTerm> kernel_basis(const PauliSum& sum) {
  const std::size_t n = sum.n_qubits();
  const ColumnReduction cr = column_reduce(omega_matrix(sum));
  std::vector<PauliTerm> out;
  for (std::size_t c = 0; c < 2 * n; ++c) {
    if (cr.reduced.column_is_zero(c)) out.push_back(pauli_from_column(cr.transform, c, n));
  }
  return out;
}

double symmetry_score(const PauliSum& sum, const PauliTerm& candidate) {
  double total = 0.0;
  double commuting = 0.0;
  for (std::size_t m = 0; m < sum.size(); ++m) {
    const double w = std::norm(sum.coefficient(m));
    total += w;
    if (row_product(sum, m, candidate) == 0) commuting += w;
  }
  if (total == 0.0) throw InvalidArgument("symmetry score of an operator with all-zero coefficients");
  return std::sqrt(commuting / total);
}

std::vector<ScoredCandidate> approx_symmetry_scores(const PauliSum& sum) {
  if (sum.coefficient_norm() == 0.0) {
    throw InvalidArgument("approximate symmetries of an operator with all-zero coefficients");
  }
  const std::size_t n = sum.n_qubits();
  // Rows enter the reduction by decreasing weight, so a column that becomes a
  // pivot late already commutes with every heavier term.
  std::vector<std::size_t> order(sum.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::norm(sum.coefficient(a)) > std::norm(sum.coefficient(b));
  });
  const BitMatrix omega = omega_matrix(sum);
  BitMatrix sorted(omega.rows(), omega.cols());
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::copy(omega.row(order[r]).begin(), omega.row(order[r]).end(), sorted.row(r).begin());
  }
  const ColumnReduction cr = column_reduce(sorted);
  std::vector<ScoredCandidate> out;
  out.reserve(2 * n);
  for (std::size_t c = 0; c < 2 * n; ++c) {
    PauliTerm p = pauli_from_column(cr.transform, c, n);
    if (p.is_identity()) continue;
    const double w = symmetry_score(sum, p);
    out.push_back({std::move(p), w});
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return symplectic_less(a.pauli, b.pauli);
  });
  return out;
}

bool pairwise_commuting(std::span<const PauliTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!commutes(terms[i], terms[j])) return false;
    }
  }
  return true;
}

std::size_t symplectic_rank(std::span<const PauliTerm> terms) {
  if (terms.empty()) return 0;
  const std::size_t n = terms.front().n_qubits();
  BitMatrix m(terms.size(), 2 * n);
  for (std::size_t r = 0; r < terms.size(); ++r) {
    for (std::size_t q = 0; q < n; ++q) {
      m.set(r, q, terms[r].x(q));
      m.set(r, n + q, terms[r].z(q));
    }
  }
  return gf2_rank(std::move(m));
}

void StabilizerSet::validate() const {
  if (!pairwise_commuting(generators)) throw InvalidArgument("stabilizer generators do not commute");
  if (!independent(generators)) throw InvalidArgument("stabilizer generators are not independent");
  for (const auto& g : generators) {
    if (g.is_identity()) throw InvalidArgument("identity is not a valid stabilizer generator");
  }
  if (!sector.empty()) {
    if (sector.size() != generators.size()) throw InvalidArgument("sector length differs from generator count");
    for (int v : sector) {
      if (v != 1 && v != -1) throw InvalidArgument("sector entries must be +1 or -1");
    }
  }
}

StabilizerSet select_stabilizers(std::span<const ScoredCandidate> candidates, std::size_t k) {
  StabilizerSet out;
  if (k == 0) return out;
  if (!candidates.empty() && k > candidates.front().pauli.n_qubits()) {
    throw InvalidArgument("cannot select more stabilizers than qubits");
  }
  for (const auto& cand : candidates) {
    if (out.size() == k) break;
    if (cand.pauli.is_identity()) continue;
    const bool compatible = std::all_of(out.generators.begin(), out.generators.end(),
                                        [&](const PauliTerm& g) { return commutes(g, cand.pauli); });
    if (!compatible) continue;
    out.generators.push_back(cand.pauli.canonical());
    if (!independent(out.generators)) out.generators.pop_back();
  }
  if (out.size() < k) {
    throw InvalidArgument("only " + std::to_string(out.size()) +
                          " compatible stabilizer candidates, " + std::to_string(k) + " requested");
  }
  return out;
}

}  // namespace cssim
