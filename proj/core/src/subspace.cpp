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

#include "cssim/subspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/model.hpp"
#include "cssim/random.hpp"
#include "json.hpp"

namespace cssim {
namespace {

constexpr double kTieTolerance = 1e-9;

double real_sign(Complex c) {
  if (std::abs(c.imag()) > 1e-9 || std::abs(std::abs(c.real()) - 1.0) > 1e-9) {
    throw InvalidArgument("expected a Pauli with scalar +-1");
  }
  return c.real() > 0 ? 1.0 : -1.0;
}

// Hermitian string with unit scalar.
PauliTerm unit_string(const PauliTerm& t) {
  PauliTerm u = t;
  u.set_phase_exponent(0);
  u.set_coefficient(1.0);
  return u;
}

PauliTerm apply_rotations(PauliTerm t, std::span<const CliffordRotation> rotations) {
  for (const auto& r : rotations) t = clifford_conjugate(t, r);
  return t.canonical();
}

// exp(i a G) psi.
StateVector rotate_state(const StateVector& psi, const CliffordRotation& r) {
  return std::cos(r.angle) * psi + Complex(0.0, std::sin(r.angle)) * apply(r.generator, psi);
}

}  // namespace

StabilizerRotations stabilizer_rotations(const StabilizerSet& stabilizers) {
  stabilizers.validate();
  StabilizerRotations out;
  if (stabilizers.generators.empty()) return out;
  const std::size_t n = stabilizers.generators.front().n_qubits();
  std::vector<bool> used(n, false);

  for (const auto& gen : stabilizers.generators) {
    PauliTerm s = apply_rotations(gen, out.rotations);
    if (s.is_identity()) throw InvalidArgument("stabilizer reduces to the identity");
    std::size_t q = n;
    for (std::size_t p : s.support()) {
      if (!used[p]) {
        q = p;
        break;
      }
    }
    if (q == n) throw InvalidArgument("stabilizer generators are dependent");

    const bool single = s.weight() == 1;
    if (!(single && s.op(q) == Pauli::X)) {
      if (s.op(q) == Pauli::X) {
        // Turn the X on q into a Y so that X_q S below is Hermitian up to i.
        auto rz = CliffordRotation::quarter_turn(single_qubit(n, q, Pauli::Z));
        out.rotations.push_back(rz);
        s = clifford_conjugate(s, rz).canonical();
      }
      // G = -i X_q S anticommutes with S and maps it onto +X_q.
      PauliTerm g = multiply(single_qubit(n, q, Pauli::X), s);
      g.set_coefficient(g.coefficient() * Complex(0.0, -1.0));
      g = g.canonical();
      const double sign = real_sign(g.scalar());
      g = unit_string(g);
      g.set_coefficient(sign);
      out.rotations.push_back(CliffordRotation::quarter_turn(g));
      s = clifford_conjugate(s, out.rotations.back()).canonical();
    }
    used[q] = true;
    out.positions.push_back(q);
  }

  for (std::size_t k = 0; k < stabilizers.size(); ++k) {
    PauliTerm img = apply_rotations(stabilizers.generators[k], out.rotations);
    if (img.weight() != 1 || img.op(out.positions[k]) != Pauli::X) {
      throw InvalidArgument("stabilizer rotation failed to isolate a single qubit");
    }
    real_sign(img.scalar());
    out.images.push_back(img);
  }
  return out;
}

std::vector<int> sector_select(const StabilizerSet& stabilizers, const StateVector& psi_ref,
                               const PauliSum& hamiltonian) {
  std::vector<int> sector(stabilizers.size(), 1);
  std::vector<std::size_t> tied;
  for (std::size_t k = 0; k < stabilizers.size(); ++k) {
    const double e = expectation(stabilizers.generators[k], psi_ref).real();
    if (std::abs(e) <= kTieTolerance) {
      tied.push_back(k);
    } else {
      sector[k] = e > 0 ? 1 : -1;
    }
  }
  if (tied.empty() || hamiltonian.empty()) return sector;
  if (tied.size() > 16) throw CapacityError("too many tied stabilizer sectors");

  StabilizerSet trial = stabilizers;
  std::vector<int> best = sector;
  double best_e = 0.0;
  bool have = false;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tied.size()); ++mask) {
    trial.sector = sector;
    for (std::size_t t = 0; t < tied.size(); ++t) {
      trial.sector[tied[t]] = ((mask >> t) & 1U) ? -1 : 1;
    }
    const auto red = project_subspace(hamiltonian, trial);
    double e = 0.0;
    if (red.n_reduced() == 0) {
      for (Complex c : red.reduced_h.coefficients()) e += c.real();
    } else {
      e = exact_eigs(red.reduced_h, 1).values.front();
    }
    if (!have || e < best_e - kTieTolerance) {
      have = true;
      best_e = e;
      best = trial.sector;
    }
  }
  return best;
}

namespace {

// Keeps terms acting as I or X on the removed qubits, applies the sector
// signs and re-indexes onto the remaining qubits.
PauliSum fix_and_trace(const PauliSum& rotated, const SubspaceReduction& r) {
  const std::size_t n_red = r.n_reduced();
  PauliSum out(n_red);
  for (std::size_t m = 0; m < rotated.size(); ++m) {
    Complex c = rotated.coefficient(m);
    bool keep = true;
    for (std::size_t k = 0; k < r.removed_positions.size(); ++k) {
      const std::size_t q = r.removed_positions[k];
      if (rotated.z(m, q)) {
        keep = false;
        break;
      }
      if (rotated.x(m, q)) c *= static_cast<double>(r.stabilizers.sector[k] * r.image_signs[k]);
    }
    if (!keep) continue;
    PauliTerm t(n_red);
    for (std::size_t q = 0; q < r.n_qubits; ++q) {
      const auto idx = r.qubit_index_map[q];
      if (idx < 0) continue;
      t.set_x(static_cast<std::size_t>(idx), rotated.x(m, q));
      t.set_z(static_cast<std::size_t>(idx), rotated.z(m, q));
    }
    t.set_coefficient(c);
    out.add(t);
  }
  return out.simplify();
}

}  // namespace

SubspaceReduction project_subspace(const PauliSum& hamiltonian, const StabilizerSet& stabilizers) {
  if (!stabilizers.generators.empty() && !stabilizers.has_sector()) {
    throw InvalidArgument("stabilizer sector has not been chosen");
  }
  for (int s : stabilizers.sector) {
    if (s != 1 && s != -1) throw InvalidArgument("sector entries must be +1 or -1");
  }
  for (const auto& g : stabilizers.generators) {
    if (g.n_qubits() != hamiltonian.n_qubits()) {
      throw DimensionError("stabilizer and Hamiltonian qubit counts differ");
    }
  }
  SubspaceReduction r;
  r.n_qubits = hamiltonian.n_qubits();
  r.stabilizers = stabilizers;
  auto rot = stabilizer_rotations(stabilizers);
  r.rotations = std::move(rot.rotations);
  r.removed_positions = rot.positions;
  for (const auto& img : rot.images) r.image_signs.push_back(real_sign(img.scalar()) > 0 ? 1 : -1);
  r.qubit_index_map.assign(r.n_qubits, 0);
  for (std::size_t q : r.removed_positions) r.qubit_index_map[q] = -1;
  std::int64_t next = 0;
  for (auto& v : r.qubit_index_map) {
    if (v == 0) v = next++;
  }
  r.reduced_h = project_operator(hamiltonian, r);
  return r;
}

PauliSum project_operator(const PauliSum& op, const SubspaceReduction& reduction) {
  if (op.n_qubits() != reduction.n_qubits) throw DimensionError("operator qubit count mismatch");
  return fix_and_trace(clifford_conjugate(op, reduction.rotations), reduction);
}

StateVector lift_state(const StateVector& sub_state, const SubspaceReduction& r) {
  const std::size_t n = r.n_qubits;
  const std::size_t n_red = r.n_reduced();
  if (static_cast<std::size_t>(sub_state.size()) != (std::size_t{1} << n_red)) {
    throw DimensionError("sub-state size does not match the reduced register");
  }
  if (n > kMaxDenseQubits) throw CapacityError("state lifting is limited to 14 qubits");

  StateVector rotated = StateVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  const double amp = std::pow(std::sqrt(0.5), static_cast<double>(r.removed_positions.size()));
  const std::size_t n_removed = r.removed_positions.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n_red); ++s) {
    const Complex a = sub_state[static_cast<Eigen::Index>(s)];
    if (a == Complex(0.0)) continue;
    std::uint64_t base = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const auto idx = r.qubit_index_map[q];
      if (idx >= 0 && ((s >> (n_red - 1 - static_cast<std::size_t>(idx))) & 1U)) {
        base |= std::uint64_t{1} << (n - 1 - q);
      }
    }
    // Removed qubit k is in the X eigenstate with eigenvalue nu_k * sign_k.
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << n_removed); ++f) {
      std::uint64_t b = base;
      double sgn = 1.0;
      for (std::size_t k = 0; k < n_removed; ++k) {
        if ((f >> k) & 1U) {
          b |= std::uint64_t{1} << (n - 1 - r.removed_positions[k]);
          sgn *= r.stabilizers.sector[k] * r.image_signs[k];
        }
      }
      rotated[static_cast<Eigen::Index>(b)] += a * amp * sgn;
    }
  }
  for (auto it = r.rotations.rbegin(); it != r.rotations.rend(); ++it) {
    rotated = rotate_state(rotated, it->inverse());
  }
  return rotated;
}

StateVector restrict_state(const StateVector& full_state, const SubspaceReduction& r) {
  const std::size_t n = r.n_qubits;
  if (static_cast<std::size_t>(full_state.size()) != (std::size_t{1} << n)) {
    throw DimensionError("state size does not match the register");
  }
  StateVector psi = full_state;
  for (const auto& rot : r.rotations) psi = rotate_state(psi, rot);

  const std::size_t n_red = r.n_reduced();
  StateVector out = StateVector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n_red));
  const double amp = std::pow(std::sqrt(0.5), static_cast<double>(r.removed_positions.size()));
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    const Complex a = psi[static_cast<Eigen::Index>(b)];
    if (a == Complex(0.0)) continue;
    double sgn = 1.0;
    for (std::size_t k = 0; k < r.removed_positions.size(); ++k) {
      if ((b >> (n - 1 - r.removed_positions[k])) & 1U) sgn *= r.stabilizers.sector[k] * r.image_signs[k];
    }
    std::uint64_t s = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const auto idx = r.qubit_index_map[q];
      if (idx >= 0 && ((b >> (n - 1 - q)) & 1U)) {
        s |= std::uint64_t{1} << (n_red - 1 - static_cast<std::size_t>(idx));
      }
    }
    out[static_cast<Eigen::Index>(s)] += a * amp * sgn;
  }
  return out;
}

PauliSum density_pauli_expansion(const StateVector& psi, double tol) {
  const auto dim = static_cast<std::uint64_t>(psi.size());
  if (dim == 0 || !std::has_single_bit(dim)) throw DimensionError("state size must be a power of two");
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  if (n > 12) throw CapacityError("density expansion is limited to 12 qubits");

  PauliSum out(n);
  const double inv_dim = 1.0 / static_cast<double>(dim);
  std::vector<Complex> f(dim);
  static const Complex kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      f[b] = std::conj(psi[static_cast<Eigen::Index>(b ^ x)]) * psi[static_cast<Eigen::Index>(b)];
    }
    // Walsh-Hadamard: F[z] = sum_b (-1)^{z.b} f[b].
    for (std::uint64_t h = 1; h < dim; h <<= 1) {
      for (std::uint64_t i = 0; i < dim; i += h << 1) {
        for (std::uint64_t j = i; j < i + h; ++j) {
          const Complex u = f[j];
          const Complex v = f[j + h];
          f[j] = u + v;
          f[j + h] = u - v;
        }
      }
    }
    for (std::uint64_t z = 0; z < dim; ++z) {
      const Complex c = kI[std::popcount(x & z) & 3] * f[z] * inv_dim;
      if (std::abs(c) <= tol) continue;
      PauliTerm t(n);
      for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        t.set_x(q, (x & bit) != 0);
        t.set_z(q, (z & bit) != 0);
      }
      t.set_coefficient(Complex(c.real(), 0.0));
      out.add(t);
    }
  }
  return out.simplify(0.0);
}

StabilizerSet bias_from_reference(const PauliSum& hamiltonian, const StateVector& psi, std::size_t k) {
  if (static_cast<std::size_t>(psi.size()) != (std::size_t{1} << hamiltonian.n_qubits())) {
    throw DimensionError("reference state does not match the Hamiltonian register");
  }
  const PauliSum rho = density_pauli_expansion(psi);
  const auto scores = approx_symmetry_scores(rho);
  StabilizerSet set = select_stabilizers(scores, k);
  set.sector = sector_select(set, psi, hamiltonian);
  return set;
}

// ------------------------------------------------------------ noncontextual

StateVector truncate_amplitudes(const StateVector& psi, std::size_t m) {
  if (m == 0) throw InvalidArgument("truncation must keep at least one amplitude");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(psi.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(psi[a]) > std::abs(psi[b]); });
  StateVector out = StateVector::Zero(psi.size());
  for (std::size_t i = 0; i < std::min(m, order.size()); ++i) out[order[i]] = psi[order[i]];
  const double norm = out.norm();
  if (norm == 0.0) throw InvalidArgument("truncation removed every nonzero amplitude");
  return out / norm;
}

StateVector perturb_fidelity(const StateVector& psi, double fidelity, std::uint64_t seed) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw InvalidArgument("fidelity must lie in [0, 1]");
  if (psi.size() < 2) throw DimensionError("perturbation needs at least two amplitudes");
  Rng rng = make_rng(seed, "perturb");
  auto gauss = [&] {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  const StateVector unit = psi / psi.norm();
  StateVector phi(psi.size());
  double norm = 0.0;
  while (norm < 1e-8) {
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = Complex(gauss(), gauss());
    phi -= unit.dot(phi) * unit;
    norm = phi.norm();
  }
  return std::sqrt(fidelity) * unit + std::sqrt(1.0 - fidelity) * (phi / norm);
}

PauliSum NoncontextualModel::reconstruct() const {
  PauliSum out(n_qubits);
  for (const auto& e : entries) {
    PauliTerm t(n_qubits);
    for (std::size_t i = 0; i < symmetry_generators.size(); ++i) {
      if ((e.mask >> i) & 1U) t = multiply(t, symmetry_generators[i]);
    }
    if (e.clique >= 0) t = multiply(t, clique_reps[static_cast<std::size_t>(e.clique)]);
    t.set_coefficient(t.coefficient() * e.coefficient);
    out.add(t);
  }
  return out.simplify();
}

namespace {

// Columns ordered z_0..z_{N-1}, x_0..x_{N-1}.
std::vector<std::uint8_t> zx_vector(const PauliTerm& t) {
  const std::size_t n = t.n_qubits();
  std::vector<std::uint8_t> v(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    v[q] = t.z(q);
    v[n + q] = t.x(q);
  }
  return v;
}

PauliTerm from_zx(const std::vector<std::uint8_t>& v, std::size_t n) {
  PauliTerm t(n);
  for (std::size_t q = 0; q < n; ++q) {
    t.set_z(q, v[q] != 0);
    t.set_x(q, v[n + q] != 0);
  }
  return t;
}

std::string triple_message(const PauliTerm& a, const PauliTerm& b, const PauliTerm& c) {
  return "operator is contextual: terms " + a.str() + ", " + b.str() + ", " + c.str() +
         " violate transitive commutation";
}

}  // namespace

NoncontextualModel noncontextual_decompose(const PauliSum& hamiltonian) {
  if (!hamiltonian.is_hermitian()) throw InvalidArgument("operator must be Hermitian");
  const PauliSum h = hamiltonian.simplify();
  const std::size_t n = h.n_qubits();
  const std::size_t m = h.size();
  const BinaryMatrix anti = commutation_matrix(h, h);

  std::vector<std::size_t> universal;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < m; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < m && all; ++j) all = anti(i, j) == 0;
    (all ? universal : rest).push_back(i);
  }

  // Equivalence classes of "commutes" on the remaining terms.
  std::vector<std::vector<std::size_t>> cliques;
  for (std::size_t i : rest) {
    bool placed = false;
    for (auto& c : cliques) {
      if (anti(i, c.front()) == 0) {
        c.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) cliques.push_back({i});
  }
  for (std::size_t a = 0; a < cliques.size(); ++a) {
    const std::size_t rep = cliques[a].front();
    for (std::size_t u : cliques[a]) {
      for (std::size_t v : cliques[a]) {
        if (anti(u, v)) throw ContextualityError(triple_message(h.term(u), h.term(v), h.term(rep)));
      }
      for (std::size_t b = 0; b < cliques.size(); ++b) {
        if (b == a) continue;
        for (std::size_t v : cliques[b]) {
          if (!anti(u, v)) {
            throw ContextualityError(triple_message(h.term(u), h.term(v), h.term(cliques[b].front())));
          }
        }
      }
    }
  }
  auto weight = [&](const std::vector<std::size_t>& c) {
    double w = 0.0;
    for (std::size_t i : c) w += std::norm(h.coefficient(i));
    return w;
  };
  std::stable_sort(cliques.begin(), cliques.end(),
                   [&](const auto& a, const auto& b) { return weight(a) > weight(b); });

  NoncontextualModel model;
  model.n_qubits = n;
  for (const auto& c : cliques) model.clique_reps.push_back(unit_string(h.term(c.front())));

  // Reduced row echelon basis of the symmetry span.
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::size_t i : universal) rows.push_back(zx_vector(h.term(i)));
  for (std::size_t j = 0; j < cliques.size(); ++j) {
    for (std::size_t i : cliques[j]) rows.push_back(zx_vector(multiply(model.clique_reps[j], h.term(i))));
  }
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][col]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][col]) {
        for (std::size_t c2 = 0; c2 < 2 * n; ++c2) rows[r][c2] ^= rows[rank][c2];
      }
    }
    pivots.push_back(col);
    ++rank;
  }
  if (rank > 63) throw CapacityError("too many symmetry generators");
  for (std::size_t r = 0; r < rank; ++r) model.symmetry_generators.push_back(from_zx(rows[r], n));

  // Express each term over the generators; the echelon form makes the mask the
  // term's bits at the pivot columns.
  auto express = [&](const PauliTerm& t, int clique, Complex coeff) {
    const PauliTerm target = clique >= 0 ? multiply(model.clique_reps[static_cast<std::size_t>(clique)], t) : t;
    const auto v = zx_vector(target);
    std::uint64_t mask = 0;
    PauliTerm prod(n);
    for (std::size_t r = 0; r < rank; ++r) {
      if (v[pivots[r]]) {
        mask |= std::uint64_t{1} << r;
        prod = multiply(prod, model.symmetry_generators[r]);
      }
    }
    if (clique >= 0) prod = multiply(prod, model.clique_reps[static_cast<std::size_t>(clique)]);
    if (!prod.same_string(t)) throw ContextualityError("term " + t.str() + " is outside the symmetry span");
    const Complex phase = prod.scalar();
    const Complex c = coeff / phase;
    if (std::abs(c.imag()) > 1e-9 * std::max(1.0, std::abs(c))) {
      throw ContextualityError("term " + t.str() + " has a non-real noncontextual coefficient");
    }
    model.entries.push_back({mask, clique, c.real()});
  };
  for (std::size_t i : universal) express(unit_string(h.term(i)), -1, h.coefficient(i));
  for (std::size_t j = 0; j < cliques.size(); ++j) {
    for (std::size_t i : cliques[j]) express(unit_string(h.term(i)), static_cast<int>(j), h.coefficient(i));
  }
  return model;
}

namespace {

struct SectorCoefficients {
  double a = 0.0;
  std::vector<double> b;
};

SectorCoefficients sector_coefficients(const NoncontextualModel& model, std::span<const int> nu) {
  SectorCoefficients sc;
  sc.b.assign(model.clique_reps.size(), 0.0);
  for (const auto& e : model.entries) {
    double v = e.coefficient;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if ((e.mask >> i) & 1U) v *= nu[i];
    }
    if (e.clique < 0) {
      sc.a += v;
    } else {
      sc.b[static_cast<std::size_t>(e.clique)] += v;
    }
  }
  return sc;
}

}  // namespace

double noncontextual_energy(const NoncontextualModel& model, const NoncontextualState& state) {
  if (state.nu.size() != model.symmetry_generators.size() || state.r.size() != model.clique_reps.size()) {
    throw DimensionError("noncontextual state does not match the model");
  }
  const auto sc = sector_coefficients(model, state.nu);
  double e = sc.a;
  for (std::size_t j = 0; j < sc.b.size(); ++j) e += state.r[j] * sc.b[j];
  return e;
}

NoncontextualSolution noncontextual_minimize(const NoncontextualModel& model) {
  const std::size_t g = model.symmetry_generators.size();
  if (g > 24) throw CapacityError("too many symmetry generators for exhaustive search");
  NoncontextualSolution best;
  bool have = false;
  std::vector<int> nu(g);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g); ++mask) {
    for (std::size_t i = 0; i < g; ++i) nu[i] = ((mask >> i) & 1U) ? -1 : 1;
    const auto sc = sector_coefficients(model, nu);
    double norm = 0.0;
    for (double v : sc.b) norm += v * v;
    norm = std::sqrt(norm);
    const double e = sc.a - norm;
    if (!have || e < best.energy - 1e-12) {
      have = true;
      best.energy = e;
      best.state.nu = nu;
      best.state.r.assign(sc.b.size(), 0.0);
      if (norm > 0.0) {
        for (std::size_t j = 0; j < sc.b.size(); ++j) best.state.r[j] = -sc.b[j] / norm;
      } else if (!sc.b.empty()) {
        best.state.r[0] = 1.0;
      }
    }
  }
  return best;
}

// ------------------------------------------------------------- serialization

using nlohmann::json;

std::string reduction_to_json(const SubspaceReduction& r) {
  json j;
  j["schema"] = "cssim.reduction/1";
  j["n_qubits"] = r.n_qubits;
  json stabs = json::array();
  for (std::size_t k = 0; k < r.stabilizers.size(); ++k) {
    const auto& g = r.stabilizers.generators[k].canonical();
    stabs.push_back({{"pauli", g.str()},
                     {"sign", g.scalar().real() < 0 ? -1 : 1},
                     {"sector", r.stabilizers.has_sector() ? r.stabilizers.sector[k] : 0}});
  }
  j["stabilizers"] = stabs;
  json rots = json::array();
  for (const auto& rot : r.rotations) {
    const auto g = rot.generator.canonical();
    rots.push_back({{"generator", g.str()}, {"sign", g.scalar().real() < 0 ? -1 : 1}, {"angle", rot.angle}});
  }
  j["rotations"] = rots;
  j["removed_positions"] = r.removed_positions;
  j["image_signs"] = r.image_signs;
  j["qubit_index_map"] = r.qubit_index_map;
  j["reduced_h"] = to_text(r.reduced_h);
  return j.dump(2);
}

SubspaceReduction reduction_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("reduction JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "cssim.reduction/1") throw ParseError("unsupported reduction schema");
    SubspaceReduction r;
    r.n_qubits = j.at("n_qubits").get<std::size_t>();
    bool sector = true;
    for (const auto& s : j.at("stabilizers")) {
      r.stabilizers.generators.push_back(
          encode_pauli(s.at("pauli").get<std::string>(), static_cast<double>(s.at("sign").get<int>())));
      const int v = s.at("sector").get<int>();
      if (v == 0) sector = false;
      r.stabilizers.sector.push_back(v);
    }
    if (!sector) r.stabilizers.sector.clear();
    for (const auto& rot : j.at("rotations")) {
      r.rotations.push_back({encode_pauli(rot.at("generator").get<std::string>(),
                                          static_cast<double>(rot.at("sign").get<int>())),
                             rot.at("angle").get<double>()});
    }
    r.removed_positions = j.at("removed_positions").get<std::vector<std::size_t>>();
    r.image_signs = j.at("image_signs").get<std::vector<int>>();
    r.qubit_index_map = j.at("qubit_index_map").get<std::vector<std::int64_t>>();
    r.reduced_h = from_text(j.at("reduced_h").get<std::string>());
    if (r.qubit_index_map.size() != r.n_qubits || r.removed_positions.size() != r.image_signs.size() ||
        r.reduced_h.n_qubits() != r.n_reduced()) {
      throw ParseError("reduction JSON: inconsistent dimensions");
    }
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("reduction JSON: ") + e.what());
  }
}

}  // namespace cssim
