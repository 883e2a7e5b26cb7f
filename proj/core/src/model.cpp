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

#include "cssim/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "cssim/error.hpp"

namespace cssim {

// ------------------------------------------------------------------ lattice

void LatticeSpec::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [k, l] : edges) {
    if (k >= n_sites || l >= n_sites) {
      throw InvalidArgument("edge (" + std::to_string(k) + "," + std::to_string(l) +
                            ") references a site outside 0.." + std::to_string(n_sites - 1));
    }
    if (k >= l) {
      throw InvalidArgument("edge (" + std::to_string(k) + "," + std::to_string(l) + ") must have k < l");
    }
    if (!seen.insert({k, l}).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(k) + "," + std::to_string(l) + ")");
    }
  }
}

std::vector<std::size_t> LatticeSpec::degrees() const {
  std::vector<std::size_t> d(n_sites, 0);
  for (const auto& [k, l] : edges) {
    ++d[k];
    ++d[l];
  }
  return d;
}

LatticeSpec kagome_cell_edges() {
  return {12,
          {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5},
           {0, 6}, {1, 6}, {1, 7}, {2, 7}, {2, 8}, {3, 8},
           {3, 9}, {4, 9}, {4, 10}, {5, 10}, {5, 11}, {0, 11}}};
}

PauliSum build_heisenberg(const LatticeSpec& lattice, const ModelParams& params) {
  lattice.validate();
  const std::size_t n = lattice.n_sites;
  PauliSum h(n);
  const std::pair<Pauli, double> couplings[] = {
      {Pauli::X, params.jx}, {Pauli::Y, params.jy}, {Pauli::Z, params.jz}};
  for (const auto& [k, l] : lattice.edges) {
    for (const auto& [p, j] : couplings) {
      PauliTerm t(n);
      t.set_op(k, p);
      t.set_op(l, p);
      t.set_coefficient(-j);
      h.add(t);
    }
  }
  for (std::size_t q = 0; q < n; ++q) h.add(single_qubit(n, q, Pauli::Z, -params.h));
  return h.simplify();
}

// ------------------------------------------------------- exact diagonalization

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0U); }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct XGroup {
  std::uint64_t x;
  std::vector<std::pair<std::uint64_t, Complex>> z_terms;
  Complex element(std::uint64_t b) const {
    Complex v = 0.0;
    for (const auto& [z, base] : z_terms) v += (std::popcount(z & b) & 1) ? -base : base;
    return v;
  }
};

constexpr double kElementTolerance = 1e-13;

}  // namespace

SpectralDecomposition::SpectralDecomposition(const PauliSum& hamiltonian)
    : n_qubits_(hamiltonian.n_qubits()) {
  if (n_qubits_ > kMaxDenseQubits) {
    throw CapacityError("exact diagonalization limited to " + std::to_string(kMaxDenseQubits) +
                        " qubits, got " + std::to_string(n_qubits_));
  }
  const PauliSum h = hamiltonian.simplify();
  if (!h.is_hermitian(1e-10)) throw InvalidArgument("exact diagonalization requires a Hermitian operator");

  std::map<std::uint64_t, XGroup> by_x;
  for (std::size_t m = 0; m < h.size(); ++m) {
    const BasisAction a = basis_action(h, m);
    auto& g = by_x[a.x];
    g.x = a.x;
    g.z_terms.emplace_back(a.z, a.base);
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;

  UnionFind uf(dim);
  for (const auto& [x, g] : by_x) {
    if (x == 0) continue;
    for (std::uint64_t b = 0; b < dim; ++b) {
      if ((b ^ x) < b) continue;
      if (std::abs(g.element(b)) > kElementTolerance) {
        uf.unite(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b ^ x));
      }
    }
  }

  std::vector<std::int64_t> block_of_root(dim, -1);
  std::vector<std::uint32_t> local(dim, 0);
  for (std::uint64_t b = 0; b < dim; ++b) {
    const auto r = uf.find(static_cast<std::uint32_t>(b));
    if (block_of_root[r] < 0) {
      block_of_root[r] = static_cast<std::int64_t>(blocks_.size());
      blocks_.emplace_back();
    }
    auto& blk = blocks_[static_cast<std::size_t>(block_of_root[r])];
    local[b] = static_cast<std::uint32_t>(blk.states.size());
    blk.states.push_back(b);
  }

  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    auto& blk = blocks_[bi];
    const auto d = static_cast<Eigen::Index>(blk.states.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      const std::uint64_t b = blk.states[static_cast<std::size_t>(c)];
      for (const auto& [x, g] : by_x) {
        const Complex v = g.element(b);
        if (std::abs(v) <= kElementTolerance) continue;
        m(static_cast<Eigen::Index>(local[b ^ x]), c) += v;
      }
    }
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
      blk.values = es.eigenvalues();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      blk.values = es.eigenvalues();
    }
    blk.matrix = std::move(m);
    for (Eigen::Index c = 0; c < d; ++c) order_.push_back({blk.values[c], bi, c});
  }
  std::stable_sort(order_.begin(), order_.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
  std::vector<double> v;
  v.reserve(order_.size());
  for (const auto& e : order_) v.push_back(e.value);
  return v;
}

const Eigen::MatrixXcd& SpectralDecomposition::block_vectors(std::size_t b) const {
  std::lock_guard lock(*mutex_);
  auto& blk = blocks_[b];
  if (blk.vectors.size() == 0) {
    if (blk.matrix.imag().cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk.matrix.real());
      blk.vectors = es.eigenvectors().cast<Complex>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk.matrix);
      blk.vectors = es.eigenvectors();
    }
  }
  return blk.vectors;
}

StateVector SpectralDecomposition::eigenvector(std::size_t i) const {
  const auto& e = order_.at(i);
  const auto& blk = blocks_[e.block];
  const auto& vectors = block_vectors(e.block);
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dimension()));
  for (std::size_t s = 0; s < blk.states.size(); ++s) {
    v[static_cast<Eigen::Index>(blk.states[s])] = vectors(static_cast<Eigen::Index>(s), e.column);
  }
  return v;
}

StateVector SpectralDecomposition::evolve(const StateVector& psi, double t) const {
  if (psi.size() != static_cast<Eigen::Index>(dimension())) {
    throw DimensionError("evolve: state dimension does not match the Hamiltonian");
  }
  StateVector out = StateVector::Zero(psi.size());
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    const auto& blk = blocks_[bi];
    const auto d = static_cast<Eigen::Index>(blk.states.size());
    Eigen::VectorXcd local(d);
    for (Eigen::Index s = 0; s < d; ++s) local[s] = psi[static_cast<Eigen::Index>(blk.states[static_cast<std::size_t>(s)])];
    if (local.squaredNorm() == 0.0) continue;
    const auto& vectors = block_vectors(bi);
    Eigen::VectorXcd a = vectors.adjoint() * local;
    for (Eigen::Index k = 0; k < d; ++k) a[k] *= std::exp(Complex(0.0, -blk.values[k] * t));
    const Eigen::VectorXcd back = vectors * a;
    for (Eigen::Index s = 0; s < d; ++s) out[static_cast<Eigen::Index>(blk.states[static_cast<std::size_t>(s)])] = back[s];
  }
  return out;
}

Eigenpairs exact_eigs(const PauliSum& hamiltonian, std::size_t k) {
  const SpectralDecomposition sd(hamiltonian);
  const std::size_t count = std::min(k, sd.dimension());
  Eigenpairs out;
  for (std::size_t i = 0; i < count; ++i) {
    out.values.push_back(sd.eigenvalue(i));
    out.vectors.push_back(sd.eigenvector(i));
  }
  return out;
}

std::vector<double> lowest_eigenvalues(const PauliSum& hamiltonian, std::size_t k) {
  const SpectralDecomposition sd(hamiltonian);
  const std::size_t count = std::min(k, sd.dimension());
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = sd.eigenvalue(i);
  return out;
}

Eigenpairs ground_space(const PauliSum& hamiltonian, double tol) {
  const SpectralDecomposition sd(hamiltonian);
  Eigenpairs out;
  const double e0 = sd.eigenvalue(0);
  for (std::size_t i = 0; i < sd.dimension() && sd.eigenvalue(i) <= e0 + tol; ++i) {
    out.values.push_back(sd.eigenvalue(i));
    out.vectors.push_back(sd.eigenvector(i));
  }
  return out;
}

// ----------------------------------------------------------- representatives

namespace {

StateVector fix_global_phase(StateVector v) {
  Eigen::Index best = 0;
  const double max_abs = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= max_abs - 1e-9) {
      best = i;
      break;
    }
  }
  const Complex a = v[best];
  if (std::abs(a) > 0.0) v *= std::conj(a) / std::abs(a);
  return v / v.norm();
}

}  // namespace

StateVector space_representative(std::span<const StateVector> space, std::span<const PauliSum> probes) {
  if (space.empty()) throw InvalidArgument("space_representative: empty space");
  const auto dim = space.front().size();
  Eigen::MatrixXcd basis(dim, static_cast<Eigen::Index>(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = space[i];

  constexpr double kSplit = 1e-8;
  while (basis.cols() > 1) {
    double best_value = 0.0;
    Eigen::MatrixXcd best_basis;
    bool found = false;
    for (const auto& probe : probes) {
      Eigen::MatrixXcd applied(dim, basis.cols());
      for (Eigen::Index c = 0; c < basis.cols(); ++c) applied.col(c) = cssim::apply(probe, StateVector(basis.col(c)));
      Eigen::MatrixXcd compressed = basis.adjoint() * applied;
      compressed = 0.5 * (compressed + compressed.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(compressed);
      const auto& vals = es.eigenvalues();
      Eigen::Index mult = 1;
      while (mult < vals.size() && vals[mult] - vals[0] < kSplit) ++mult;
      if (mult == basis.cols()) continue;
      if (!found || vals[0] < best_value - kSplit) {
        found = true;
        best_value = vals[0];
        best_basis = basis * es.eigenvectors().leftCols(mult);
      }
    }
    if (!found) break;
    basis = best_basis;
  }
  return fix_global_phase(basis.col(0));
}

std::vector<PauliSum> lattice_probes(const LatticeSpec& lattice) {
  const std::size_t n = lattice.n_sites;
  std::vector<PauliSum> probes;
  PauliSum total(n);
  for (std::size_t q = 0; q < n; ++q) total.add(single_qubit(n, q, Pauli::Z, -1.0));
  probes.push_back(total);
  for (const auto& [k, l] : lattice.edges) {
    PauliTerm t(n);
    t.set_op(k, Pauli::Z);
    t.set_op(l, Pauli::Z);
    probes.emplace_back(n, std::span<const PauliTerm>(&t, 1));
  }
  return probes;
}

StateVector ground_representative(const PauliSum& hamiltonian, const LatticeSpec& lattice) {
  // Every state is a ground state of the zero operator; the first probe then
  // selects the all-up state.
  if (hamiltonian.simplify().empty()) return basis_state(hamiltonian.n_qubits(), 0);
  const Eigenpairs gs = ground_space(hamiltonian);
  const auto probes = lattice_probes(lattice);
  return space_representative(gs.vectors, probes);
}

// ------------------------------------------------------------- observables

StateVector basis_state(std::size_t n_qubits, std::uint64_t index) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return v;
}

double magnetization(const StateVector& state) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  const int n = std::countr_zero(dim);
  double total = 0.0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    total += std::norm(state[static_cast<Eigen::Index>(b)]) * (n - 2 * std::popcount(b));
  }
  return std::abs(total) / n;
}

std::vector<PhasePoint> phase_scan(const LatticeSpec& lattice, std::span<const double> j_grid,
                                   std::span<const double> h_grid) {
  std::vector<PhasePoint> points;
  for (double j : j_grid) {
    for (double h : h_grid) points.push_back({j, h, 0.0, 0.0});
  }
  auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto& p = points[i];
      const PauliSum ham = build_heisenberg(lattice, ModelParams::xxx(p.j, p.h));
      if (ham.empty()) {
        p.e0 = 0.0;
        p.mz = magnetization(ground_representative(ham, lattice));
        continue;
      }
      const Eigenpairs gs = ground_space(ham);
      p.e0 = gs.values.front();
      p.mz = magnetization(space_representative(gs.vectors, lattice_probes(lattice)));
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), points.size()));
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (points.size() + workers - 1) / std::max<std::size_t>(workers, 1);
  for (std::size_t begin = 0; begin < points.size(); begin += chunk) {
    jobs.push_back(std::async(std::launch::async, evaluate, begin, std::min(points.size(), begin + chunk)));
  }
  for (auto& j : jobs) j.get();
  return points;
}

std::vector<double> evolve_expectation(const PauliSum& hamiltonian, const StateVector& psi0,
                                       const PauliSum& observable, std::span<const double> times) {
  if (observable.n_qubits() != hamiltonian.n_qubits()) {
    throw DimensionError("evolve_expectation: observable and Hamiltonian sizes differ");
  }
  const SpectralDecomposition sd(hamiltonian);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const StateVector psi = sd.evolve(psi0, t);
    out.push_back(expectation(observable, psi).real());
  }
  return out;
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

Eigen::MatrixXd mutual_information_matrix(const StateVector& state) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  const int n = std::countr_zero(dim);
  if ((std::uint64_t{1} << n) != dim) throw DimensionError("state dimension is not a power of two");
  if (static_cast<std::size_t>(n) > 20) throw CapacityError("mutual information limited to 20 qubits");
  auto bit_of = [n](std::size_t q) { return std::uint64_t{1} << (n - 1 - static_cast<int>(q)); };

  std::vector<double> single(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const auto mk = bit_of(static_cast<std::size_t>(k));
    for (std::uint64_t b = 0; b < dim; ++b) {
      const int i = (b & mk) ? 1 : 0;
      for (int j = 0; j < 2; ++j) {
        const std::uint64_t bp = j ? (b | mk) : (b & ~mk);
        rho(i, j) += state[static_cast<Eigen::Index>(b)] * std::conj(state[static_cast<Eigen::Index>(bp)]);
      }
    }
    single[static_cast<std::size_t>(k)] = von_neumann_entropy(rho);
  }

  Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const auto mk = bit_of(static_cast<std::size_t>(k));
      const auto ml = bit_of(static_cast<std::size_t>(l));
      Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
      for (std::uint64_t b = 0; b < dim; ++b) {
        const int i = ((b & mk) ? 2 : 0) | ((b & ml) ? 1 : 0);
        const std::uint64_t rest = b & ~(mk | ml);
        for (int j = 0; j < 4; ++j) {
          const std::uint64_t bp = rest | ((j & 2) ? mk : 0) | ((j & 1) ? ml : 0);
          rho(i, j) += state[static_cast<Eigen::Index>(b)] * std::conj(state[static_cast<Eigen::Index>(bp)]);
        }
      }
      const double v = std::max(0.0, single[static_cast<std::size_t>(k)] + single[static_cast<std::size_t>(l)] -
                                         von_neumann_entropy(rho));
      mi(k, l) = v;
      mi(l, k) = v;
    }
  }
  return mi;
}

double ground_overlap(const StateVector& psi, std::span<const StateVector> groundspace) {
  double s = 0.0;
  for (const auto& g : groundspace) s += std::norm(g.dot(psi));
  return s;
}

}  // namespace cssim
