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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Reference values come from independent dense oracles and
// from the hardware fixtures in fixtures.hpp.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cssim/mitigation.hpp"
#include "cssim/model.hpp"
#include "cssim/pauli.hpp"
#include "cssim/subspace.hpp"
#include "cssim/symmetry.hpp"
#include "cssim/vqe.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cssim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

PauliSum kagome(double j, double h) { return build_heisenberg(kagome_cell_edges(), ModelParams::xxx(j, h)); }

std::set<std::string> strings_of(const std::vector<PauliTerm>& terms) {
  std::set<std::string> out;
  for (const auto& t : terms) out.insert(t.str());
  return out;
}

SubspaceReduction taper_kagome(const PauliSum& h) {
  StabilizerSet s;
  s.generators = kernel_basis(h);
  s.sector = sector_select(s, ground_representative(h, kagome_cell_edges()), h);
  return project_subspace(h, s);
}

// ------------------------------------------------------------ 1

Outcome ground_energy() {
  const auto e = exact_eigs(kagome(-1.0, 0.0), 3);
  Outcome o;
  o.pass = std::abs(e.values[0] + 18.0) <= 1e-9 && std::abs(e.values[1] + 18.0) <= 1e-9 &&
           e.values[2] > -18.0 + 1e-6;
  o.detail = (Detail() << "E0=" << e.values[0] << " E1=" << e.values[1] << " E2=" << e.values[2]).str();
  return o;
}

// ------------------------------------------------------------ 2

Outcome tapering() {
  const PauliSum h0 = kagome(-1.0, 0.0);
  const auto k0 = kernel_basis(h0);
  std::vector<PauliTerm> with_parities = k0;
  with_parities.push_back(uniform_string(12, Pauli::Z));
  with_parities.push_back(uniform_string(12, Pauli::X));
  const bool spans0 = k0.size() == 2 && symplectic_rank(k0) == 2 && symplectic_rank(with_parities) == 2;

  const auto k1 = kernel_basis(kagome(-1.0, 0.7));
  std::vector<PauliTerm> with_z = k1;
  with_z.push_back(uniform_string(12, Pauli::Z));
  const bool spans1 = k1.size() == 1 && symplectic_rank(with_z) == 1;

  const SubspaceReduction t = taper_kagome(h0);
  const double e = lowest_eigenvalues(t.reduced_h, 1)[0];
  Outcome o;
  o.pass = spans0 && spans1 && t.n_reduced() == 10 && std::abs(e + 18.0) <= 1e-9;
  o.detail = (Detail() << "kernel(h=0)=" << k0.size() << (spans0 ? " spans ZZ..Z,XX..X" : " wrong span")
                       << " kernel(h>0)=" << k1.size() << " tapered qubits=" << t.n_reduced() << " E0=" << e)
                 .str();
  return o;
}

// ------------------------------------------------------------ 3

Outcome subspace_preservation() {
  const PauliSum h = kagome(-1.0, 0.0);
  const SubspaceReduction t = taper_kagome(h);
  const StateVector ref = restrict_state(ground_representative(h, kagome_cell_edges()), t);
  Outcome o;
  double worst = 0.0;
  for (std::size_t n_cs = 1; n_cs <= 9; ++n_cs) {
    const auto red = project_subspace(t.reduced_h, bias_from_reference(t.reduced_h, ref, t.n_reduced() - n_cs));
    const double e = lowest_eigenvalues(red.reduced_h, 1)[0];
    worst = std::max(worst, std::abs(e + 18.0));
    if (red.n_reduced() != n_cs) o.pass = false;
  }
  o.pass = o.pass && worst <= 1e-9;
  o.detail = (Detail() << "N_CS=1..9 max|E0+18|=" << worst).str();
  return o;
}

// ------------------------------------------------------------ 4

Outcome noncontextual_fixture() {
  const PauliSum h = fixture::h_cs();
  std::vector<std::pair<std::string, Complex>> terms;
  for (std::size_t m = 0; m < h.size(); ++m) terms.emplace_back(h.term(m).str(), h.coefficient(m));
  const double dense_min = oracle::min_eigenvalue(oracle::sum(terms));
  const double lib_min = lowest_eigenvalues(h, 1)[0];

  const NoncontextualModel model = noncontextual_decompose(fixture::h_cs_noncontextual());
  const bool gens = strings_of(model.symmetry_generators) ==
                    std::set<std::string>{"ZIIII", "IXXII", "IIIXI", "IIIIX"};
  const bool cliques = strings_of(model.clique_reps) == std::set<std::string>{"IIXII", "IZZII"};
  const double e = noncontextual_minimize(model).energy;
  Outcome o;
  o.pass = std::abs(dense_min + 18.0) <= 1e-9 && std::abs(lib_min + 18.0) <= 1e-9 && gens && cliques &&
           std::abs(e + 18.0) <= 1e-9;
  o.detail = (Detail() << "min eig=" << lib_min << " (dense " << dense_min << ") generators "
                       << (gens ? "match" : "differ") << ", cliques " << (cliques ? "match" : "differ")
                       << ", noncontextual min=" << e)
                 .str();
  return o;
}

// ------------------------------------------------------------ 5

Outcome noiseless_vqe() {
  VqeConfig c;
  c.hamiltonian = fixture::h_cs();
  c.exact_expectation = true;
  c.mitigation = {false, false, false, false};
  c.noise = NoiseModel::ideal();
  c.gradient_tolerance = 1e-9;
  constexpr int kSeeds = 50;
  int hits = 0;
  double worst = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> u(-kPi, kPi);
    AnsatzParams theta{};
    for (double& t : theta) t = u(rng);
    c.seed = static_cast<std::uint64_t>(s);
    const VqeTrace tr = optimize(c, theta);
    const double err = std::abs(tr.final_energy + 18.0);
    worst = std::max(worst, err);
    if (err <= 1e-6) ++hits;
  }
  Outcome o;
  o.pass = hits * 100 >= 95 * kSeeds;
  o.detail = (Detail() << hits << "/" << kSeeds << " seeds within 1e-6, worst |E+18|=" << worst).str();
  return o;
}

// ------------------------------------------------------------ 6

Outcome zne_golden() {
  const auto rem = fixture::table_rem();
  const auto sv = fixture::table_rem_sv();
  const double r_rem = std::abs(error_ratio(zne_fit(rem, true).extrapolated, -18.0));
  const double r_sv = std::abs(error_ratio(zne_fit(sv, true).extrapolated, -18.0));
  Outcome o;
  o.pass = std::abs(r_rem - 1.210) <= 0.3 && std::abs(r_sv - 0.019) <= 0.05;
  o.detail = (Detail() << "REM " << r_rem << "% (1.210 +- 0.3), REM+SV " << r_sv << "% (0.019 +- 0.05)").str();
  return o;
}

// ------------------------------------------------------------ 7

// Fixed-seed regression values, recorded from this implementation before
// freezing (seeds 0..9, max_iters 24, surrogate noise, warm start).
constexpr double kFrozenMeanFullStack = 0.22235406137915231;
constexpr double kFrozenMeanNoSv = 0.64547343810480173;
constexpr double kFrozenMeanSv = 0.22670643253372486;
constexpr double kFrozenRelTol = 1e-6;

Outcome noisy_regression() {
  constexpr int kSeeds = 10;
  constexpr std::uint64_t kStreams = 1000000;
  double full = 0.0;
  double sv_on = 0.0;
  double sv_off = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    VqeConfig c;
    c.hamiltonian = fixture::h_cs();
    c.noise = NoiseModel::surrogate(5);
    c.max_iters = 24;
    c.seed = static_cast<std::uint64_t>(s);
    const VqeTrace tr = optimize(c, ansatz_warm_start(c.hamiltonian));
    full += std::abs(error_ratio(tr.final_energy, -18.0)) / kSeeds;
    VqeConfig no_sv = c;
    no_sv.mitigation.sv = false;
    sv_on += std::abs(error_ratio(fixed_point_estimate(EnergyEvaluator(c), tr.theta, kStreams, c.variance_steps).energy,
                                  -18.0)) / kSeeds;
    sv_off += std::abs(error_ratio(
                  fixed_point_estimate(EnergyEvaluator(no_sv), tr.theta, kStreams, c.variance_steps).energy, -18.0)) /
              kSeeds;
  }
  const double factor = sv_off / sv_on;
  const bool frozen = std::abs(full - kFrozenMeanFullStack) <= kFrozenRelTol * kFrozenMeanFullStack &&
                      std::abs(sv_off - kFrozenMeanNoSv) <= kFrozenRelTol * kFrozenMeanNoSv &&
                      std::abs(sv_on - kFrozenMeanSv) <= kFrozenRelTol * kFrozenMeanSv;
  Outcome o;
  o.pass = full < 0.5 && factor >= 5.0 && frozen;
  o.detail = (Detail() << "mean |ratio| full stack " << full << "% (< 0.5), without SV " << sv_off
                       << "% vs " << sv_on << "% with SV at the same theta: factor " << factor << " (>= 5)"
                       << (frozen ? ", regression values reproduced" : ", regression values differ"))
                 .str();
  return o;
}

// ------------------------------------------------------------ 8

Outcome shot_budgets() {
  const auto with = shot_budget(8192, 2, 4, 34, 24, 6, true);
  const auto without = shot_budget(8192, 2, 4, 34, 24, 6, false);
  Outcome o;
  o.pass = with == 8192ULL * 2576ULL && with == 21102592ULL && without == 6946816ULL;
  o.detail = (Detail() << "budget " << with << " (8192 x 2576), without gradient ZNE " << without).str();
  return o;
}

// ------------------------------------------------------------ 9

bool commutation_exhaustive() {
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (char a0 : letters) {
    for (char a1 : letters) {
      for (char b0 : letters) {
        for (char b1 : letters) {
          const std::string a{a0, a1};
          const std::string b{b0, b1};
          const oracle::Matrix ma = oracle::pauli(a);
          const oracle::Matrix mb = oracle::pauli(b);
          const bool dense = (ma * mb - mb * ma).cwiseAbs().maxCoeff() < 1e-12;
          if (dense != commutes(encode_pauli(a), encode_pauli(b))) return false;
        }
      }
    }
  }
  return true;
}

double clifford_spectrum_deviation() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> sign(0, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, Complex>> terms;
    PauliSum sum(4);
    for (int m = 0; m < 10; ++m) {
      const std::string s = oracle::random_letters(4, rng);
      const double c = g(rng);
      terms.emplace_back(s, c);
      sum.add(encode_pauli(s, c));
    }
    std::vector<CliffordRotation> rots;
    for (int k = 0; k < 4; ++k) {
      rots.push_back(CliffordRotation::quarter_turn(encode_pauli(oracle::random_letters(4, rng)),
                                                    sign(rng) ? 1 : -1));
    }
    const auto before = oracle::eigenvalues(oracle::sum(terms));
    const auto after = oracle::eigenvalues(to_matrix(clifford_conjugate(sum, rots)));
    for (std::size_t i = 0; i < before.size(); ++i) worst = std::max(worst, std::abs(before[i] - after[i]));
  }
  return worst;
}

double parameter_shift_deviation() {
  VqeConfig c;
  c.hamiltonian = fixture::h_cs();
  c.exact_expectation = true;
  c.mitigation = {false, false, false, false};
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    AnsatzParams theta{};
    for (double& t : theta) t = u(rng);
    const AnsatzParams grad = parameter_shift_grad(theta, c);
    for (std::size_t k = 0; k < kAnsatzParams; ++k) {
      AnsatzParams up = theta;
      AnsatzParams down = theta;
      up[k] += h;
      down[k] -= h;
      const double fd = (exact_energy(up, c.hamiltonian) - exact_energy(down, c.hamiltonian)) / (2 * h);
      worst = std::max(worst, std::abs(fd - grad[k]));
    }
  }
  return worst;
}

double rem_inverse_deviation() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    ReadoutCalibration mats;
    for (std::size_t q = 0; q < n; ++q) mats.push_back(NoiseModel::flip_confusion(u(rng), u(rng)));
    Eigen::VectorXd p(std::size_t{1} << n);
    for (auto& v : p) v = w(rng);
    p /= p.sum();
    // Tensored channel with qubit 0 on the most significant bit; column c is
    // the prepared state, row r the observed one.
    Eigen::MatrixXd channel = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& a : mats) {
      Eigen::MatrixXd next(channel.rows() * 2, channel.cols() * 2);
      for (Eigen::Index r = 0; r < channel.rows(); ++r) {
        for (Eigen::Index col = 0; col < channel.cols(); ++col) {
          next.block(2 * r, 2 * col, 2, 2) = channel(r, col) * a.transpose();
        }
      }
      channel = next;
    }
    const Eigen::VectorXd observed = channel * p;
    QuasiDistribution q{n, {}};
    for (Eigen::Index b = 0; b < observed.size(); ++b) q.probs[static_cast<std::uint64_t>(b)] = observed[b];
    const QuasiDistribution back = apply_rem(q, mats);
    for (Eigen::Index b = 0; b < p.size(); ++b) {
      const auto it = back.probs.find(static_cast<std::uint64_t>(b));
      worst = std::max(worst, std::abs((it == back.probs.end() ? 0.0 : it->second) - p[b]));
    }
  }
  return worst;
}

// The six strongest pairs of the ground-state mutual information, which the
// exact ground-state computation fixes to the spokes (k, k + 6).
bool pinwheel_matching() {
  const PauliSum h = kagome(-1.0, 0.0);
  const Eigen::MatrixXd mi = mutual_information_matrix(ground_representative(h, kagome_cell_edges()));
  std::vector<std::tuple<double, int, int>> pairs;
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) pairs.emplace_back(mi(i, j), i, j);
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::set<std::pair<int, int>> top;
  std::set<int> covered;
  for (int k = 0; k < 6; ++k) {
    top.emplace(std::get<1>(pairs[k]), std::get<2>(pairs[k]));
    covered.insert(std::get<1>(pairs[k]));
    covered.insert(std::get<2>(pairs[k]));
  }
  const std::set<std::pair<int, int>> expected{{0, 6}, {1, 7}, {2, 8}, {3, 9}, {4, 10}, {5, 11}};
  return covered.size() == 12 && top == expected && std::get<0>(pairs[5]) > std::get<0>(pairs[6]) + 1e-6;
}

Outcome property_suites() {
  const bool comm = commutation_exhaustive();
  const double cliff = clifford_spectrum_deviation();
  const double shift = parameter_shift_deviation();
  const double rem = rem_inverse_deviation();
  const bool pin = pinwheel_matching();
  Outcome o;
  o.pass = comm && cliff <= 1e-9 && shift <= 1e-4 && rem <= 1e-12 && pin;
  o.detail = (Detail() << "commutation " << (comm ? "ok" : "mismatch") << ", clifford spectrum " << cliff
                       << ", shift-vs-fd " << shift << ", rem inverse " << rem << ", pinwheel "
                       << (pin ? "ok" : "mismatch"))
                 .str();
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "ground energy", 10.0, ground_energy},
      {2, "tapering", 5.0, tapering},
      {3, "subspace preservation", 60.0, subspace_preservation},
      {4, "noncontextual fixture", 5.0, noncontextual_fixture},
      {5, "noiseless vqe", 120.0, noiseless_vqe},
      {6, "zne golden", 1.0, zne_golden},
      {7, "noisy regression", 600.0, noisy_regression},
      {8, "shot budget", 1.0, shot_budgets},
      {9, "property suites", 600.0, property_suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2fs, limit %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", too slow");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
