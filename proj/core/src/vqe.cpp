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

#include "cssim/vqe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <limits>
#include <array>
#include <numbers>
#include <set>
#include <sstream>

#include "cssim/error.hpp"
#include "cssim/random.hpp"
#include "json.hpp"

namespace cssim {
namespace {

bool has_gate_noise(const NoiseModel& n) {
  return n.two_qubit_depolarizing_p > 0.0 || n.spectator_depolarizing_p > 0.0;
}

Estimate add(const Estimate& a, const Estimate& b) {
  return {a.value + b.value, std::hypot(a.sigma, b.sigma)};
}

Estimate select(const LambdaEstimate& e, const MitigationFlags& f) {
  if (f.rem && f.sv) return e.rem_sv;
  if (f.rem) return e.rem;
  if (f.sv) return e.sv;
  return e.raw;
}

// Distribution conditioned on the symmetry bit; empty when nothing survives.
std::vector<double> postselect_distribution(std::span<const double> p, std::size_t n, const SymmetryCheck& s) {
  const std::uint64_t bit = std::uint64_t{1} << (n - 1 - s.qubit);
  const bool want = s.eigenvalue == -1;
  std::vector<double> out(p.begin(), p.end());
  double kept = 0.0;
  for (std::size_t b = 0; b < out.size(); ++b) {
    if (((b & bit) != 0) != want) {
      out[b] = 0.0;
    } else {
      kept += out[b];
    }
  }
  if (!(kept > 0.0)) return {};
  for (double& v : out) v /= kept;
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void VqeConfig::validate() const {
  if (hamiltonian.n_qubits() != kAnsatzQubits) throw InvalidArgument("the ansatz acts on 5 qubits");
  if (!hamiltonian.is_hermitian(1e-9)) throw InvalidArgument("Hamiltonian must be Hermitian");
  if (lambdas.empty()) throw InvalidArgument("lambdas must be nonempty");
  std::set<int> seen;
  for (int l : lambdas) {
    if (l < 1) throw InvalidArgument("lambdas must be positive integers");
    if (!seen.insert(l).second) throw InvalidArgument("lambdas must be distinct");
  }
  if (shots == 0) throw InvalidArgument("shots must be at least 1");
  if (tiles == 0) throw InvalidArgument("tiles must be at least 1");
  if (!(gradient_tolerance > 0.0)) throw InvalidArgument("gradient tolerance must be positive");
  if (symmetry.qubit >= kAnsatzQubits || (symmetry.eigenvalue != 1 && symmetry.eigenvalue != -1)) {
    throw InvalidArgument("symmetry check needs a qubit below 5 and eigenvalue +-1");
  }
  if (calibration_shots == 0) throw InvalidArgument("calibration shots must be at least 1");
  noise.validate();
  if (!noise.readout.empty() && noise.readout.size() != kAnsatzQubits) {
    throw InvalidArgument("readout confusions must cover all 5 qubits");
  }
  if (mitigation.zne && lambdas.size() < 3) throw InvalidArgument("extrapolation needs at least 3 lambdas");
}

EnergyEvaluator::EnergyEvaluator(VqeConfig config) : config_(std::move(config)) {
  config_.validate();
  groups_ = qwc_partition(config_.hamiltonian);
  const std::size_t n = kAnsatzQubits;
  if (config_.mitigation.rem && !config_.exact_expectation) {
    calibration_ = calibrate_readout(config_.noise, n, config_.calibration_shots, split_seed(config_.seed, "calibration"));
  } else {
    calibration_.assign(n, Confusion::Identity());
  }
  calibration_sv_ = calibration_;
  calibration_sv_[config_.symmetry.qubit] = Confusion::Identity();
}

LambdaEstimate EnergyEvaluator::sample_lambda(const AnsatzParams& theta, int lambda, std::uint64_t stream) const {
  const std::size_t n = kAnsatzQubits;
  const Circuit circuit = build_ansatz(theta, lambda);
  const bool noisy = has_gate_noise(config_.noise);
  StateVector psi;
  DenseMatrix rho;
  if (noisy) {
    rho = run_density(circuit, config_.noise);
  } else {
    psi = run_statevector(circuit);
  }
  const std::uint64_t eval_seed =
      split_seed(split_seed(config_.seed, "eval", stream), "lambda", static_cast<std::uint64_t>(lambda));
  const std::size_t q = config_.symmetry.qubit;

  LambdaEstimate out;
  out.lambda = lambda;
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const auto& g = groups_[gi];
    const auto dist = noisy ? measurement_distribution(rho, g.basis) : measurement_distribution(psi, g.basis);
    const Counts counts =
        sample_distribution(dist, n, config_.shots, config_.noise, config_.tiles, split_seed(eval_seed, "group", gi));
    const Estimate raw = expectation_from_counts(counts, g.terms, g.basis);
    const Estimate rem = mitigated_expectation(counts, g.terms, g.basis, calibration_);
    out.raw = add(out.raw, raw);
    out.rem = add(out.rem, rem);
    if (config_.mitigation.sv && g.basis[q] == Pauli::Z) {
      const Counts kept = symmetry_postselect(counts, q, config_.symmetry.eigenvalue);
      out.sv = add(out.sv, expectation_from_counts(kept, g.terms, g.basis));
      out.rem_sv = add(out.rem_sv, mitigated_expectation(kept, g.terms, g.basis, calibration_sv_));
    } else {
      out.sv = add(out.sv, raw);
      out.rem_sv = add(out.rem_sv, rem);
    }
  }
  out.used = select(out, config_.mitigation);
  return out;
}

LambdaEstimate EnergyEvaluator::exact_lambda(const AnsatzParams& theta, int lambda) const {
  const std::size_t n = kAnsatzQubits;
  const Circuit circuit = build_ansatz(theta, lambda);
  const bool noisy = has_gate_noise(config_.noise);
  StateVector psi;
  DenseMatrix rho;
  if (noisy) {
    rho = run_density(circuit, config_.noise);
  } else {
    psi = run_statevector(circuit);
  }
  LambdaEstimate out;
  out.lambda = lambda;
  for (const auto& g : groups_) {
    const auto dist = noisy ? measurement_distribution(rho, g.basis) : measurement_distribution(psi, g.basis);
    const double e = expectation_from_distribution(dist, g.terms, g.basis);
    out.raw.value += e;
    double e_sv = e;
    if (config_.mitigation.sv && g.basis[config_.symmetry.qubit] == Pauli::Z) {
      const auto kept = postselect_distribution(dist, n, config_.symmetry);
      if (kept.empty()) throw EstimationError("postselection removes the whole distribution");
      e_sv = expectation_from_distribution(kept, g.terms, g.basis);
    }
    out.sv.value += e_sv;
  }
  out.rem = out.raw;
  out.rem_sv = out.sv;
  out.used = select(out, config_.mitigation);
  return out;
}

PipelineResult EnergyEvaluator::evaluate(const AnsatzParams& theta, std::uint64_t stream, bool use_zne) const {
  const bool analytic_noiseless = config_.exact_expectation && !has_gate_noise(config_.noise);
  use_zne = use_zne && !analytic_noiseless;
  std::vector<int> lambdas = use_zne ? config_.lambdas : std::vector<int>{1};

  PipelineResult r;
  for (int l : lambdas) {
    r.per_lambda.push_back(config_.exact_expectation ? exact_lambda(theta, l) : sample_lambda(theta, l, stream));
  }
  r.executions = static_cast<std::uint64_t>(config_.shots) * groups_.size() * lambdas.size();
  if (use_zne) {
    std::vector<ZnePoint> pts;
    bool weighted = true;
    for (const auto& e : r.per_lambda) {
      pts.push_back({e.lambda, e.used.value, e.used.sigma});
      if (!(e.used.sigma > 0.0)) weighted = false;
    }
    r.fit = zne_fit(pts, weighted);
    r.energy = r.fit->extrapolated;
  } else {
    r.energy = r.per_lambda.front().used.value;
  }
  return r;
}

PipelineResult energy_pipeline(const AnsatzParams& theta, const VqeConfig& config, std::uint64_t stream) {
  return EnergyEvaluator(config).evaluate(theta, stream);
}

AnsatzParams parameter_shift_grad(const EnergyEvaluator& evaluator, const AnsatzParams& theta,
                                  std::uint64_t first_stream) {
  const auto& cfg = evaluator.config();
  const bool zne = cfg.mitigation.zne && cfg.mitigation.zne_on_gradients;
  auto shifted = [&](std::size_t k, double s, std::uint64_t stream) {
    AnsatzParams t = theta;
    t[k] += s;
    return evaluator.evaluate(t, stream, zne).energy;
  };
  std::array<double, 2 * kAnsatzParams> e{};
  if (cfg.exact_expectation) {
    for (std::size_t k = 0; k < kAnsatzParams; ++k) {
      e[2 * k] = shifted(k, std::numbers::pi / 2, first_stream + 2 * k);
      e[2 * k + 1] = shifted(k, -std::numbers::pi / 2, first_stream + 2 * k + 1);
    }
  } else {
    std::vector<std::future<double>> fut;
    for (std::size_t k = 0; k < kAnsatzParams; ++k) {
      fut.push_back(std::async(std::launch::async, shifted, k, std::numbers::pi / 2, first_stream + 2 * k));
      fut.push_back(std::async(std::launch::async, shifted, k, -std::numbers::pi / 2, first_stream + 2 * k + 1));
    }
    for (std::size_t i = 0; i < fut.size(); ++i) e[i] = fut[i].get();
  }
  AnsatzParams g{};
  for (std::size_t k = 0; k < kAnsatzParams; ++k) g[k] = 0.5 * (e[2 * k] - e[2 * k + 1]);
  return g;
}

AnsatzParams parameter_shift_grad(const AnsatzParams& theta, const VqeConfig& config) {
  return parameter_shift_grad(EnergyEvaluator(config), theta, 0);
}

double exact_energy(const AnsatzParams& theta, const PauliSum& hamiltonian) {
  return expectation(hamiltonian, run_statevector(build_ansatz(theta, 1))).real();
}

AnsatzParams ansatz_warm_start(const PauliSum& hamiltonian) {
  if (hamiltonian.n_qubits() != kAnsatzQubits) throw InvalidArgument("the ansatz acts on 5 qubits");
  constexpr std::size_t kLevels = 4;
  AnsatzParams best{};
  double best_e = std::numeric_limits<double>::infinity();
  std::size_t total = 1;
  for (std::size_t k = 0; k < kAnsatzParams; ++k) total *= kLevels;
  for (std::size_t code = 0; code < total; ++code) {
    AnsatzParams t{};
    std::size_t c = code;
    for (std::size_t k = 0; k < kAnsatzParams; ++k) {
      t[k] = static_cast<double>(c % kLevels) * std::numbers::pi / 2;
      if (t[k] > std::numbers::pi) t[k] -= 2 * std::numbers::pi;
      c /= kLevels;
    }
    const double e = exact_energy(t, hamiltonian);
    if (e < best_e - 1e-12) {
      best_e = e;
      best = t;
    }
  }
  return best;
}

AnsatzParams ansatz_from_noncontextual(const NoncontextualModel& model, const NoncontextualState& state) {
  static const std::vector<std::string> kGenerators{"ZIIII", "IXXII", "IIIXI", "IIIIX"};
  static const std::vector<std::string> kCliques{"IIXII", "IZZII"};
  auto strings = [](const std::vector<PauliTerm>& terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.str());
    return out;
  };
  if (model.n_qubits != kAnsatzQubits || strings(model.symmetry_generators) != kGenerators ||
      strings(model.clique_reps) != kCliques) {
    throw InvalidArgument("noncontextual model does not match the ansatz layout");
  }
  if (state.nu.size() != kGenerators.size() || state.r.size() != kCliques.size()) {
    throw DimensionError("noncontextual state does not match the model");
  }
  const double half_pi = std::numbers::pi / 2;
  return {state.nu[0] > 0 ? 0.0 : std::numbers::pi,
          state.nu[1] * half_pi,
          half_pi,
          state.nu[2] * half_pi,
          state.nu[3] * half_pi,
          std::atan2(-state.r[1], state.r[0])};
}

namespace {

double norm(const AnsatzParams& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

FixedPointEstimate fixed_point_estimate(const EnergyEvaluator& evaluator, const AnsatzParams& theta,
                                        std::uint64_t first_stream, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("fixed-point estimation needs at least one step");
  FixedPointEstimate out;
  std::vector<std::vector<double>> samples;
  std::vector<Estimate> first;
  std::vector<int> lambdas;
  for (std::size_t v = 0; v < steps; ++v) {
    const PipelineResult r = evaluator.evaluate(theta, first_stream + v);
    out.executions += r.executions;
    if (samples.empty()) {
      samples.resize(r.per_lambda.size());
      for (const auto& e : r.per_lambda) {
        lambdas.push_back(e.lambda);
        first.push_back(e.used);
      }
    }
    for (std::size_t i = 0; i < r.per_lambda.size(); ++i) samples[i].push_back(r.per_lambda[i].used.value);
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (steps == 1) {
      out.points.push_back({lambdas[i], first[i].value, first[i].sigma});
      continue;
    }
    const auto& s = samples[i];
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double x : s) var += (x - mean) * (x - mean);
    var /= static_cast<double>(s.size() - 1);
    out.points.push_back({lambdas[i], mean, std::sqrt(var)});
  }
  if (evaluator.config().mitigation.zne && out.points.size() >= 3) {
    bool weighted = true;
    for (const auto& p : out.points) weighted = weighted && p.sigma > 0.0;
    out.fit = zne_fit(out.points, weighted);
    out.energy = out.fit->extrapolated;
  } else {
    out.energy = out.points.front().energy;
  }
  return out;
}

VqeTrace optimize(const VqeConfig& config, const AnsatzParams& theta0) {
  const EnergyEvaluator ev(config);
  VqeTrace trace;
  std::uint64_t stream = 0;
  const std::uint64_t grad_exec = static_cast<std::uint64_t>(config.shots) * ev.groups().size() *
                                  ((config.mitigation.zne && config.mitigation.zne_on_gradients &&
                                    !(config.exact_expectation && !has_gate_noise(config.noise)))
                                       ? config.lambdas.size()
                                       : 1);
  auto energy = [&](const AnsatzParams& t) {
    PipelineResult r = ev.evaluate(t, stream++);
    ++trace.energy_evaluations;
    trace.executed_shots += r.executions;
    return r;
  };
  auto gradient = [&](const AnsatzParams& t) {
    AnsatzParams g = parameter_shift_grad(ev, t, stream);
    stream += 2 * kAnsatzParams;
    ++trace.gradient_evaluations;
    trace.executed_shots += 2 * kAnsatzParams * grad_exec;
    return g;
  };

  using Vec = Eigen::Matrix<double, 6, 1>;
  auto to_vec = [](const AnsatzParams& a) { return Vec(Eigen::Map<const Vec>(a.data())); };
  auto to_arr = [](const Vec& v) {
    AnsatzParams a{};
    for (int i = 0; i < 6; ++i) a[static_cast<std::size_t>(i)] = v(i);
    return a;
  };

  AnsatzParams theta = theta0;
  PipelineResult cur = energy(theta);
  Eigen::Matrix<double, 6, 6> hinv = Eigen::Matrix<double, 6, 6>::Identity();
  Vec prev_g = Vec::Zero();
  Vec prev_s = Vec::Zero();
  bool have_prev = false;
  double step0 = 1.0;
  trace.status = "max_iters";

  for (std::size_t it = 0;; ++it) {
    const AnsatzParams g_arr = gradient(theta);
    const Vec g = to_vec(g_arr);
    const double gn = norm(g_arr);
    trace.steps.push_back({it, theta, cur.energy, cur.per_lambda, gn});
    if (!std::isfinite(cur.energy) || !std::isfinite(gn)) {
      trace.status = "aborted: non-finite energy";
      break;
    }
    if (gn < config.gradient_tolerance) {
      trace.converged = true;
      trace.status = "converged";
      break;
    }
    if (it >= config.max_iters) break;

    if (config.optimizer == OptimizerKind::QuasiNewton && have_prev) {
      const Vec y = g - prev_g;
      const double sy = prev_s.dot(y);
      if (sy > 1e-12 * prev_s.norm() * y.norm()) {
        const double rho = 1.0 / sy;
        const auto eye = Eigen::Matrix<double, 6, 6>::Identity();
        hinv = (eye - rho * prev_s * y.transpose()) * hinv * (eye - rho * y * prev_s.transpose()) +
               rho * prev_s * prev_s.transpose();
      } else {
        hinv.setIdentity();
      }
    }
    Vec d = config.optimizer == OptimizerKind::QuasiNewton ? Vec(-hinv * g) : Vec(-g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      d = -g;
      slope = g.dot(d);
    }

    double alpha = config.optimizer == OptimizerKind::QuasiNewton ? 1.0 : step0;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      const Vec trial = to_vec(theta) + alpha * d;
      PipelineResult r = energy(to_arr(trial));
      if (!std::isfinite(r.energy)) {
        alpha *= 0.5;
        continue;
      }
      if (r.energy <= cur.energy + 1e-4 * alpha * slope) {
        prev_s = trial - to_vec(theta);
        prev_g = g;
        have_prev = true;
        theta = to_arr(trial);
        cur = std::move(r);
        accepted = true;
        step0 = std::min(1.0, 2.0 * alpha);
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      trace.status = "line search stalled";
      break;
    }
  }

  trace.theta = theta;
  trace.final_energy = cur.energy;

  if (!config.exact_expectation && config.variance_steps > 0) {
    FixedPointEstimate fe = fixed_point_estimate(ev, theta, stream, config.variance_steps);
    stream += config.variance_steps;
    trace.energy_evaluations += config.variance_steps;
    trace.executed_shots += fe.executions;
    trace.final_points = std::move(fe.points);
    trace.final_fit = std::move(fe.fit);
    trace.final_energy = fe.energy;
  }
  return trace;
}

std::uint64_t shot_budget(std::uint64_t shots, std::uint64_t qwc_groups, std::uint64_t zne_factors,
                          std::uint64_t energy_evals, std::uint64_t grad_evals, std::uint64_t params,
                          bool zne_on_gradients) {
  const std::uint64_t grad_factors = zne_on_gradients ? zne_factors : 1;
  return shots * qwc_groups * (zne_factors * energy_evals + grad_factors * 2 * grad_evals * params);
}

std::uint64_t shot_budget(const VqeTrace& trace, const VqeConfig& config) {
  const bool analytic_noiseless = config.exact_expectation && !has_gate_noise(config.noise);
  const bool zne = config.mitigation.zne && !analytic_noiseless;
  const std::uint64_t groups = qwc_partition(config.hamiltonian).size();
  const std::uint64_t factors = zne ? config.lambdas.size() : 1;
  return shot_budget(config.shots, groups, factors, trace.energy_evaluations, trace.gradient_evaluations,
                     kAnsatzParams, zne && config.mitigation.zne_on_gradients);
}

std::string trace_to_csv(const VqeTrace& trace, const VqeConfig& config) {
  std::ostringstream os;
  os << "step";
  for (std::size_t k = 0; k < kAnsatzParams; ++k) os << ",theta" << k;
  for (int l : config.lambdas) os << ",E_lambda" << l;
  os << ",E_zne,grad_norm\n";
  for (const auto& s : trace.steps) {
    os << s.iteration;
    for (double t : s.theta) os << ',' << fmt(t);
    for (int l : config.lambdas) {
      os << ',';
      for (const auto& e : s.per_lambda) {
        if (e.lambda == l) os << fmt(e.used.value);
      }
    }
    os << ',' << fmt(s.energy) << ',' << fmt(s.grad_norm) << '\n';
  }
  return os.str();
}

std::string trace_to_json(const VqeTrace& trace, const VqeConfig& config) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["status"] = trace.status;
  j["converged"] = trace.converged;
  j["theta"] = trace.theta;
  j["final_energy"] = trace.final_energy;
  j["energy_evaluations"] = trace.energy_evaluations;
  j["gradient_evaluations"] = trace.gradient_evaluations;
  j["executed_shots"] = trace.executed_shots;
  j["shot_budget"] = shot_budget(trace, config);
  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json o;
    o["step"] = s.iteration;
    o["theta"] = s.theta;
    o["energy"] = s.energy;
    o["grad_norm"] = s.grad_norm;
    ordered_json lam = ordered_json::array();
    for (const auto& e : s.per_lambda) {
      lam.push_back({{"lambda", e.lambda},
                     {"raw", {e.raw.value, e.raw.sigma}},
                     {"rem", {e.rem.value, e.rem.sigma}},
                     {"sv", {e.sv.value, e.sv.sigma}},
                     {"rem_sv", {e.rem_sv.value, e.rem_sv.sigma}}});
    }
    o["per_lambda"] = lam;
    steps.push_back(o);
  }
  j["steps"] = steps;
  ordered_json pts = ordered_json::array();
  for (const auto& p : trace.final_points) pts.push_back({{"lambda", p.lambda}, {"energy", p.energy}, {"sigma", p.sigma}});
  j["final_points"] = pts;
  return j.dump(2);
}

}  // namespace cssim
