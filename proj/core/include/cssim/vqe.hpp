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

// Variational eigensolver over the five-qubit ansatz: mitigated energy
// estimation, parameter-shift gradients, optimizers and shot accounting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cssim/mitigation.hpp"
#include "cssim/pauli.hpp"
#include "cssim/simulator.hpp"
#include "cssim/subspace.hpp"

namespace cssim {

enum class OptimizerKind { GradientDescent, QuasiNewton };

struct MitigationFlags {
  bool rem = true;
  bool sv = true;
  bool zne = true;
  bool zne_on_gradients = true;
};

/// Single-qubit Z stabilizer used for symmetry verification.
struct SymmetryCheck {
  std::size_t qubit = 0;
  int eigenvalue = -1;
};

struct VqeConfig {
  PauliSum hamiltonian;
  std::vector<int> lambdas{1, 2, 3, 4};
  std::size_t shots = 8192;
  std::size_t tiles = 3;
  OptimizerKind optimizer = OptimizerKind::QuasiNewton;
  std::size_t max_iters = 200;
  double gradient_tolerance = 1e-6;
  MitigationFlags mitigation;
  SymmetryCheck symmetry;
  NoiseModel noise;
  /// Analytic expectations instead of sampling (statevector when the noise
  /// model has no gate noise, density matrix otherwise).
  bool exact_expectation = false;
  std::size_t calibration_shots = 8192;
  /// Extra evaluations at the final parameters used to estimate sigma(lambda).
  std::size_t variance_steps = 8;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
};

struct LambdaEstimate {
  int lambda = 1;
  Estimate raw;     // no mitigation
  Estimate rem;     // readout mitigation only
  Estimate sv;      // symmetry verification only; equals raw when SV is off
  Estimate rem_sv;  // postselection then readout mitigation; equals rem when SV is off
  Estimate used;    // the variant selected by the mitigation flags
};

struct PipelineResult {
  double energy = 0.0;  // extrapolated, or the lambda = 1 value without ZNE
  std::vector<LambdaEstimate> per_lambda;
  std::optional<FitResult> fit;
  std::uint64_t executions = 0;  // circuit executions (shots x groups x lambdas)
};

/// Holds the QWC grouping and the readout calibration for one configuration.
/// Every call with the same stream index is reproducible.
class EnergyEvaluator {
 public:
  explicit EnergyEvaluator(VqeConfig config);

  const VqeConfig& config() const { return config_; }
  const std::vector<QwcGroup>& groups() const { return groups_; }
  const ReadoutCalibration& calibration() const { return calibration_; }

  /// Mitigated energy at theta. `use_zne` false evaluates lambda = 1 only.
  PipelineResult evaluate(const AnsatzParams& theta, std::uint64_t stream, bool use_zne) const;
  PipelineResult evaluate(const AnsatzParams& theta, std::uint64_t stream) const {
    return evaluate(theta, stream, config_.mitigation.zne);
  }

 private:
  LambdaEstimate sample_lambda(const AnsatzParams& theta, int lambda, std::uint64_t stream) const;
  LambdaEstimate exact_lambda(const AnsatzParams& theta, int lambda) const;

  VqeConfig config_;
  std::vector<QwcGroup> groups_;
  ReadoutCalibration calibration_;
  ReadoutCalibration calibration_sv_;  // identity on the postselected qubit
};

/// One-shot convenience wrapper around EnergyEvaluator.
PipelineResult energy_pipeline(const AnsatzParams& theta, const VqeConfig& config, std::uint64_t stream = 0);

/// dE/dtheta_k = (E(theta + pi/2 e_k) - E(theta - pi/2 e_k)) / 2. Shifted
/// evaluations use streams first_stream .. first_stream + 11 and run in
/// parallel.
AnsatzParams parameter_shift_grad(const EnergyEvaluator& evaluator, const AnsatzParams& theta,
                                  std::uint64_t first_stream = 0);
AnsatzParams parameter_shift_grad(const AnsatzParams& theta, const VqeConfig& config);

/// Noiseless statevector energy <psi(theta)|H|psi(theta)>.
double exact_energy(const AnsatzParams& theta, const PauliSum& hamiltonian);

/// Best point of the grid theta_k in {0, pi/2, pi, 3 pi/2}: Ry angles 0 and pi
/// select Z eigenstates, +-pi/2 select X eigenstates, and theta_5 rotates
/// between the two clique representatives.
AnsatzParams ansatz_warm_start(const PauliSum& hamiltonian);

/// Angles realizing a noncontextual solution of the five-qubit model with
/// generators (Z0, X1X2, X3, X4) and clique representatives (X2, Z1Z2):
/// theta_0 = 0 or pi for nu = +1 or -1, the X-type generators use Ry(nu pi / 2)
/// with theta_2 = pi / 2, and <X2> = cos theta_5, <Z1Z2> = -sin theta_5.
/// Throws InvalidArgument for any other model layout.
AnsatzParams ansatz_from_noncontextual(const NoncontextualModel& model, const NoncontextualState& state);

struct VqeStep {
  std::size_t iteration = 0;
  AnsatzParams theta{};
  double energy = 0.0;
  std::vector<LambdaEstimate> per_lambda;
  double grad_norm = 0.0;
};

struct VqeTrace {
  std::vector<VqeStep> steps;
  AnsatzParams theta{};
  double final_energy = 0.0;
  bool converged = false;
  std::string status;
  /// Final mean energies per lambda with sigma from the variance steps.
  std::vector<ZnePoint> final_points;
  std::optional<FitResult> final_fit;
  std::size_t energy_evaluations = 0;
  std::size_t gradient_evaluations = 0;
  std::uint64_t executed_shots = 0;
};

struct FixedPointEstimate {
  /// Mean energy per lambda over the repeated evaluations, sigma from their spread.
  std::vector<ZnePoint> points;
  std::optional<FitResult> fit;
  double energy = 0.0;  // extrapolated, or the lambda = 1 mean without ZNE
  std::uint64_t executions = 0;
};

/// Repeats the mitigated evaluation at fixed theta on streams first_stream ..
/// first_stream + steps - 1 and fits the weighted exponential to the per-lambda
/// means. A single step keeps the per-evaluation sigmas.
FixedPointEstimate fixed_point_estimate(const EnergyEvaluator& evaluator, const AnsatzParams& theta,
                                        std::uint64_t first_stream, std::size_t steps);

/// Steepest descent with Armijo backtracking, or BFGS with the same line
/// search, until the gradient norm drops below the tolerance or max_iters.
/// A non-finite energy stops the run with status "aborted".
VqeTrace optimize(const VqeConfig& config, const AnsatzParams& theta0);

/// N_shots N_QWC (N_ZNE N_energy + N_ZNE,grad 2 N_grad N_param), with
/// N_ZNE,grad = 1 when gradients skip extrapolation.
std::uint64_t shot_budget(std::uint64_t shots, std::uint64_t qwc_groups, std::uint64_t zne_factors,
                          std::uint64_t energy_evals, std::uint64_t grad_evals, std::uint64_t params,
                          bool zne_on_gradients);
std::uint64_t shot_budget(const VqeTrace& trace, const VqeConfig& config);

/// step,theta0..theta5,E_lambda<k>...,E_zne,grad_norm
std::string trace_to_csv(const VqeTrace& trace, const VqeConfig& config);
std::string trace_to_json(const VqeTrace& trace, const VqeConfig& config);

}  // namespace cssim
