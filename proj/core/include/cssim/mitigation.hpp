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

// Readout-error mitigation, symmetry-verification postselection and
// zero-noise extrapolation.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cssim/pauli.hpp"
#include "cssim/simulator.hpp"

namespace cssim {

using ReadoutCalibration = std::vector<Confusion>;

/// Tensored calibration: prepares |0...0> and |1...1>, samples each through
/// the readout channel (streams (seed, "calibrate", 0 / 1)) and estimates
/// A(i, j) = P(measure j | prepared i) per qubit.
ReadoutCalibration calibrate_readout(const NoiseModel& noise, std::size_t n_qubits, std::size_t shots,
                                     std::uint64_t seed);

/// Quasi-probabilities over N-bit strings. Entries may be slightly negative.
struct QuasiDistribution {
  std::size_t n_qubits = 0;
  std::map<std::uint64_t, double> probs;

  double total() const;
};

/// Empirical distribution of the (untiled) counts.
QuasiDistribution empirical_distribution(const Counts& counts);

/// Applies the tensor product of (A_n^T)^{-1} to a distribution. Throws
/// CalibrationError when some |det A_n| < 1e-6.
QuasiDistribution apply_rem(const QuasiDistribution& observed, const ReadoutCalibration& matrices);
QuasiDistribution apply_rem(const Counts& counts, const ReadoutCalibration& matrices);

/// sum_b q(b) g(b) for the group observable.
double expectation_from_quasi(const QuasiDistribution& quasi, const PauliSum& group, std::span<const Pauli> basis);

/// Readout-corrected estimate with a per-shot standard error. Each shot b
/// contributes sum_m c_m prod_{n in supp m} v_n(b_n) with v_n = A_n^{-1} (1, -1)^T,
/// whose mean equals the expectation over apply_rem(counts).
Estimate mitigated_expectation(const Counts& counts, const PauliSum& group, std::span<const Pauli> basis,
                               const ReadoutCalibration& matrices);

/// Keeps samples whose bit at `qubit` equals (1 - eigenvalue) / 2, tile by
/// tile; the result is untiled. Throws EstimationError if nothing survives.
Counts symmetry_postselect(const Counts& counts, std::size_t qubit, int eigenvalue);

struct ZnePoint {
  int lambda = 1;
  double energy = 0.0;
  double sigma = 0.0;
};

/// f(lambda) = sign e^{alpha lambda + beta} + gamma.
struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int sign = 1;
  double extrapolated = 0.0;  // f(0)
  double rss = 0.0;           // sum of squared weighted residuals
  bool weighted = true;
  std::vector<double> residuals;  // E - f(lambda), in input order

  double operator()(double lambda) const;
};

/// Weighted least squares fit of the exponential. gamma is profiled: for each
/// trial gamma, log|E - gamma| is regressed linearly on lambda with weights
/// ((E - gamma) / sigma)^2, and the nonlinear residual sum is minimized over
/// gamma in [min(E) - 1000 range, min(E)) (sign +1) and (max(E), max(E) + 1000 range]
/// (sign -1) by a log-spaced scan followed by golden-section refinement. A
/// damped Gauss-Newton pass on all three parameters, kept inside the same
/// gamma interval, finishes the fit. Unweighted fits use sigma = 1.
/// Throws FitError for fewer than 3 distinct lambdas or flat data.
FitResult zne_fit(std::span<const ZnePoint> points, bool weighted);

/// (E - E0) / E0 * 100. Throws InvalidArgument for E0 = 0.
double error_ratio(double energy, double exact);

/// "lambda,energy,sigma" CSV with a header row.
std::vector<ZnePoint> read_zne_csv(std::string_view text);
std::string write_zne_csv(std::span<const ZnePoint> points);
std::string fit_to_json(const FitResult& fit, double exact);

}  // namespace cssim
