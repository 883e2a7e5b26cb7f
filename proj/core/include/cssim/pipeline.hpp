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

// Configuration-driven orchestration. A run is described by one JSON document
// (schema "cssim.config/1"); every command maps (config, seed) to a set of
// named output files held in memory, so outputs can be compared byte for byte
// before anything touches the disk.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cssim/mitigation.hpp"
#include "cssim/model.hpp"
#include "cssim/pauli.hpp"
#include "cssim/simulator.hpp"
#include "cssim/vqe.hpp"

namespace cssim {

inline constexpr std::string_view kConfigSchema = "cssim.config/1";

enum class ReferenceSource { Exact, Truncated, Perturbed };
enum class InitialTheta { WarmStart, Random, Explicit };

struct ModelSection {
  LatticeSpec lattice = kagome_cell_edges();
  ModelParams params = ModelParams::xxx(-1.0, 0.0);
  std::size_t spectrum_levels = 16;
  std::vector<double> scan_j{-1.0};
  std::vector<double> scan_h{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0};
  /// Sites whose Z product forms the evolved parity observable.
  std::vector<std::size_t> parity_sites{6, 7, 8, 9, 10, 11};
  /// Computational basis state evolved in time, qubit 0 leftmost.
  std::string initial_bitstring = "010101010101";
};

struct ReductionSection {
  bool taper = true;
  /// Size of the contextual subspace written as the main reduction.
  std::size_t n_cs = 5;
  /// Subspace sizes tabulated in the spectrum-vs-size file.
  std::vector<std::size_t> sizes{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t spectrum_levels = 8;
  ReferenceSource reference = ReferenceSource::Exact;
  std::size_t keep = 64;        // amplitudes kept by the truncated reference
  double fidelity = 0.97;       // target overlap of the perturbed reference
};

struct VqeSection {
  VqeConfig config;  // hamiltonian, noise and seed are filled by the parser
  InitialTheta initial = InitialTheta::WarmStart;
  AnsatzParams theta{};  // used when initial == Explicit
  std::optional<double> exact_energy;  // minimum eigenvalue of the Hamiltonian when unset
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  ModelSection model;
  ReductionSection reduction;
  NoiseModel noise;
  VqeSection vqe;
};

/// Parses and validates a config document. Missing keys take the defaults
/// above; unknown keys, wrong types and out-of-range values throw ParseError
/// with the offending line number.
PipelineConfig parse_config(std::string_view json);
PipelineConfig default_config();

/// The literal five-qubit contextual-subspace Hamiltonian of the Kagome cell.
PauliSum kagome_cs5_hamiltonian();

using FileMap = std::map<std::string, std::string>;

/// hamiltonian.txt, spectrum.csv, phase_scan.csv, evolution.csv,
/// mutual_info.csv and symmetry.json.
FileMap cmd_model(const PipelineConfig& config);

/// taper.json, reduction.json, reduced_hamiltonian.txt and
/// spectrum_vs_size.csv.
FileMap cmd_reduce(const PipelineConfig& config);

struct VqeRun {
  FileMap files;  // trace.csv, trace.json, fit.json, report.txt
  double energy = 0.0;
  double exact = 0.0;
  bool fit_ok = true;  // false when ZNE was requested and the fit failed
};
VqeRun cmd_vqe(const PipelineConfig& config);

struct ZneFitRun {
  FileMap files;  // fit.json and report.txt
  double error_ratio = 0.0;
  bool fit_ok = true;
};
/// Weighted fit of a `lambda,energy,sigma` table against `exact`.
ZneFitRun cmd_zne_fit(std::string_view csv, double exact);

/// Writes every file under `dir`, creating it when needed.
void write_files(const FileMap& files, const std::filesystem::path& dir);

}  // namespace cssim
