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

// Operators and data shared by several test binaries.

#include <array>
#include <numbers>

#include "cssim/mitigation.hpp"
#include "cssim/pauli.hpp"
#include "cssim/simulator.hpp"

namespace fixture {

/// Five-qubit contextual-subspace Hamiltonian of the Kagome cell:
/// -I + 7 Z0 + (I + Z0)(Z1 + Z1Z2 + Z2Z3 + Z3Z4)
///          - (I - Z0)(X1 + X2 + X3 - X4 - X1X2X3X4).
inline cssim::PauliSum h_cs() {
  return cssim::PauliSum::from_strings({
      {"IIIII", -1.0}, {"ZIIII", 7.0},
      {"IZIII", 1.0},  {"IZZII", 1.0},  {"IIZZI", 1.0},  {"IIIZZ", 1.0},
      {"ZZIII", 1.0},  {"ZZZII", 1.0},  {"ZIZZI", 1.0},  {"ZIIZZ", 1.0},
      {"IXIII", -1.0}, {"IIXII", -1.0}, {"IIIXI", -1.0}, {"IIIIX", 1.0},  {"IXXXX", 1.0},
      {"ZXIII", 1.0},  {"ZIXII", 1.0},  {"ZIIXI", 1.0},  {"ZIIIX", -1.0}, {"ZXXXX", -1.0},
  });
}

/// Same operator keeping only (I + Z0) Z1Z2 from the +1 projector block.
inline cssim::PauliSum h_cs_noncontextual() {
  return cssim::PauliSum::from_strings({
      {"IIIII", -1.0}, {"ZIIII", 7.0}, {"IZZII", 1.0}, {"ZZZII", 1.0},
      {"IXIII", -1.0}, {"IIXII", -1.0}, {"IIIXI", -1.0}, {"IIIIX", 1.0},  {"IXXXX", 1.0},
      {"ZXIII", 1.0},  {"ZIXII", 1.0},  {"ZIIXI", 1.0},  {"ZIIIX", -1.0}, {"ZXXXX", -1.0},
  });
}

/// |1>|+>|+>|+>|-> reached by the ansatz.
inline cssim::AnsatzParams optimal_theta() {
  constexpr double pi = std::numbers::pi;
  return {pi, pi / 2, pi / 2, pi / 2, -pi / 2, 0.0};
}

/// Noise-amplified energies with readout mitigation only.
inline std::array<cssim::ZnePoint, 4> table_rem() {
  return {{{1, -17.59609, 0.07113}, {2, -17.40111, 0.06654}, {3, -17.13956, 0.08612}, {4, -16.88709, 0.10957}}};
}

/// The same with symmetry verification added.
inline std::array<cssim::ZnePoint, 4> table_rem_sv() {
  return {{{1, -17.99325, 0.00266}, {2, -17.98822, 0.00368}, {3, -17.97595, 0.00551}, {4, -17.95655, 0.00924}}};
}

}  // namespace fixture
