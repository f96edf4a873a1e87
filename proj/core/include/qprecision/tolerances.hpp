// Copyright 2026 The qprecision Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

namespace qprecision {

// Single home for every numerical threshold used by the library.
struct Tolerances {
  // qlinalg
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
  double unitarity = 1e-10;
  double jacobi_off_diagonal = 1e-13;
  int jacobi_max_sweeps = 100;
  double log_floor = 1e-14;
  double phase_zero = 1e-12;

  // model
  double completeness = 1e-10;
  double env_probability_sum = 1e-12;
  double stationary_residual = 1e-10;
  double stationary_gap = 1e-8;
  double resonance = 1e-10;
  double degeneracy = 1e-10;

  // trajectories
  double normalization = 1e-10;
  double zero_probability = 1e-300;
  double negative_entropy = 1e-8;
  std::size_t enumeration_cap = 10'000'000;

  // bounds
  double bound_margin = 1e-9;
  double phi_residual = 1e-13;
  double f_small_x = 1e-6;
  double singular_eigenvalue = 1e-12;

  // markov
  double ldb = 1e-10;
  double no_jump_step_norm = 0.5;
  double rk4_budget = 1e-9;
  std::size_t markov_exact_max_steps = 12;
  std::size_t markov_exact_max_channels = 3;
  std::size_t markov_truncated_max_jumps = 2;
};

inline constexpr Tolerances kTol{};

}  // namespace qprecision
