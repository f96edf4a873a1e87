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
#include <optional>
#include <vector>

#include "qprecision/qlinalg.hpp"

namespace qprecision {

struct JumpOperator {
  CMatrix L;
  double ds = 0.0;                     // environment entropy change of the jump
  std::optional<std::size_t> partner;  // k*, unset for unpaired jumps
};

/// GKSL generator d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dagger - {L_k^dagger L_k, rho}/2).
struct LindbladSpec {
  std::size_t d_S = 0;
  CMatrix H;
  std::vector<JumpOperator> jumps;

  /// Checks shapes, Hermiticity of H and local detailed balance
  /// L_k = e^{ds_k/2} L_{k*}^dagger for every paired jump.
  void validate() const;
  std::vector<CMatrix> jump_matrices() const;
  /// sum_k L_k^dagger L_k.
  CMatrix decay_operator() const;
};

/// H - (i/2) sum L^dagger L.
CMatrix effective_hamiltonian(const LindbladSpec& spec);

/// Row-major vectorised generator; `signflip` replaces -i[H, .] by +i[H, .].
CMatrix liouvillian(const LindbladSpec& spec, bool signflip = false);
DensityMatrix lindblad_stationary_state(const LindbladSpec& spec);

/// Smallest step count for which each sub-step exponent has 1-norm at most
/// kTol.no_jump_step_norm.
std::size_t recommended_no_jump_steps(const LindbladSpec& spec, double T);
/// exp(-i H_eff T) as `steps` Taylor sub-steps combined by binary powering.
CMatrix no_jump_propagator(const LindbladSpec& spec, double T, std::size_t steps);

/// tr(e^{-i H_eff T} rho e^{i H_eff^dagger T}); steps = 0 picks the recommended count.
double no_jump_probability(const LindbladSpec& spec, const DensityMatrix& rho, double T, std::size_t steps = 0);
/// |tr(e^{-i H_eff T} rho)|^2.
double loschmidt_echo(const LindbladSpec& spec, const DensityMatrix& rho, double T, std::size_t steps = 0);
/// T sum_k tr(L_k rho L_k^dagger).
double dynamical_activity(const LindbladSpec& spec, const DensityMatrix& rho, double T);

struct UnraveledKraus {
  double dt = 0.0;
  // Index 0 is the no-jump operator, index k the jump L_{k-1}.
  std::vector<CMatrix> forward;
  std::vector<CMatrix> backward;
  // max |S - 1| of the completing right factors.
  double forward_correction = 0.0;
  double backward_correction = 0.0;
};

/// First-order step operators {1 - i H_eff dt, L_k sqrt(dt)} and
/// {1 + i H_eff^dagger dt, L_k sqrt(dt)}, each right-multiplied by
/// (sum J^dagger J)^{-1/2} so both sets are exactly complete.
UnraveledKraus unraveled_kraus_sets(const LindbladSpec& spec, double T, std::size_t steps);

struct PathOptions {
  // Negative: exact enumeration when allowed by the limits below, else
  // truncation to kTol.markov_truncated_max_jumps.
  int max_jumps = -1;
  std::size_t cap = kTol.enumeration_cap;
  unsigned threads = 1;
};

struct PathStats {
  double sigma_star = 0.0;
  double forward_mass = 0.0;   // probability of the enumerated paths
  double backward_mass = 0.0;
  double truncated_mass = 0.0;  // 1 - forward_mass
  std::size_t paths = 0;
  int max_jumps = 0;           // -1 when exact
  double correction = 0.0;
};

/// Sigma* of the discretised process, with paths measured at both ends in
/// the eigenbasis of rho_ss.
PathStats markov_sigma_star(const LindbladSpec& spec, const DensityMatrix& rho_ss, double T, std::size_t steps,
                            const PathOptions& opts = {});

std::size_t recommended_rk4_steps(const LindbladSpec& spec, double T, bool signflip = false);
/// Fixed-step RK4; steps = 0 picks the recommended count.
DensityMatrix lindblad_evolve(const LindbladSpec& spec, const DensityMatrix& rho0, double T, std::size_t steps,
                              bool signflip);

/// D(p || q), p the spectrum of rho_ss and q_n = <n| e^{L~ T} rho_ss |n>.
RelativeEntropy sigma_star_dp_lower_bound(const LindbladSpec& spec, const DensityMatrix& rho_ss, double T);

/// H = omega sigma_x / 2 with thermal decay and excitation at rate gamma.
LindbladSpec driven_qubit(double omega, double gamma, double nbar);

}  // namespace qprecision
