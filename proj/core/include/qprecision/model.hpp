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

/// A repeated-interaction model. The total Hamiltonian for one round is
/// H = H_S (x) 1 + 1 (x) H_E + lambda * H_I with the environment index fast.
struct ModelSpec {
  std::size_t d_S = 0;
  std::size_t d_E = 0;
  CMatrix H_S;
  CMatrix H_E;  // diagonal: the computational basis is the measurement basis
  CMatrix H_I;  // on d_S * d_E
  double lambda = 0.0;
  double beta = 1.0;
  double tau = 1.0;
  int N = 1;
  // When set, replaces the Gibbs weights of H_E (general mode).
  std::optional<std::vector<double>> env_probs;

  /// Builds H_I = V_S (x) V_E.
  static ModelSpec factored(CMatrix H_S, CMatrix H_E, const CMatrix& V_S, const CMatrix& V_E,
                            double lambda, double beta, double tau, int N);

  /// Throws SpecError / HermiticityError / DimError on malformed input.
  void validate() const;

  CMatrix total_hamiltonian() const;
  std::vector<double> env_energies() const;
  /// Preparation probabilities of the environment outcomes.
  std::vector<double> environment_probabilities() const;
};

/// One interaction round: operators M_{mu nu} on the system labelled by the
/// final (mu) and initial (nu) environment outcomes.
class KrausSet {
 public:
  KrausSet(std::size_t d_S, std::size_t d_E, std::vector<CMatrix> ops, std::vector<double> env_probs);

  std::size_t d_S() const noexcept { return d_S_; }
  std::size_t d_E() const noexcept { return d_E_; }
  const CMatrix& op(std::size_t mu, std::size_t nu) const { return ops_[mu * d_E_ + nu]; }
  const std::vector<CMatrix>& ops() const noexcept { return ops_; }
  const std::vector<double>& env_probs() const noexcept { return env_probs_; }

  /// max |sum M^dagger M - 1|.
  double completeness_error() const;
  /// Row-major vectorised superoperator sum M (x) conj(M).
  CMatrix transfer_matrix() const;
  bool env_probs_positive() const;

 private:
  std::size_t d_S_;
  std::size_t d_E_;
  std::vector<CMatrix> ops_;
  std::vector<double> env_probs_;
};

CMatrix total_unitary(const ModelSpec& spec);

/// M_{mu nu} = sqrt(p_nu) <mu|U|nu>.
KrausSet forward_kraus(const ModelSpec& spec);
/// Same construction from an explicit unitary on d_S * d_E.
KrausSet kraus_from_unitary(const CMatrix& U, std::size_t d_S, std::size_t d_E,
                            std::vector<double> env_probs);

/// B_{mu nu} = sqrt(p_nu / p_mu) M_{nu mu}^dagger. Requires p > 0.
KrausSet backward_kraus(const KrausSet& forward);

DensityMatrix channel_apply(const KrausSet& k, const DensityMatrix& rho);
CMatrix channel_apply(const KrausSet& k, const CMatrix& rho);

/// Unique fixed point of the channel; throws NonUniqueStationaryError when
/// the fixed-point space is degenerate.
DensityMatrix stationary_state(const KrausSet& k);

struct ResonantCoupling {
  std::size_t m = 0;   // system level
  std::size_t mu = 0;  // environment level
  std::size_t n = 0;
  std::size_t nu = 0;
  double g = 0.0;      // adds g(|m mu><n nu| + h.c.)
};

/// Energy-conserving interaction between diagonal H_S = diag(eps_S) and
/// H_E = diag(eps_E); lambda is set to 1.
ModelSpec thermal_operation_model(const std::vector<double>& eps_S, const std::vector<double>& eps_E,
                                  const std::vector<ResonantCoupling>& couplings, double tau,
                                  double beta);

}  // namespace qprecision
