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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qprecision/model.hpp"

namespace qprecision {

/// Environment outcomes of one round: prepared in nu, measured in mu.
struct EnvPair {
  std::size_t nu = 0;
  std::size_t mu = 0;
  friend bool operator==(const EnvPair&, const EnvPair&) = default;
};

/// Outcome record {n, (nu_1, mu_1), ..., (nu_N, mu_N), m}.
struct Trajectory {
  std::size_t n = 0;
  std::vector<EnvPair> pairs;
  std::size_t m = 0;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// {m, (mu_N, nu_N), ..., (mu_1, nu_1), n}.
Trajectory reverse(const Trajectory& gamma);

/// Dense index of the trajectory space,
/// index = (n * d_E^{2N} + code) * d_S + m, with round 1 the most
/// significant digit of `code` and digit value nu * d_E + mu.
class TrajectoryIndexer {
 public:
  TrajectoryIndexer() = default;
  TrajectoryIndexer(std::size_t d_S, std::size_t d_E, int N);

  std::size_t d_S() const noexcept { return d_S_; }
  std::size_t d_E() const noexcept { return d_E_; }
  int rounds() const noexcept { return N_; }
  std::size_t pair_codes() const noexcept { return Q_; }
  std::size_t size() const noexcept { return d_S_ * Q_ * d_S_; }

  std::size_t encode(const Trajectory& gamma) const;
  Trajectory decode(std::size_t index) const;
  void decode_into(std::size_t index, Trajectory& gamma) const;
  std::size_t reversed(std::size_t index) const;

 private:
  std::size_t d_S_ = 0;
  std::size_t d_E_ = 0;
  int N_ = 0;
  std::size_t Q_ = 0;
};

/// Number of trajectories d_S^2 d_E^{2N}, or SIZE_MAX on overflow.
std::size_t trajectory_count(std::size_t d_S, std::size_t d_E, int N);

struct EnumerationOptions {
  std::size_t cap = kTol.enumeration_cap;
  unsigned threads = 1;
};

/// start_probs[n] |<end_m| K_{pair N} ... K_{pair 1} |start_n>|^2 for every
/// index of the trajectory space; basis vectors are matrix columns.
std::vector<double> enumerate_probabilities(const KrausSet& k, std::span<const double> start_probs,
                                            const CMatrix& start_basis, const CMatrix& end_basis, int N,
                                            const EnumerationOptions& opts = {});

/// Probability of a single trajectory under the same conventions.
double trajectory_probability(const KrausSet& k, std::span<const double> start_probs,
                              const CMatrix& start_basis, const CMatrix& end_basis, const Trajectory& gamma);

enum class Mode { stationary, general };

/// Exhaustive enumeration of the forward process and, when every
/// environment probability is positive, of the backward process.
struct Enumeration {
  TrajectoryIndexer indexer;
  Mode mode = Mode::stationary;
  std::vector<double> p_init;   // spectrum of the initial state
  std::vector<double> q_final;  // spectrum of the final state (= p_init when stationary)
  CMatrix init_basis;
  CMatrix final_basis;
  std::vector<double> env_probs;
  std::vector<double> forward;   // P(gamma)
  std::vector<double> backward;  // P~(gamma), empty when unavailable
  unsigned threads = 1;

  bool backward_available() const noexcept { return !backward.empty(); }
};

/// Stationary mode requires rho0 to be a fixed point of the channel and
/// uses its eigenbasis for both measurements. General mode measures finally
/// in the eigenbasis of E^N(rho0).
Enumeration enumerate(const KrausSet& fwd, const DensityMatrix& rho0, int N, Mode mode,
                      const EnumerationOptions& opts = {});

/// P~(gamma) = (q_n / p_m) (prod p_nu / prod p_mu) P(reverse(gamma)).
double backward_prob(const Trajectory& gamma, const KrausSet& fwd, std::span<const double> init_probs,
                     std::span<const double> final_probs, const CMatrix& init_basis,
                     const CMatrix& final_basis);

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

enum class ObservableKind { current, generic };

struct Observable {
  ObservableKind kind = ObservableKind::current;
  std::function<double(const Trajectory&)> value;
  std::string name;
};

/// phi(gamma) = sum_i c[mu_i][nu_i].
Observable pair_observable(std::vector<std::vector<double>> c, ObservableKind kind, std::string name = "phi");
/// 1 when the environment changed in some round, else 0.
Observable change_indicator();

using TrajectoryPredicate = std::function<bool(const Trajectory&)>;
/// Default inactive set: mu_i == nu_i for every round.
bool no_environment_change(const Trajectory& gamma);

/// Throws ObservableError if `obs` breaks the condition attached to its kind
/// on any trajectory of the space.
void validate_observable(const TrajectoryIndexer& idx, const Observable& obs,
                         const TrajectoryPredicate& inactive = no_environment_change);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct EnsembleStats {
  double normalization = 0.0;
  double sigma = 0.0;          // <ln P(g) / P~(g~)>
  double sigma_star = 0.0;     // <ln P(g) / P~(g)>
  double boundary_b = 0.0;     // <ln q_m q_n / (p_m p_n)>
  double log_ratio = 0.0;      // <ln P(g) / P(g~)>
  double inactivity = 0.0;
  double ell = 0.0;
  double ift_check = 0.0;      // sum of P~(g) over the forward support
  double excluded_mass = 0.0;  // forward mass below the zero-probability floor
  bool backward_available = false;
};

struct ObservableMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

struct TrajectoryStats {
  double mean_phi = 0.0;
  double var_phi = 0.0;
  double second_moment = 0.0;
  double sigma = 0.0;
  double sigma_star = 0.0;
  double boundary_b = 0.0;
  double log_ratio = 0.0;
  double inactivity = 0.0;
  double ell = 0.0;
  double ift_check = 0.0;
  double excluded_mass = 0.0;
  bool backward_available = false;
};

EnsembleStats ensemble_stats(const Enumeration& e, const TrajectoryPredicate& inactive = no_environment_change);
ObservableMoments observable_moments(const Enumeration& e, const Observable& obs);
TrajectoryStats compute_stats(const Enumeration& e, const Observable& obs,
                              const TrajectoryPredicate& inactive = no_environment_change);

// ---------------------------------------------------------------------------
// State-based quantities
// ---------------------------------------------------------------------------

/// N D(U (rho_S (x) rho_E) U^dagger || rho_S (x) rho_E) for a stationary rho_S.
double sigma_from_states(const ModelSpec& spec, const DensityMatrix& rho_S);
/// rho_path[i] = E^i(rho_S(0)) for i = 0..N-1 (further entries ignored).
double sigma_from_states_general(const ModelSpec& spec, const std::vector<DensityMatrix>& rho_path);
/// rho, E(rho), ..., E^N(rho).
std::vector<DensityMatrix> state_path(const KrausSet& k, const DensityMatrix& rho0, int N);

/// Average entanglement entropy sum p_n p_nu S(tr_E U|n nu><n nu|U^dagger).
double entanglement_entropy_avg(const ModelSpec& spec, const DensityMatrix& rho_S);

}  // namespace qprecision
