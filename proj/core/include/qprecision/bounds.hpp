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

#include <optional>
#include <string>
#include <vector>

#include "qprecision/model.hpp"
#include "qprecision/trajectories.hpp"

namespace qprecision {

/// Inverse of x tanh(x) on [0, inf).
double phi_inverse(double y);

/// f(x) = 4 [Phi(x/2) / x]^2 - 1, evaluated as csch^2(Phi(x/2)) with a
/// series branch below `kTol.f_small_x`.
double f_bound(double x);

/// One bound comparison. `value` is the relative fluctuation
/// Var/<phi>^2 and `margin` = value - bound. A vacuous entry carries no
/// information (zero mean, or a bound at 0 or infinity).
struct BoundEntry {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool vacuous = false;

  bool holds(double slack = kTol.bound_margin) const { return vacuous || margin >= -slack; }
};

/// True when <phi> is zero relative to its spread.
bool mean_vanishes(double mean, double second_moment);

/// Var/<phi>^2 >= f(Sigma + Sigma* + b). Throws BoundViolationError when the
/// margin is below -kTol.bound_margin.
BoundEntry check_tur(const TrajectoryStats& stats);
/// The entropy-only comparison Var/<phi>^2 versus f(Sigma); never throws.
BoundEntry compare_tur_sigma_only(const TrajectoryStats& stats);
/// Var/<phi>^2 >= 1/(P^{-1} - 1). Throws BoundViolationError on violation.
BoundEntry check_kur(const TrajectoryStats& stats);

/// (Var/<phi>^2) / f(Sigma); nullopt when undefined.
std::optional<double> quality_factor(const TrajectoryStats& stats);

/// tr[(V0^dagger V0)^{-1} rho_S] with V0 = M_00^N. Needs p_0 = 1.
double survival_activity(const KrausSet& fwd, const DensityMatrix& rho_S, int N);
/// tr(V0^dagger V0 rho_S) under the same conditions.
double survival_inactivity(const KrausSet& fwd, const DensityMatrix& rho_S, int N);

/// (8/9) |<[H, Lsum]>|^2 / <2 H^2 + Lsum^2 / 2> T^2 with Lsum = sum L^dagger L.
double short_time_sigma_star_lb(const CMatrix& H, const std::vector<CMatrix>& jumps, const DensityMatrix& rho_S,
                                double T);

struct BoundReport {
  BoundEntry tur;
  BoundEntry tur_sigma_only;
  BoundEntry kur;
  std::optional<BoundEntry> survival;
  std::optional<BoundEntry> loschmidt;
  std::optional<double> quality;
};

}  // namespace qprecision
