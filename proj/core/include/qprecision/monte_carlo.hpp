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

#include <cstdint>

#include "qprecision/trajectories.hpp"

namespace qprecision {

struct McOptions {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Samples per RNG stream; streams are keyed by block index, so the result
  // does not depend on `threads`.
  std::size_t block = 4096;
};

struct McEstimate {
  std::size_t n_samples = 0;
  double mean_phi = 0.0;
  double second_moment = 0.0;
  double var_phi = 0.0;
  double std_error = 0.0;  // of mean_phi
  double inactivity = 0.0;
  double sigma = 0.0;
  double sigma_star = 0.0;  // NaN when backward quantities are unavailable
};

/// Sequential sampling of the forward process with exact per-trajectory
/// log-ratios plugged into the entropy estimators.
McEstimate mc_sample(const KrausSet& fwd, const DensityMatrix& rho0, int N, Mode mode, const Observable& obs,
                     const McOptions& opts, const TrajectoryPredicate& inactive = no_environment_change);

}  // namespace qprecision
