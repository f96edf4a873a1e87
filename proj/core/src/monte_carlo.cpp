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

#include "qprecision/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qprecision/parallel.hpp"
#include "qprecision/rng.hpp"

namespace qprecision {

namespace {

struct BlockSums {
  double phi = 0.0;
  double phi2 = 0.0;
  double inactive = 0.0;
  double sigma = 0.0;
  double sigma_star = 0.0;
};

template <typename Weights>
std::size_t draw(RngStream& rng, const Weights& w, std::size_t count, double total) {
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (w[i] <= 0.0) continue;
    acc += w[i];
    last = i;
    if (u < acc) return i;
  }
  return last;  // rounding at the top end
}

}  // namespace

McEstimate mc_sample(const KrausSet& fwd, const DensityMatrix& rho0, int N, Mode mode, const Observable& obs,
                     const McOptions& opts, const TrajectoryPredicate& inactive) {
  if (opts.n_samples == 0) throw DomainError("mc_sample: n_samples must be positive");
  if (N < 1) throw DomainError("mc_sample: N must be positive");
  const std::size_t d = fwd.d_S();
  const std::size_t dE = fwd.d_E();

  auto init = herm_eig(rho0.matrix());
  std::vector<double> p = init.values;
  for (auto& x : p) x = std::max(0.0, x);
  CMatrix init_basis = init.vectors;
  std::vector<double> q = p;
  CMatrix final_basis = init_basis;
  if (mode == Mode::general) {
    auto fin = herm_eig(state_path(fwd, rho0, N).back().matrix());
    q = fin.values;
    for (auto& x : q) x = std::max(0.0, x);
    final_basis = fin.vectors;
  }
  const CMatrix final_adj = final_basis.adjoint();
  const bool have_backward = fwd.env_probs_positive();
  const KrausSet bwd = have_backward ? backward_kraus(fwd) : fwd;
  const auto& pe = fwd.env_probs();
  const double p_total = std::accumulate(p.begin(), p.end(), 0.0);

  const std::size_t blocks = (opts.n_samples + opts.block - 1) / opts.block;
  std::vector<BlockSums> sums(blocks);
  parallel_for(blocks, opts.threads, [&](std::size_t b) {
    RngStream rng(opts.seed, rng_tag::kMonteCarlo, b);
    const std::size_t lo = b * opts.block;
    const std::size_t hi = std::min(opts.n_samples, lo + opts.block);
    std::vector<double> phi_v, phi2_v, inact_v, sig_v, sigs_v;
    Trajectory g;
    g.pairs.resize(static_cast<std::size_t>(N));
    std::vector<double> w(dE * dE);
    std::vector<std::vector<Complex>> branch(dE * dE);
    std::vector<double> wm(d);
    for (std::size_t s = lo; s < hi; ++s) {
      g.n = draw(rng, p, d, p_total);
      std::vector<Complex> psi = init_basis.column(g.n);
      double log_p = std::log(p[g.n]);
      for (int r = 0; r < N; ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < dE * dE; ++c) {
          branch[c] = fwd.op(c % dE, c / dE) * std::span<const Complex>(psi);
          double nrm = 0.0;
          for (const auto& z : branch[c]) nrm += std::norm(z);
          w[c] = nrm;
          total += nrm;
        }
        const std::size_t c = draw(rng, w, dE * dE, total);
        g.pairs[static_cast<std::size_t>(r)] = {c / dE, c % dE};
        log_p += std::log(w[c]);
        const double scale = 1.0 / std::sqrt(w[c]);
        psi = branch[c];
        for (auto& z : psi) z *= scale;
      }
      double wtot = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        Complex a{};
        for (std::size_t j = 0; j < d; ++j) a += final_adj(m, j) * psi[j];
        wm[m] = std::norm(a);
        wtot += wm[m];
      }
      g.m = draw(rng, wm, d, wtot);
      log_p += std::log(wm[g.m]);

      const double phi = obs.value(g);
      phi_v.push_back(phi);
      phi2_v.push_back(phi * phi);
      inact_v.push_back(inactive(g) ? 1.0 : 0.0);
      double l = std::log(p[g.n]) - std::log(q[g.m]);
      for (const auto& pr : g.pairs) l += std::log(pe[pr.nu]) - std::log(pe[pr.mu]);
      sig_v.push_back(l);
      if (have_backward) {
        const double pb = trajectory_probability(bwd, q, final_basis, init_basis, g);
        sigs_v.push_back(log_p - std::log(pb));
      }
    }
    sums[b] = {pairwise_sum(phi_v), pairwise_sum(phi2_v), pairwise_sum(inact_v), pairwise_sum(sig_v),
               pairwise_sum(sigs_v)};
  });

  const auto merge = [&](double BlockSums::*field) {
    std::vector<double> v(blocks);
    for (std::size_t b = 0; b < blocks; ++b) v[b] = sums[b].*field;
    return pairwise_sum(v);
  };
  const double n = static_cast<double>(opts.n_samples);
  McEstimate est;
  est.n_samples = opts.n_samples;
  est.mean_phi = merge(&BlockSums::phi) / n;
  est.second_moment = merge(&BlockSums::phi2) / n;
  est.var_phi = std::max(0.0, est.second_moment - est.mean_phi * est.mean_phi) * (n > 1 ? n / (n - 1) : 1.0);
  est.std_error = std::sqrt(est.var_phi / n);
  est.inactivity = merge(&BlockSums::inactive) / n;
  est.sigma = merge(&BlockSums::sigma) / n;
  est.sigma_star = have_backward ? merge(&BlockSums::sigma_star) / n : std::numeric_limits<double>::quiet_NaN();
  return est;
}

}  // namespace qprecision
