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

#include "qprecision/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qprecision/parallel.hpp"

namespace qprecision {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Spectrum {
  std::vector<double> probs;
  CMatrix basis;
};

Spectrum spectrum_of(const DensityMatrix& rho) {
  auto eig = herm_eig(rho.matrix());
  Spectrum s;
  s.probs = std::move(eig.values);
  for (auto& p : s.probs) p = std::max(0.0, p);
  s.basis = std::move(eig.vectors);
  return s;
}

}  // namespace

Trajectory reverse(const Trajectory& gamma) {
  Trajectory r;
  r.n = gamma.m;
  r.m = gamma.n;
  r.pairs.reserve(gamma.pairs.size());
  for (auto it = gamma.pairs.rbegin(); it != gamma.pairs.rend(); ++it) r.pairs.push_back({it->mu, it->nu});
  return r;
}

std::size_t trajectory_count(std::size_t d_S, std::size_t d_E, int N) {
  if (N < 1) return 0;
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  std::size_t count = d_S;
  if (count > max / d_S) return max;
  count *= d_S;
  for (int i = 0; i < 2 * N; ++i) {
    if (count > max / d_E) return max;
    count *= d_E;
  }
  return count;
}

TrajectoryIndexer::TrajectoryIndexer(std::size_t d_S, std::size_t d_E, int N) : d_S_(d_S), d_E_(d_E), N_(N) {
  if (d_S == 0 || d_E == 0 || N < 1) throw DimError("TrajectoryIndexer: empty trajectory space");
  if (trajectory_count(d_S, d_E, N) == std::numeric_limits<std::size_t>::max()) {
    throw EnumerationCapError("trajectory space does not fit in an index");
  }
  Q_ = 1;
  for (int i = 0; i < N; ++i) Q_ *= d_E * d_E;
}

std::size_t TrajectoryIndexer::encode(const Trajectory& g) const {
  if (g.pairs.size() != static_cast<std::size_t>(N_) || g.n >= d_S_ || g.m >= d_S_) {
    throw DimError("TrajectoryIndexer::encode: trajectory does not match the space");
  }
  std::size_t code = 0;
  for (const auto& p : g.pairs) {
    if (p.nu >= d_E_ || p.mu >= d_E_) throw DimError("TrajectoryIndexer::encode: environment index");
    code = code * d_E_ * d_E_ + p.nu * d_E_ + p.mu;
  }
  return (g.n * Q_ + code) * d_S_ + g.m;
}

void TrajectoryIndexer::decode_into(std::size_t index, Trajectory& g) const {
  g.m = index % d_S_;
  std::size_t rest = index / d_S_;
  std::size_t code = rest % Q_;
  g.n = rest / Q_;
  g.pairs.resize(static_cast<std::size_t>(N_));
  const std::size_t e2 = d_E_ * d_E_;
  for (std::size_t i = static_cast<std::size_t>(N_); i-- > 0;) {
    const std::size_t c = code % e2;
    code /= e2;
    g.pairs[i] = {c / d_E_, c % d_E_};
  }
}

Trajectory TrajectoryIndexer::decode(std::size_t index) const {
  Trajectory g;
  decode_into(index, g);
  return g;
}

std::size_t TrajectoryIndexer::reversed(std::size_t index) const {
  const std::size_t m = index % d_S_;
  std::size_t rest = index / d_S_;
  std::size_t code = rest % Q_;
  const std::size_t n = rest / Q_;
  const std::size_t e2 = d_E_ * d_E_;
  // Digits come out last round first, which is the first round of the reverse.
  std::size_t rcode = 0;
  for (int i = 0; i < N_; ++i) {
    const std::size_t c = code % e2;
    code /= e2;
    const std::size_t nu = c / d_E_;
    const std::size_t mu = c % d_E_;
    rcode = rcode * e2 + mu * d_E_ + nu;
  }
  return (m * Q_ + rcode) * d_S_ + n;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

struct Walker {
  const KrausSet& k;
  const CMatrix& end_adj;  // rows are <end_m|
  std::vector<double>& out;
  std::size_t d;
  std::size_t e2;
  int N;

  // Fills `out` at base + code * d + m for all codes below this level.
  void descend(const std::vector<Complex>& psi, int level, std::size_t base, std::size_t code, double weight) const {
    if (level == N) {
      const std::size_t at = base + code * d;
      for (std::size_t m = 0; m < d; ++m) {
        Complex a{};
        for (std::size_t j = 0; j < d; ++j) a += end_adj(m, j) * psi[j];
        out[at + m] = weight * std::norm(a);
      }
      return;
    }
    const std::size_t dE = k.d_E();
    for (std::size_t c = 0; c < e2; ++c) {
      const CMatrix& op = k.op(c % dE, c / dE);
      descend(op * std::span<const Complex>(psi), level + 1, base, code * e2 + c, weight);
    }
  }
};

}  // namespace

std::vector<double> enumerate_probabilities(const KrausSet& k, std::span<const double> start_probs,
                                            const CMatrix& start_basis, const CMatrix& end_basis, int N,
                                            const EnumerationOptions& opts) {
  const std::size_t d = k.d_S();
  if (start_probs.size() != d || start_basis.rows() != d || end_basis.rows() != d) {
    throw DimError("enumerate_probabilities: basis or probability dimension");
  }
  const std::size_t total = trajectory_count(d, k.d_E(), N);
  if (total > opts.cap) {
    throw EnumerationCapError(std::to_string(total) + " trajectories exceed the cap of " + std::to_string(opts.cap) +
                              "; use Monte Carlo sampling instead");
  }
  const TrajectoryIndexer idx(d, k.d_E(), N);
  std::vector<double> out(idx.size(), 0.0);
  const CMatrix end_adj = end_basis.adjoint();
  const std::size_t e2 = k.d_E() * k.d_E();
  const std::size_t Q = idx.pair_codes();
  const std::size_t sub = Q / e2;  // codes per first-round digit
  const Walker walker{k, end_adj, out, d, e2, N};

  // One task per (n, first pair); each writes a disjoint block of `out`.
  parallel_for(d * e2, opts.threads, [&](std::size_t task) {
    const std::size_t n = task / e2;
    const std::size_t c1 = task % e2;
    if (start_probs[n] <= 0.0) return;
    const auto start = start_basis.column(n);
    const CMatrix& op = k.op(c1 % k.d_E(), c1 / k.d_E());
    const auto psi = op * std::span<const Complex>(start);
    const std::size_t base = (n * Q + c1 * sub) * d;
    walker.descend(psi, 1, base, 0, start_probs[n]);
  });
  return out;
}

double trajectory_probability(const KrausSet& k, std::span<const double> start_probs, const CMatrix& start_basis,
                              const CMatrix& end_basis, const Trajectory& g) {
  const std::size_t d = k.d_S();
  if (g.n >= d || g.m >= d) throw DimError("trajectory_probability: system index");
  std::vector<Complex> psi = start_basis.column(g.n);
  for (const auto& p : g.pairs) {
    if (p.mu >= k.d_E() || p.nu >= k.d_E()) throw DimError("trajectory_probability: environment index");
    psi = k.op(p.mu, p.nu) * std::span<const Complex>(psi);
  }
  const auto end = end_basis.column(g.m);
  return start_probs[g.n] * std::norm(inner(end, psi));
}

Enumeration enumerate(const KrausSet& fwd, const DensityMatrix& rho0, int N, Mode mode,
                      const EnumerationOptions& opts) {
  if (rho0.dim() != fwd.d_S()) throw DimError("enumerate: state dimension");
  Enumeration e;
  e.indexer = TrajectoryIndexer(fwd.d_S(), fwd.d_E(), N);
  e.mode = mode;
  e.env_probs = fwd.env_probs();
  e.threads = opts.threads;

  const Spectrum init = spectrum_of(rho0);
  e.p_init = init.probs;
  e.init_basis = init.basis;
  if (mode == Mode::stationary) {
    const double residual = max_abs_diff(channel_apply(fwd, rho0.matrix()), rho0.matrix());
    if (residual > 1e-9) {
      throw ModeError("stationary mode needs a fixed point of the channel (residual " + std::to_string(residual) + ")");
    }
    e.q_final = e.p_init;
    e.final_basis = e.init_basis;
  } else {
    const auto path = state_path(fwd, rho0, N);
    const Spectrum fin = spectrum_of(path.back());
    e.q_final = fin.probs;
    e.final_basis = fin.basis;
  }

  e.forward = enumerate_probabilities(fwd, e.p_init, e.init_basis, e.final_basis, N, opts);
  const double norm = deterministic_sum(e.forward.size(), opts.threads, [&](std::size_t i) { return e.forward[i]; });
  if (std::abs(norm - 1.0) > kTol.normalization) {
    throw ConsistencyError("forward probabilities sum to " + std::to_string(norm));
  }
  if (fwd.env_probs_positive()) {
    const KrausSet bwd = backward_kraus(fwd);
    e.backward = enumerate_probabilities(bwd, e.q_final, e.final_basis, e.init_basis, N, opts);
  }
  return e;
}

double backward_prob(const Trajectory& g, const KrausSet& fwd, std::span<const double> init_probs,
                     std::span<const double> final_probs, const CMatrix& init_basis, const CMatrix& final_basis) {
  const auto& p = fwd.env_probs();
  const double numer = final_probs[g.n];
  const double denom = init_probs[g.m];
  const double reversed = trajectory_probability(fwd, init_probs, init_basis, final_basis, reverse(g));
  double ratio = 1.0;
  for (const auto& pr : g.pairs) {
    if (p[pr.mu] <= 0.0) {
      if (p[pr.nu] > 0.0 && reversed > 0.0) throw SupportError("backward_prob: zero environment probability");
      return 0.0;
    }
    ratio *= p[pr.nu] / p[pr.mu];
  }
  if (denom <= 0.0) {
    if (numer > 0.0 && ratio > 0.0) {
      throw SupportError("backward_prob: initial probability of the reversed start vanishes");
    }
    return 0.0;
  }
  return numer / denom * ratio * reversed;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

Observable pair_observable(std::vector<std::vector<double>> c, ObservableKind kind, std::string name) {
  const std::size_t dE = c.size();
  for (const auto& row : c)
    if (row.size() != dE) throw ObservableError("pair observable coefficients must be square");
  Observable o;
  o.kind = kind;
  o.name = std::move(name);
  o.value = [c = std::move(c)](const Trajectory& g) {
    double s = 0.0;
    for (const auto& p : g.pairs) s += c[p.mu][p.nu];
    return s;
  };
  return o;
}

Observable change_indicator() {
  Observable o;
  o.kind = ObservableKind::generic;
  o.name = "indicator";
  o.value = [](const Trajectory& g) { return no_environment_change(g) ? 0.0 : 1.0; };
  return o;
}

bool no_environment_change(const Trajectory& g) {
  return std::all_of(g.pairs.begin(), g.pairs.end(), [](const EnvPair& p) { return p.mu == p.nu; });
}

void validate_observable(const TrajectoryIndexer& idx, const Observable& obs, const TrajectoryPredicate& inactive) {
  if (!obs.value) throw ObservableError("observable has no value function");
  Trajectory g;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx.decode_into(i, g);
    const double v = obs.value(g);
    if (!std::isfinite(v)) throw ObservableError(obs.name + ": non-finite value");
    if (obs.kind == ObservableKind::current) {
      const double r = obs.value(reverse(g));
      if (std::abs(v + r) > 1e-12 * (1.0 + std::abs(v))) {
        throw ObservableError(obs.name + ": not antisymmetric under time reversal");
      }
    } else if (inactive(g) && std::abs(v) > 1e-12) {
      throw ObservableError(obs.name + ": nonzero on the inactive set");
    }
  }
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

EnsembleStats ensemble_stats(const Enumeration& e, const TrajectoryPredicate& inactive) {
  const auto& idx = e.indexer;
  const std::size_t size = idx.size();
  const unsigned th = e.threads;
  const double floor = kTol.zero_probability;
  const auto& P = e.forward;
  const auto& pe = e.env_probs;

  EnsembleStats s;
  s.backward_available = e.backward_available();
  s.normalization = deterministic_sum(size, th, [&](std::size_t i) { return P[i]; });
  s.excluded_mass = deterministic_sum(size, th, [&](std::size_t i) { return P[i] < floor ? P[i] : 0.0; });
  s.inactivity = deterministic_sum(size, th, [&](std::size_t i) {
    if (P[i] < floor) return 0.0;
    thread_local Trajectory g;
    idx.decode_into(i, g);
    return inactive(g) ? P[i] : 0.0;
  });
  s.ell = deterministic_sum(size, th, [&](std::size_t i) {
    const double a = P[i];
    const double b = P[idx.reversed(i)];
    if (a + b < floor) return 0.0;
    return 0.5 * (a - b) * (a - b) / (a + b);
  });
  s.log_ratio = deterministic_sum(size, th, [&](std::size_t i) {
    if (P[i] < floor) return 0.0;
    const double r = P[idx.reversed(i)];
    return r > 0.0 ? P[i] * std::log(P[i] / r) : kInf;
  });
  if (!s.backward_available) return s;

  const auto& B = e.backward;
  s.sigma = deterministic_sum(size, th, [&](std::size_t i) {
    if (P[i] < floor) return 0.0;
    thread_local Trajectory g;
    idx.decode_into(i, g);
    double l = std::log(e.p_init[g.n]) - std::log(e.q_final[g.m]);
    for (const auto& pr : g.pairs) l += std::log(pe[pr.nu]) - std::log(pe[pr.mu]);
    return P[i] * l;
  });
  s.sigma_star = deterministic_sum(size, th, [&](std::size_t i) {
    if (P[i] < floor) return 0.0;
    return B[i] > 0.0 ? P[i] * std::log(P[i] / B[i]) : kInf;
  });
  if (e.mode == Mode::general) {
    s.boundary_b = deterministic_sum(size, th, [&](std::size_t i) {
      if (P[i] < floor) return 0.0;
      const std::size_t m = i % idx.d_S();
      const std::size_t n = i / idx.d_S() / idx.pair_codes();
      return P[i] * (std::log(e.q_final[m]) + std::log(e.q_final[n]) - std::log(e.p_init[m]) -
                     std::log(e.p_init[n]));
    });
  }
  s.ift_check = deterministic_sum(size, th, [&](std::size_t i) { return P[i] < floor ? 0.0 : B[i]; });

  if (s.sigma < -kTol.negative_entropy || s.sigma_star < -kTol.negative_entropy) {
    throw ConsistencyError("negative entropy production (Sigma = " + std::to_string(s.sigma) +
                           ", Sigma* = " + std::to_string(s.sigma_star) + ")");
  }
  return s;
}

ObservableMoments observable_moments(const Enumeration& e, const Observable& obs) {
  validate_observable(e.indexer, obs);
  const auto& idx = e.indexer;
  const auto& P = e.forward;
  const std::size_t size = idx.size();
  std::vector<double> phi(size, 0.0);
  parallel_for((size + 4095) / 4096, e.threads, [&](std::size_t c) {
    Trajectory g;
    const std::size_t hi = std::min(size, (c + 1) * 4096);
    for (std::size_t i = c * 4096; i < hi; ++i) {
      if (P[i] < kTol.zero_probability) continue;
      idx.decode_into(i, g);
      phi[i] = obs.value(g);
    }
  });
  ObservableMoments m;
  m.mean = deterministic_sum(size, e.threads, [&](std::size_t i) { return P[i] * phi[i]; });
  m.second_moment = deterministic_sum(size, e.threads, [&](std::size_t i) { return P[i] * phi[i] * phi[i]; });
  // Second pass around the mean avoids cancellation in the variance.
  m.variance = deterministic_sum(size, e.threads, [&](std::size_t i) {
    if (P[i] < kTol.zero_probability) return 0.0;
    const double d = phi[i] - m.mean;
    return P[i] * d * d;
  });
  return m;
}

TrajectoryStats compute_stats(const Enumeration& e, const Observable& obs, const TrajectoryPredicate& inactive) {
  const EnsembleStats s = ensemble_stats(e, inactive);
  const ObservableMoments m = observable_moments(e, obs);
  TrajectoryStats t;
  t.mean_phi = m.mean;
  t.var_phi = m.variance;
  t.second_moment = m.second_moment;
  t.sigma = s.sigma;
  t.sigma_star = s.sigma_star;
  t.boundary_b = s.boundary_b;
  t.log_ratio = s.log_ratio;
  t.inactivity = s.inactivity;
  t.ell = s.ell;
  t.ift_check = s.ift_check;
  t.excluded_mass = s.excluded_mass;
  t.backward_available = s.backward_available;
  return t;
}

// ---------------------------------------------------------------------------
// State-based quantities
// ---------------------------------------------------------------------------

namespace {

// D(U (rho (x) rho_E) U^dagger || rho' (x) rho_E) with rho' the output marginal.
double round_entropy_production(const ModelSpec& spec, const CMatrix& U, const DensityMatrix& rho,
                                const DensityMatrix& rho_E) {
  const CMatrix joint_in = kron(rho.matrix(), rho_E.matrix());
  const DensityMatrix joint_out = DensityMatrix::from_numerical(U * joint_in * U.adjoint());
  const DensityMatrix marginal = partial_trace_env(joint_out, spec.d_S, spec.d_E);
  const DensityMatrix reference = DensityMatrix::from_numerical(kron(marginal.matrix(), rho_E.matrix()));
  const RelativeEntropy d = quantum_rel_entropy(joint_out, reference);
  return d.infinite ? kInf : d.value;
}

}  // namespace

double sigma_from_states(const ModelSpec& spec, const DensityMatrix& rho_S) {
  const CMatrix U = total_unitary(spec);
  const DensityMatrix rho_E = DensityMatrix::diagonal(spec.environment_probabilities());
  return spec.N * round_entropy_production(spec, U, rho_S, rho_E);
}

double sigma_from_states_general(const ModelSpec& spec, const std::vector<DensityMatrix>& rho_path) {
  if (rho_path.size() < static_cast<std::size_t>(spec.N)) throw DimError("sigma_from_states_general: path too short");
  const CMatrix U = total_unitary(spec);
  const DensityMatrix rho_E = DensityMatrix::diagonal(spec.environment_probabilities());
  double total = 0.0;
  for (int i = 0; i < spec.N; ++i) total += round_entropy_production(spec, U, rho_path[static_cast<std::size_t>(i)], rho_E);
  return total;
}

std::vector<DensityMatrix> state_path(const KrausSet& k, const DensityMatrix& rho0, int N) {
  std::vector<DensityMatrix> path;
  path.reserve(static_cast<std::size_t>(N) + 1);
  path.push_back(rho0);
  for (int i = 0; i < N; ++i) path.push_back(channel_apply(k, path.back()));
  return path;
}

double entanglement_entropy_avg(const ModelSpec& spec, const DensityMatrix& rho_S) {
  const CMatrix U = total_unitary(spec);
  const auto pe = spec.environment_probabilities();
  const Spectrum sys = spectrum_of(rho_S);
  const std::size_t dS = spec.d_S;
  const std::size_t dE = spec.d_E;
  double total = 0.0;
  for (std::size_t n = 0; n < dS; ++n) {
    if (sys.probs[n] <= 0.0) continue;
    for (std::size_t nu = 0; nu < dE; ++nu) {
      if (pe[nu] <= 0.0) continue;
      // U |n, nu> with |n> from the eigenbasis of rho_S.
      std::vector<Complex> in(dS * dE);
      for (std::size_t i = 0; i < dS; ++i) in[i * dE + nu] = sys.basis(i, n);
      const auto out = U * std::span<const Complex>(in);
      CMatrix reduced(dS, dS);
      for (std::size_t i = 0; i < dS; ++i)
        for (std::size_t j = 0; j < dS; ++j) {
          Complex s{};
          for (std::size_t a = 0; a < dE; ++a) s += out[i * dE + a] * std::conj(out[j * dE + a]);
          reduced(i, j) = s;
        }
      total += sys.probs[n] * pe[nu] * vn_entropy(DensityMatrix::from_numerical(reduced));
    }
  }
  return total;
}

}  // namespace qprecision
