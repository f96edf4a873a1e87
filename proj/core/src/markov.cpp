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

#include "qprecision/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qprecision/parallel.hpp"

namespace qprecision {

namespace {

double norm1(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Taylor series of exp(a) for small ||a||, summed to machine precision.
CMatrix taylor_exp(const CMatrix& a) {
  CMatrix sum = CMatrix::identity(a.rows());
  CMatrix term = CMatrix::identity(a.rows());
  for (int k = 1; k <= 60; ++k) {
    term = term * a;
    term *= Complex{1.0 / k, 0.0};
    sum += term;
    if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
  }
  return sum;
}

CMatrix matrix_power(CMatrix base, std::size_t e) {
  CMatrix result = CMatrix::identity(base.rows());
  bool first = true;
  while (e > 0) {
    if (e & 1U) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

std::vector<Complex> vec(const CMatrix& m) { return {m.data().begin(), m.data().end()}; }

}  // namespace

void LindbladSpec::validate() const {
  if (d_S < 1) throw SpecError("Lindblad spec: empty system");
  if (H.rows() != d_S || H.cols() != d_S) throw DimError("Lindblad spec: H must be d_S x d_S");
  if (!is_hermitian(H)) throw HermiticityError("Lindblad spec: H");
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const auto& j = jumps[k];
    if (j.L.rows() != d_S || j.L.cols() != d_S) throw DimError("Lindblad spec: jump " + std::to_string(k) + " shape");
    if (!std::isfinite(j.ds)) throw SpecError("Lindblad spec: non-finite ds for jump " + std::to_string(k));
    if (!j.partner) continue;
    const std::size_t p = *j.partner;
    if (p >= jumps.size()) throw SpecError("Lindblad spec: partner index out of range for jump " + std::to_string(k));
    if (p == k && !is_hermitian(j.L, kTol.ldb)) {
      throw SpecError("Lindblad spec: self-paired jump " + std::to_string(k) + " must be Hermitian");
    }
    const CMatrix expected = jumps[p].L.adjoint() * Complex{std::exp(0.5 * j.ds), 0.0};
    const double err = max_abs_diff(j.L, expected);
    if (err > kTol.ldb) {
      throw SpecError("Lindblad spec: jump " + std::to_string(k) + " violates local detailed balance by " +
                      std::to_string(err));
    }
  }
}

std::vector<CMatrix> LindbladSpec::jump_matrices() const {
  std::vector<CMatrix> out;
  out.reserve(jumps.size());
  for (const auto& j : jumps) out.push_back(j.L);
  return out;
}

CMatrix LindbladSpec::decay_operator() const {
  CMatrix s(d_S, d_S);
  for (const auto& j : jumps) s += j.L.adjoint() * j.L;
  return s;
}

CMatrix effective_hamiltonian(const LindbladSpec& spec) {
  return spec.H - spec.decay_operator() * Complex{0.0, 0.5};
}

CMatrix liouvillian(const LindbladSpec& spec, bool signflip) {
  const std::size_t d = spec.d_S;
  const CMatrix I = CMatrix::identity(d);
  const Complex coherent = signflip ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
  CMatrix gen = (kron(spec.H, I) - kron(I, spec.H.transpose())) * coherent;
  for (const auto& j : spec.jumps) {
    const CMatrix ldl = j.L.adjoint() * j.L;
    gen += kron(j.L, j.L.conj());
    gen -= (kron(ldl, I) + kron(I, ldl.transpose())) * Complex{0.5, 0.0};
  }
  return gen;
}

DensityMatrix lindblad_stationary_state(const LindbladSpec& spec) {
  spec.validate();
  const FixedPoint fp = trace_one_kernel(liouvillian(spec), spec.d_S);
  if (fp.gap < kTol.stationary_gap) {
    throw NonUniqueStationaryError("Lindblad generator has a degenerate kernel (gap " + std::to_string(fp.gap) + ")",
                                   fp.gap);
  }
  DensityMatrix rho = DensityMatrix::from_numerical(fp.state);
  const auto residual = liouvillian(spec) * std::span<const Complex>(vec(rho.matrix()));
  double worst = 0.0;
  for (const auto& z : residual) worst = std::max(worst, std::abs(z));
  if (worst > kTol.stationary_residual) {
    throw ConvergenceError("Lindblad stationary residual " + std::to_string(worst));
  }
  return rho;
}

std::size_t recommended_no_jump_steps(const LindbladSpec& spec, double T) {
  const double total = norm1(effective_hamiltonian(spec)) * std::abs(T);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total / kTol.no_jump_step_norm)));
}

CMatrix no_jump_propagator(const LindbladSpec& spec, double T, std::size_t steps) {
  if (steps == 0) throw DomainError("no_jump_propagator: steps must be positive");
  if (!(T >= 0.0)) throw DomainError("no_jump_propagator: T must be nonnegative");
  const CMatrix a = effective_hamiltonian(spec) * Complex{0.0, -T / static_cast<double>(steps)};
  const double step_norm = norm1(a);
  if (step_norm > kTol.no_jump_step_norm) {
    throw AccuracyError("no-jump sub-step norm " + std::to_string(step_norm) + " exceeds " +
                        std::to_string(kTol.no_jump_step_norm) + "; use at least " +
                        std::to_string(recommended_no_jump_steps(spec, T)) + " steps");
  }
  return matrix_power(taylor_exp(a), steps);
}

double no_jump_probability(const LindbladSpec& spec, const DensityMatrix& rho, double T, std::size_t steps) {
  const CMatrix v = no_jump_propagator(spec, T, steps ? steps : recommended_no_jump_steps(spec, T));
  return (v * rho.matrix() * v.adjoint()).trace().real();
}

double loschmidt_echo(const LindbladSpec& spec, const DensityMatrix& rho, double T, std::size_t steps) {
  const CMatrix v = no_jump_propagator(spec, T, steps ? steps : recommended_no_jump_steps(spec, T));
  return std::norm((v * rho.matrix()).trace());
}

double dynamical_activity(const LindbladSpec& spec, const DensityMatrix& rho, double T) {
  double s = 0.0;
  for (const auto& j : spec.jumps) s += (j.L * rho.matrix() * j.L.adjoint()).trace().real();
  return T * s;
}

UnraveledKraus unraveled_kraus_sets(const LindbladSpec& spec, double T, std::size_t steps) {
  spec.validate();
  if (steps == 0 || !(T > 0.0)) throw DomainError("unraveled_kraus_sets: need T > 0 and steps > 0");
  const std::size_t d = spec.d_S;
  UnraveledKraus u;
  u.dt = T / static_cast<double>(steps);
  const CMatrix heff = effective_hamiltonian(spec);
  const CMatrix I = CMatrix::identity(d);
  u.forward.push_back(I - heff * Complex{0.0, u.dt});
  u.backward.push_back(I + heff.adjoint() * Complex{0.0, u.dt});
  for (const auto& j : spec.jumps) {
    u.forward.push_back(j.L * Complex{std::sqrt(u.dt), 0.0});
    u.backward.push_back(j.L * Complex{std::sqrt(u.dt), 0.0});
  }
  const auto complete = [&](std::vector<CMatrix>& ops) {
    CMatrix s(d, d);
    for (const auto& op : ops) s += op.adjoint() * op;
    const CMatrix corr = hermitian_function(hermitian_part(s), [](double x) { return 1.0 / std::sqrt(x); });
    for (auto& op : ops) op = op * corr;
    return max_abs_diff(corr, I);
  };
  u.forward_correction = complete(u.forward);
  u.backward_correction = complete(u.backward);
  return u;
}

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct PathPartial {
  std::vector<double> fwd;
  std::vector<double> bwd;
  std::vector<double> terms;
};

struct PathWalker {
  const UnraveledKraus& ops;
  const CMatrix& basis_adj;
  std::size_t steps;
  int max_jumps;  // negative: unlimited
  double weight;

  void leaf(const std::vector<Complex>& f, const std::vector<Complex>& b, PathPartial& out) const {
    const std::size_t d = basis_adj.rows();
    for (std::size_t m = 0; m < d; ++m) {
      Complex af{}, ab{};
      for (std::size_t j = 0; j < d; ++j) {
        af += basis_adj(m, j) * f[j];
        ab += basis_adj(m, j) * b[j];
      }
      const double P = weight * std::norm(af);
      const double Pb = weight * std::norm(ab);
      out.fwd.push_back(P);
      out.bwd.push_back(Pb);
      if (P < kTol.zero_probability) continue;
      // P ln(P/P~) - P + P~ is termwise nonnegative and sums without cancellation.
      out.terms.push_back(Pb > 0.0 ? P * std::log(P / Pb) - P + Pb : std::numeric_limits<double>::infinity());
    }
  }

  void descend(const std::vector<Complex>& f, const std::vector<Complex>& b, std::size_t level, int jumps,
               PathPartial& out) const {
    if (level == steps) {
      leaf(f, b, out);
      return;
    }
    for (std::size_t k = 0; k < ops.forward.size(); ++k) {
      const int next_jumps = jumps + (k > 0 ? 1 : 0);
      if (max_jumps >= 0 && next_jumps > max_jumps) continue;
      descend(ops.forward[k] * std::span<const Complex>(f), ops.backward[k] * std::span<const Complex>(b), level + 1,
              next_jumps, out);
    }
  }
};

}  // namespace

PathStats markov_sigma_star(const LindbladSpec& spec, const DensityMatrix& rho_ss, double T, std::size_t steps,
                            const PathOptions& opts) {
  const UnraveledKraus ops = unraveled_kraus_sets(spec, T, steps);
  const std::size_t d = spec.d_S;
  const std::size_t K = spec.jumps.size();
  const std::size_t labels = K + 1;

  double exact_count = static_cast<double>(d * d) * std::pow(static_cast<double>(labels), static_cast<double>(steps));
  int max_jumps = opts.max_jumps;
  if (max_jumps < 0) {
    const bool exact_ok = steps <= static_cast<std::size_t>(kTol.markov_exact_max_steps) &&
                          K <= static_cast<std::size_t>(kTol.markov_exact_max_channels) &&
                          exact_count <= static_cast<double>(opts.cap);
    max_jumps = exact_ok ? -1 : kTol.markov_truncated_max_jumps;
  }
  double count = exact_count;
  if (max_jumps >= 0) {
    count = 0.0;
    for (int j = 0; j <= max_jumps && static_cast<std::size_t>(j) <= steps; ++j)
      count += static_cast<double>(binomial(steps, static_cast<std::size_t>(j))) *
               std::pow(static_cast<double>(K), j);
    count *= static_cast<double>(d * d);
  }
  if (count > static_cast<double>(opts.cap)) {
    throw EnumerationCapError(std::to_string(static_cast<long double>(count)) + " paths exceed the cap of " +
                              std::to_string(opts.cap));
  }

  const auto eig = herm_eig(rho_ss.matrix());
  const CMatrix basis_adj = eig.vectors.adjoint();
  std::vector<PathPartial> partial(d * labels);
  parallel_for(d * labels, opts.threads, [&](std::size_t task) {
    const std::size_t n = task / labels;
    const std::size_t k = task % labels;
    const double p = std::max(0.0, eig.values[n]);
    if (p <= 0.0) return;
    const int jumps = k > 0 ? 1 : 0;
    if (max_jumps >= 0 && jumps > max_jumps) return;
    const auto start = eig.vectors.column(n);
    const PathWalker walker{ops, basis_adj, steps, max_jumps, p};
    walker.descend(ops.forward[k] * std::span<const Complex>(start), ops.backward[k] * std::span<const Complex>(start),
                   1, jumps, partial[task]);
  });

  std::vector<double> fwd, bwd, terms;
  std::size_t paths = 0;
  for (const auto& part : partial) {
    fwd.push_back(pairwise_sum(part.fwd));
    bwd.push_back(pairwise_sum(part.bwd));
    terms.push_back(pairwise_sum(part.terms));
    paths += part.fwd.size();
  }
  PathStats s;
  s.forward_mass = pairwise_sum(fwd);
  s.backward_mass = pairwise_sum(bwd);
  s.sigma_star = pairwise_sum(terms);
  if (max_jumps >= 0) s.sigma_star += s.forward_mass - s.backward_mass;
  s.truncated_mass = std::max(0.0, 1.0 - s.forward_mass);
  s.paths = paths;
  s.max_jumps = max_jumps;
  s.correction = std::max(ops.forward_correction, ops.backward_correction);
  return s;
}

std::size_t recommended_rk4_steps(const LindbladSpec& spec, double T, bool signflip) {
  const double x = norm1(liouvillian(spec, signflip)) * std::abs(T);
  if (x == 0.0) return 1;
  // steps * (x / steps)^5 / 120 <= budget  <=>  steps^4 >= x^5 / (120 budget)
  const double s = std::pow(std::pow(x, 5.0) / (120.0 * kTol.rk4_budget), 0.25);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(s * (1.0 + 1e-12))));
}

DensityMatrix lindblad_evolve(const LindbladSpec& spec, const DensityMatrix& rho0, double T, std::size_t steps,
                              bool signflip) {
  if (rho0.dim() != spec.d_S) throw DimError("lindblad_evolve: state dimension");
  if (!(T >= 0.0)) throw DomainError("lindblad_evolve: T must be nonnegative");
  const CMatrix gen = liouvillian(spec, signflip);
  if (steps == 0) steps = recommended_rk4_steps(spec, T, signflip);
  const double dt = T / static_cast<double>(steps);
  const double budget = static_cast<double>(steps) * std::pow(norm1(gen) * dt, 5.0) / 120.0;
  if (budget > kTol.rk4_budget * (1.0 + 1e-9)) {
    throw AccuracyError("RK4 error budget " + std::to_string(budget) + " exceeds " + std::to_string(kTol.rk4_budget) +
                        "; use at least " + std::to_string(recommended_rk4_steps(spec, T, signflip)) + " steps");
  }
  std::vector<Complex> x = vec(rho0.matrix());
  const std::size_t n = x.size();
  std::vector<Complex> tmp(n);
  const auto apply = [&](const std::vector<Complex>& v) { return gen * std::span<const Complex>(v); };
  for (std::size_t s = 0; s < steps; ++s) {
    const auto k1 = apply(x);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const auto k2 = apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const auto k3 = apply(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    const auto k4 = apply(tmp);
    for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const CMatrix out = hermitian_part(CMatrix(spec.d_S, spec.d_S, std::move(x)));
  const double tr = out.trace().real();
  if (std::abs(tr - 1.0) > 1e-9) throw AccuracyError("lindblad_evolve: trace drifted to " + std::to_string(tr));
  const auto eig = herm_eig(out);
  if (eig.values.front() < -1e-8) {
    throw AccuracyError("lindblad_evolve: eigenvalue " + std::to_string(eig.values.front()) + " below -1e-8");
  }
  if (eig.values.front() >= kTol.min_eigenvalue) return DensityMatrix::from_numerical(out);
  return DensityMatrix::from_numerical(hermitian_function(out, [](double v) { return std::max(0.0, v); }));
}

RelativeEntropy sigma_star_dp_lower_bound(const LindbladSpec& spec, const DensityMatrix& rho_ss, double T) {
  const DensityMatrix evolved = lindblad_evolve(spec, rho_ss, T, 0, true);
  const auto eig = herm_eig(rho_ss.matrix());
  std::vector<double> p(spec.d_S), q(spec.d_S);
  for (std::size_t i = 0; i < spec.d_S; ++i) {
    p[i] = std::max(0.0, eig.values[i]);
    const auto v = eig.vectors.column(i);
    q[i] = std::max(0.0, inner(v, evolved.matrix() * std::span<const Complex>(v)).real());
  }
  return kl_divergence(p, q);
}

LindbladSpec driven_qubit(double omega, double gamma, double nbar) {
  if (!(gamma > 0.0) || !(nbar > 0.0)) throw SpecError("driven_qubit: gamma and nbar must be positive");
  LindbladSpec s;
  s.d_S = 2;
  s.H = CMatrix{{0.0, 0.5 * omega}, {0.5 * omega, 0.0}};
  const double ds = std::log((nbar + 1.0) / nbar);
  JumpOperator down{CMatrix{{0.0, std::sqrt(gamma * (nbar + 1.0))}, {0.0, 0.0}}, ds, 1};
  JumpOperator up{CMatrix{{0.0, 0.0}, {std::sqrt(gamma * nbar), 0.0}}, -ds, 0};
  s.jumps = {down, up};
  s.validate();
  return s;
}

}  // namespace qprecision
