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

#include "qprecision/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

namespace qprecision {

namespace {

void validate_probabilities(const std::vector<double>& p, std::size_t d, const char* who) {
  if (p.size() != d) {
    throw SpecError(std::string(who) + ": expected " + std::to_string(d) + " probabilities, got " +
                    std::to_string(p.size()));
  }
  double s = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw SpecError(std::string(who) + ": negative or non-finite probability");
    s += x;
  }
  if (std::abs(s - 1.0) > kTol.env_probability_sum) {
    throw SpecError(std::string(who) + ": probabilities sum to " + std::to_string(s));
  }
}

}  // namespace

ModelSpec ModelSpec::factored(CMatrix H_S, CMatrix H_E, const CMatrix& V_S, const CMatrix& V_E,
                              double lambda, double beta, double tau, int N) {
  ModelSpec s;
  s.d_S = H_S.rows();
  s.d_E = H_E.rows();
  if (V_S.rows() != s.d_S || V_E.rows() != s.d_E) throw DimError("ModelSpec::factored: V_S/V_E shape");
  if (!is_hermitian(V_S) || !is_hermitian(V_E)) throw HermiticityError("ModelSpec::factored: V_S or V_E");
  s.H_S = std::move(H_S);
  s.H_E = std::move(H_E);
  s.H_I = kron(V_S, V_E);
  s.lambda = lambda;
  s.beta = beta;
  s.tau = tau;
  s.N = N;
  return s;
}

void ModelSpec::validate() const {
  if (d_S < 2 || d_E < 2) throw SpecError("d_S and d_E must be at least 2");
  if (H_S.rows() != d_S || H_S.cols() != d_S) throw DimError("H_S must be d_S x d_S");
  if (H_E.rows() != d_E || H_E.cols() != d_E) throw DimError("H_E must be d_E x d_E");
  if (H_I.rows() != d_S * d_E || H_I.cols() != d_S * d_E) throw DimError("H_I must be (d_S d_E) x (d_S d_E)");
  if (!is_hermitian(H_S)) throw HermiticityError("H_S");
  if (!is_hermitian(H_E)) throw HermiticityError("H_E");
  if (!is_hermitian(H_I)) throw HermiticityError("H_I");
  for (std::size_t i = 0; i < d_E; ++i)
    for (std::size_t j = 0; j < d_E; ++j)
      if (i != j && std::abs(H_E(i, j)) > kTol.hermiticity) {
        throw SpecError("H_E must be diagonal in the measurement basis");
      }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw SpecError("tau must be positive");
  if (N < 1) throw SpecError("N must be at least 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw SpecError("beta must be nonnegative");
  if (!std::isfinite(lambda)) throw SpecError("lambda must be finite");
  if (env_probs) validate_probabilities(*env_probs, d_E, "env_probs");
}

CMatrix ModelSpec::total_hamiltonian() const {
  CMatrix h = kron(H_S, CMatrix::identity(d_E));
  h += kron(CMatrix::identity(d_S), H_E);
  h += H_I * Complex{lambda, 0.0};
  return h;
}

std::vector<double> ModelSpec::env_energies() const {
  std::vector<double> eps(d_E);
  for (std::size_t i = 0; i < d_E; ++i) eps[i] = H_E(i, i).real();
  return eps;
}

std::vector<double> ModelSpec::environment_probabilities() const {
  if (env_probs) return *env_probs;
  const auto eps = env_energies();
  const double e0 = *std::min_element(eps.begin(), eps.end());
  std::vector<double> p(d_E);
  for (std::size_t i = 0; i < d_E; ++i) p[i] = std::exp(-beta * (eps[i] - e0));
  const double z = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= z;
  return p;
}

KrausSet::KrausSet(std::size_t d_S, std::size_t d_E, std::vector<CMatrix> ops, std::vector<double> env_probs)
    : d_S_(d_S), d_E_(d_E), ops_(std::move(ops)), env_probs_(std::move(env_probs)) {
  if (ops_.size() != d_E_ * d_E_) throw DimError("KrausSet: expected d_E^2 operators");
  for (const auto& m : ops_)
    if (m.rows() != d_S_ || m.cols() != d_S_) throw DimError("KrausSet: operator is not d_S x d_S");
  validate_probabilities(env_probs_, d_E_, "KrausSet");
}

double KrausSet::completeness_error() const {
  CMatrix s(d_S_, d_S_);
  for (const auto& m : ops_) s += m.adjoint() * m;
  return max_abs_diff(s, CMatrix::identity(d_S_));
}

CMatrix KrausSet::transfer_matrix() const {
  CMatrix t(d_S_ * d_S_, d_S_ * d_S_);
  for (const auto& m : ops_) t += kron(m, m.conj());
  return t;
}

bool KrausSet::env_probs_positive() const {
  return std::all_of(env_probs_.begin(), env_probs_.end(), [](double p) { return p > 0.0; });
}

CMatrix total_unitary(const ModelSpec& spec) {
  spec.validate();
  return expm_i_hermitian(spec.total_hamiltonian(), spec.tau);
}

KrausSet kraus_from_unitary(const CMatrix& U, std::size_t d_S, std::size_t d_E, std::vector<double> env_probs) {
  if (U.rows() != d_S * d_E || U.cols() != d_S * d_E) throw DimError("kraus_from_unitary: U shape");
  std::vector<CMatrix> ops;
  ops.reserve(d_E * d_E);
  for (std::size_t mu = 0; mu < d_E; ++mu) {
    for (std::size_t nu = 0; nu < d_E; ++nu) {
      CMatrix m(d_S, d_S);
      const double w = std::sqrt(nu < env_probs.size() ? std::max(0.0, env_probs[nu]) : 0.0);
      for (std::size_t i = 0; i < d_S; ++i)
        for (std::size_t j = 0; j < d_S; ++j) m(i, j) = w * U(i * d_E + mu, j * d_E + nu);
      ops.push_back(std::move(m));
    }
  }
  KrausSet k(d_S, d_E, std::move(ops), std::move(env_probs));
  const double err = k.completeness_error();
  if (err > kTol.completeness) {
    throw KrausError("completeness violated by " + std::to_string(err) + " (is U unitary?)");
  }
  return k;
}

KrausSet forward_kraus(const ModelSpec& spec) {
  return kraus_from_unitary(total_unitary(spec), spec.d_S, spec.d_E, spec.environment_probabilities());
}

KrausSet backward_kraus(const KrausSet& forward) {
  if (!forward.env_probs_positive()) {
    throw SupportError("backward Kraus operators need strictly positive environment probabilities");
  }
  const std::size_t dE = forward.d_E();
  const auto& p = forward.env_probs();
  std::vector<CMatrix> ops;
  ops.reserve(dE * dE);
  for (std::size_t mu = 0; mu < dE; ++mu)
    for (std::size_t nu = 0; nu < dE; ++nu)
      ops.push_back(forward.op(nu, mu).adjoint() * Complex{std::sqrt(p[nu] / p[mu]), 0.0});
  return KrausSet(forward.d_S(), dE, std::move(ops), p);
}

CMatrix channel_apply(const KrausSet& k, const CMatrix& rho) {
  if (rho.rows() != k.d_S() || rho.cols() != k.d_S()) throw DimError("channel_apply: state dimension");
  CMatrix out(k.d_S(), k.d_S());
  for (const auto& m : k.ops()) out += m * rho * m.adjoint();
  return out;
}

DensityMatrix channel_apply(const KrausSet& k, const DensityMatrix& rho) {
  return DensityMatrix::from_numerical(channel_apply(k, rho.matrix()));
}

DensityMatrix stationary_state(const KrausSet& k) {
  const std::size_t d = k.d_S();
  CMatrix generator = k.transfer_matrix() - CMatrix::identity(d * d);
  const FixedPoint fp = trace_one_kernel(generator, d);
  if (fp.gap < kTol.stationary_gap) {
    throw NonUniqueStationaryError("fixed-point space is degenerate (gap " + std::to_string(fp.gap) + ")",
                                   fp.gap);
  }
  DensityMatrix rho = DensityMatrix::from_numerical(fp.state);
  const double residual = max_abs_diff(channel_apply(k, rho.matrix()), rho.matrix());
  if (residual > kTol.stationary_residual) {
    throw ConvergenceError("stationary state residual " + std::to_string(residual));
  }
  return rho;
}

ModelSpec thermal_operation_model(const std::vector<double>& eps_S, const std::vector<double>& eps_E,
                                  const std::vector<ResonantCoupling>& couplings, double tau, double beta) {
  const auto check_nondegenerate = [](const std::vector<double>& eps, const char* who) {
    for (std::size_t i = 0; i < eps.size(); ++i)
      for (std::size_t j = i + 1; j < eps.size(); ++j)
        if (std::abs(eps[i] - eps[j]) <= kTol.degeneracy) {
          throw DegeneracyError(std::string(who) + " levels " + std::to_string(i) + " and " +
                                std::to_string(j) + " are degenerate");
        }
  };
  check_nondegenerate(eps_S, "system");
  check_nondegenerate(eps_E, "environment");

  const std::size_t dS = eps_S.size();
  const std::size_t dE = eps_E.size();
  CMatrix h_i(dS * dE, dS * dE);
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (const auto& c : couplings) {
    if (c.m >= dS || c.n >= dS || c.mu >= dE || c.nu >= dE) throw DimError("coupling index out of range");
    const std::size_t a = c.m * dE + c.mu;
    const std::size_t b = c.n * dE + c.nu;
    if (a == b) throw ResonanceError("coupling connects a level to itself");
    const double mismatch = (eps_S[c.m] + eps_E[c.mu]) - (eps_S[c.n] + eps_E[c.nu]);
    if (std::abs(mismatch) > kTol.resonance) {
      throw ResonanceError("levels (" + std::to_string(c.m) + "," + std::to_string(c.mu) + ") and (" +
                           std::to_string(c.n) + "," + std::to_string(c.nu) + ") differ in energy by " +
                           std::to_string(mismatch));
    }
    if (!used.insert({c.m, c.mu}).second || !used.insert({c.n, c.nu}).second) {
      throw SpecError("each level pair may have at most one resonant partner");
    }
    h_i(a, b) += c.g;
    h_i(b, a) += c.g;
  }
  ModelSpec s;
  s.d_S = dS;
  s.d_E = dE;
  s.H_S = CMatrix::diagonal(std::span<const double>(eps_S));
  s.H_E = CMatrix::diagonal(std::span<const double>(eps_E));
  s.H_I = std::move(h_i);
  s.lambda = 1.0;
  s.beta = beta;
  s.tau = tau;
  s.N = 1;
  s.validate();
  return s;
}

}  // namespace qprecision
