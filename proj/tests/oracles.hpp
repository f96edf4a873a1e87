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

// Reference computations for tests. Each one avoids the library routine it checks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qprecision/model.hpp"
#include "qprecision/qlinalg.hpp"
#include "qprecision/rng.hpp"
#include "qprecision/trajectories.hpp"

namespace oracle {

using qprecision::CMatrix;
using qprecision::Complex;
using LComplex = std::complex<long double>;
using LMatrix = std::vector<std::vector<LComplex>>;

inline LMatrix to_long(const CMatrix& a) {
  LMatrix m(a.rows(), std::vector<LComplex>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = LComplex(a(i, j).real(), a(i, j).imag());
  return m;
}

inline CMatrix from_long(const LMatrix& m) {
  CMatrix a(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      a(i, j) = Complex(static_cast<double>(m[i][j].real()), static_cast<double>(m[i][j].imag()));
  return a;
}

inline LMatrix lmul(const LMatrix& a, const LMatrix& b) {
  const std::size_t n = a.size();
  LMatrix c(n, std::vector<LComplex>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// exp(a) by 2^-s scaling, 30 Taylor terms in long double, then s squarings.
inline CMatrix taylor_expm(const CMatrix& a) {
  const std::size_t n = a.rows();
  long double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double row = 0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(LComplex(a(i, j).real(), a(i, j).imag()));
    norm = std::max(norm, row);
  }
  int s = 0;
  while (norm > 0.1L) {
    norm /= 2;
    ++s;
  }
  LMatrix x = to_long(a);
  const long double scale = std::ldexp(1.0L, -s);
  for (auto& row : x)
    for (auto& z : row) z *= scale;
  LMatrix result(n, std::vector<LComplex>(n));
  LMatrix term(n, std::vector<LComplex>(n));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1;
  for (int k = 1; k <= 30; ++k) {
    term = lmul(term, x);
    for (auto& row : term)
      for (auto& z : row) z /= static_cast<long double>(k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
  }
  for (int i = 0; i < s; ++i) result = lmul(result, result);
  return from_long(result);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t mu = 0; mu < b.rows(); ++mu)
        for (std::size_t nu = 0; nu < b.cols(); ++nu) c(i * b.rows() + mu, j * b.cols() + nu) = a(i, j) * b(mu, nu);
  return c;
}

inline CMatrix partial_trace_env(const CMatrix& rho, std::size_t dS, std::size_t dE) {
  CMatrix r(dS, dS);
  for (std::size_t i = 0; i < dS; ++i)
    for (std::size_t j = 0; j < dS; ++j)
      for (std::size_t mu = 0; mu < dE; ++mu) r(i, j) += rho(i * dE + mu, j * dE + mu);
  return r;
}

inline CMatrix random_hermitian(qprecision::RngStream& rng, std::size_t d) {
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = rng.uniform(-1.0, 1.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      m(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

inline CMatrix random_density(qprecision::RngStream& rng, std::size_t d) {
  CMatrix g(d, d);
  for (auto& z : g.data()) z = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  CMatrix r = g * g.adjoint();
  const Complex tr = r.trace();
  for (auto& z : r.data()) z /= tr;
  return r;
}

// Amplitude chain built straight from the joint unitary W; every round starts the
// environment in nu and ends it in mu.
inline double chain_probability(const CMatrix& W, std::size_t dS, std::size_t dE, const std::vector<double>& env,
                                double start_prob, std::vector<Complex> psi, const std::vector<Complex>& end,
                                const std::vector<qprecision::EnvPair>& pairs) {
  for (const auto& pr : pairs) {
    const std::size_t in = pr.nu;
    const std::size_t out = pr.mu;
    std::vector<Complex> next(dS);
    for (std::size_t i = 0; i < dS; ++i)
      for (std::size_t j = 0; j < dS; ++j) next[i] += W(i * dE + out, j * dE + in) * psi[j];
    for (auto& z : next) z *= std::sqrt(env[in]);
    psi = std::move(next);
  }
  Complex amp = 0;
  for (std::size_t i = 0; i < dS; ++i) amp += std::conj(end[i]) * psi[i];
  return start_prob * std::norm(amp);
}

inline std::vector<Complex> column(const CMatrix& b, std::size_t k, bool conjugate) {
  std::vector<Complex> v(b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i) v[i] = conjugate ? std::conj(b(i, k)) : b(i, k);
  return v;
}

// P(gamma) = p_n |<m| ... sqrt(p_nu) <mu|U|nu> ... |n>|^2.
inline double forward_probability(const CMatrix& U, std::size_t dS, std::size_t dE, const std::vector<double>& env,
                                  const std::vector<double>& p, const CMatrix& init_basis, const CMatrix& final_basis,
                                  const qprecision::Trajectory& g) {
  return chain_probability(U, dS, dE, env, p[g.n], column(init_basis, g.n, false), column(final_basis, g.m, false),
                           g.pairs);
}

// Backward process with time reversal = complex conjugation: joint unitary U^T, start
// from the conjugated final eigenbasis with weights q, end in the conjugated initial basis.
inline double backward_probability(const CMatrix& U, std::size_t dS, std::size_t dE, const std::vector<double>& env,
                                   const std::vector<double>& q, const CMatrix& init_basis,
                                   const CMatrix& final_basis, const qprecision::Trajectory& g) {
  return chain_probability(U.transpose(), dS, dE, env, q[g.n], column(final_basis, g.n, true),
                           column(init_basis, g.m, true), g.pairs);
}

// x tanh x = y by bisection in long double.
inline long double phi_inverse(long double y) {
  if (y == 0) return 0;
  long double lo = 0, hi = std::max(std::sqrt(y), y) + 1;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (mid * std::tanh(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

inline long double f_reference(long double x) {
  const long double s = std::sinh(phi_inverse(x / 2));
  return 1.0L / (s * s);
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

}  // namespace oracle
