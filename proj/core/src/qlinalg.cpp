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

#include "qprecision/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qprecision {

namespace {

void require_square(const CMatrix& a, const char* who) {
  if (!a.is_square()) {
    throw DimError(std::string(who) + ": expected a square matrix, got " +
                   std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimError(std::string(who) + ": shape mismatch");
  }
}

double norm1(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// CMatrix
// ---------------------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimError("CMatrix: entry count " + std::to_string(data_.size()) +
                   " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::unit(std::size_t n, std::size_t row, std::size_t col) {
  CMatrix m(n, n);
  m(row, col) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conj() const {
  CMatrix r = *this;
  for (auto& z : r.data_) z = std::conj(z);
  return r;
}

Complex CMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

std::vector<Complex> CMatrix::column(std::size_t j) const {
  std::vector<Complex> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw DimError("matrix product: inner dimensions differ");
  CMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimError("matrix-vector product: dimension mismatch");
  std::vector<Complex> r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

double spectral_norm(const CMatrix& a) {
  const auto eig = herm_eig(hermitian_part(a.adjoint() * a));
  return std::sqrt(std::max(0.0, eig.values.back()));
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

double unitarity_error(const CMatrix& a) {
  require_square(a, "unitarity_error");
  return max_abs_diff(a.adjoint() * a, CMatrix::identity(a.rows()));
}

CMatrix hermitian_part(const CMatrix& a) {
  require_square(a, "hermitian_part");
  CMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return r;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw DimError("inner: length mismatch");
  Complex s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver
// ---------------------------------------------------------------------------

EigenSystem herm_eig(const CMatrix& input) {
  require_square(input, "herm_eig");
  const std::size_t n = input.rows();
  const double scale = std::max(1.0, max_abs(input));
  if (!is_hermitian(input, kTol.hermiticity * scale)) {
    throw HermiticityError("herm_eig: input deviates from its adjoint by more than " +
                           std::to_string(kTol.hermiticity * scale));
  }

  CMatrix a = hermitian_part(input);
  CMatrix v = CMatrix::identity(n);
  const double threshold = kTol.jacobi_off_diagonal * std::max(1.0, frobenius_norm(a));
  constexpr double kQuarterPi = 0.78539816339744830962;

  bool converged = n <= 1;
  for (int sweep = 0; sweep < kTol.jacobi_max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (std::sqrt(off) <= threshold) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const Complex e = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        double theta = 0.5 * std::atan2(2.0 * r, app - aqq);
        if (theta > kQuarterPi) theta -= 2.0 * kQuarterPi;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Complex se_conj = s * std::conj(e);
        const Complex ce_conj = c * std::conj(e);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + se_conj * akq;
          a(k, q) = -s * akp + ce_conj * akq;
        }
        const Complex se = s * e;
        const Complex ce = c * e;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + se * aqk;
          a(q, k) = -s * apk + ce * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + se_conj * vkq;
          v(k, q) = -s * vkp + ce_conj * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (std::sqrt(off) > threshold) {
      throw ConvergenceError("herm_eig: Jacobi sweeps exhausted with off-diagonal norm " +
                             std::to_string(std::sqrt(off)));
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src).real();
    Complex phase{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > kTol.phase_zero) {
        phase = std::conj(v(i, src)) / mag;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, src) * phase;
    // The leading component is exactly real after rephasing up to rounding.
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(out.vectors(i, k)) > kTol.phase_zero) {
        out.vectors(i, k) = out.vectors(i, k).real();
        break;
      }
    }
  }
  return out;
}

CMatrix hermitian_function(const CMatrix& a, const std::function<double(double)>& fn) {
  const auto eig = herm_eig(a);
  const std::size_t n = a.rows();
  CMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = fn(eig.values[k]);
    if (f == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = eig.vectors(i, k) * f;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return r;
}

CMatrix expm_i_hermitian(const CMatrix& h, double t) {
  const auto eig = herm_eig(h);
  const std::size_t n = h.rows();
  CMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ph = std::polar(1.0, -eig.values[k] * t);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = eig.vectors(i, k) * ph;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return r;
}

CMatrix expm(const CMatrix& a) {
  require_square(a, "expm");
  const std::size_t n = a.rows();
  const double nrm = norm1(a);
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const CMatrix scaled = a * Complex{std::ldexp(1.0, -squarings), 0.0};

  CMatrix sum = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled;
    term *= Complex{1.0 / k, 0.0};
    sum += term;
    if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

// ---------------------------------------------------------------------------
// LU
// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(const CMatrix& a) : n_(a.rows()), lu_(a), perm_(a.rows()) {
  require_square(a, "LuFactorization");
  std::iota(perm_.begin(), perm_.end(), 0);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    for (std::size_t i = k + 1; i < n_; ++i) {
      const Complex f = lu_(i, k) / lu_(k, k);
      lu_(i, k) = f;
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

std::vector<Complex> LuFactorization::solve(std::span<const Complex> rhs) const {
  if (rhs.size() != n_) throw DimError("LuFactorization::solve: rhs length mismatch");
  if (singular_) throw SingularError("LuFactorization::solve: matrix is singular");
  std::vector<Complex> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  for (std::size_t ii = n_; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n_; ++j) x[ii] -= lu_(ii, j) * x[j];
    x[ii] /= lu_(ii, ii);
  }
  return x;
}

CMatrix inverse(const CMatrix& a) {
  LuFactorization lu(a);
  const std::size_t n = a.rows();
  CMatrix r(n, n);
  std::vector<Complex> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), Complex{});
    e[j] = 1.0;
    const auto col = lu.solve(e);
    for (std::size_t i = 0; i < n; ++i) r(i, j) = col[i];
  }
  return r;
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix m) : matrix_(std::move(m)) {
  if (!matrix_.is_square() || matrix_.rows() == 0) throw DimError("DensityMatrix: expected a non-empty square matrix");
  if (!is_hermitian(matrix_, kTol.hermiticity)) throw StateError("DensityMatrix: not Hermitian");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kTol.trace) {
    throw StateError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
  }
  const auto eig = herm_eig(matrix_);
  if (eig.values.front() < kTol.min_eigenvalue) {
    throw StateError("DensityMatrix: negative eigenvalue " + std::to_string(eig.values.front()));
  }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double nrm = 0.0;
  for (const auto& z : psi) nrm += std::norm(z);
  if (nrm == 0.0) throw StateError("DensityMatrix::pure: zero vector");
  const std::size_t n = psi.size();
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = psi[i] * std::conj(psi[j]) / nrm;
  return from_numerical(m);
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  return DensityMatrix(CMatrix::diagonal(probs));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  return DensityMatrix(CMatrix::identity(d) * Complex{1.0 / static_cast<double>(d), 0.0});
}

DensityMatrix DensityMatrix::from_numerical(const CMatrix& m) {
  CMatrix h = hermitian_part(m);
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw StateError("DensityMatrix::from_numerical: non-positive trace");
  h *= Complex{1.0 / tr, 0.0};
  return DensityMatrix(std::move(h));
}

CMatrix partial_trace_env(const CMatrix& rho, std::size_t d_S, std::size_t d_E) {
  if (rho.rows() != d_S * d_E || rho.cols() != d_S * d_E) {
    throw DimError("partial_trace_env: matrix is " + std::to_string(rho.rows()) + "x" +
                   std::to_string(rho.cols()) + ", expected d_S*d_E = " + std::to_string(d_S * d_E));
  }
  CMatrix r(d_S, d_S);
  for (std::size_t i = 0; i < d_S; ++i)
    for (std::size_t j = 0; j < d_S; ++j) {
      Complex s{};
      for (std::size_t mu = 0; mu < d_E; ++mu) s += rho(i * d_E + mu, j * d_E + mu);
      r(i, j) = s;
    }
  return r;
}

DensityMatrix partial_trace_env(const DensityMatrix& rho, std::size_t d_S, std::size_t d_E) {
  return DensityMatrix::from_numerical(partial_trace_env(rho.matrix(), d_S, d_E));
}

DensityMatrix gibbs_state(const CMatrix& h, double beta) {
  if (beta < 0.0) throw DomainError("gibbs_state: beta must be nonnegative");
  const auto eig = herm_eig(h);
  const double e0 = eig.values.front();
  // Shift by the ground energy so the largest weight is exactly 1.
  return DensityMatrix::from_numerical(
      hermitian_function(h, [&](double e) { return std::exp(-beta * (e - e0)); }));
}

double vn_entropy(const DensityMatrix& rho) {
  const auto eig = herm_eig(rho.matrix());
  double s = 0.0;
  for (double l : eig.values)
    if (l > kTol.log_floor) s -= l * std::log(l);
  return std::max(0.0, s);
}

RelativeEntropy quantum_rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimError("quantum_rel_entropy: dimension mismatch");
  const auto er = herm_eig(rho.matrix());
  double value = 0.0;
  for (double l : er.values)
    if (l > kTol.log_floor) value += l * std::log(l);

  const auto es = herm_eig(sigma.matrix());
  const std::size_t n = rho.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const auto vk = es.vectors.column(k);
    const double weight = inner(vk, rho.matrix() * std::span<const Complex>(vk)).real();
    if (es.values[k] <= kTol.log_floor) {
      if (weight > 1e-12) return RelativeEntropy{std::numeric_limits<double>::infinity(), true};
      continue;
    }
    value -= weight * std::log(es.values[k]);
  }
  return RelativeEntropy{value, false};
}

RelativeEntropy kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimError("kl_divergence: length mismatch");
  double value = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return RelativeEntropy{std::numeric_limits<double>::infinity(), true};
    value += p[i] * std::log(p[i] / q[i]);
  }
  return RelativeEntropy{value, false};
}

FixedPoint trace_one_kernel(const CMatrix& generator, std::size_t d) {
  const std::size_t n = d * d;
  if (generator.rows() != n || generator.cols() != n) {
    throw DimError("trace_one_kernel: generator must be d^2 x d^2");
  }
  // Border the generator with the trace functional: B = G + |u><u|/d where
  // u = vec(1). For trace-annihilating G the solution of B x = u/d is the
  // trace-one kernel vector, and B is invertible iff the kernel is simple.
  CMatrix bordered = generator;
  const double inv_d = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) bordered(i * d + i, j * d + j) += inv_d;
  std::vector<Complex> rhs(n);
  for (std::size_t i = 0; i < d; ++i) rhs[i * d + i] = inv_d;

  FixedPoint out;
  LuFactorization lu(bordered);
  LuFactorization lu_adj(bordered.adjoint());
  if (lu.singular() || lu_adj.singular()) {
    out.gap = 0.0;
    return out;
  }

  // Smallest singular value of B by inverse iteration on (B^dagger B)^{-1}.
  std::vector<Complex> x(n, Complex{1.0, 0.0});
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    double nrm = 0.0;
    for (const auto& z : x) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    for (auto& z : x) z /= nrm;
    auto y = lu.solve(lu_adj.solve(x));
    double next = 0.0;
    for (const auto& z : y) next += std::norm(z);
    next = std::sqrt(next);
    x = std::move(y);
    if (!std::isfinite(next)) {
      lambda = std::numeric_limits<double>::infinity();
      break;
    }
    if (it > 5 && std::abs(next - lambda) <= 1e-12 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  out.gap = std::isfinite(lambda) && lambda > 0.0 ? 1.0 / std::sqrt(lambda) : 0.0;

  const auto sol = lu.solve(rhs);
  out.state = CMatrix(d, d, sol);
  return out;
}

}  // namespace qprecision
