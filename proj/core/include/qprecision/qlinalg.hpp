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

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "qprecision/errors.hpp"
#include "qprecision/tolerances.hpp"

namespace qprecision {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> diag);
  static CMatrix diagonal(std::span<const Complex> diag);
  /// |col><row| style basis element e_{row,col}.
  static CMatrix unit(std::size_t n, std::size_t row, std::size_t col);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  Complex trace() const;
  std::vector<Complex> column(std::size_t j) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

std::vector<Complex> operator*(const CMatrix& a, std::span<const Complex> v);

double max_abs(const CMatrix& a);
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double frobenius_norm(const CMatrix& a);
/// Largest singular value, via the spectrum of a^dagger a.
double spectral_norm(const CMatrix& a);
bool is_hermitian(const CMatrix& a, double tol = kTol.hermiticity);
/// max |a^dagger a - 1|.
double unitarity_error(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);
CMatrix commutator(const CMatrix& a, const CMatrix& b);
/// <u|v> with u conjugated.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);

// ---------------------------------------------------------------------------
// Spectral machinery
// ---------------------------------------------------------------------------

struct EigenSystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns are eigenvectors
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix. Eigenvalues are
/// returned ascending; each eigenvector is rotated so that its first
/// component with modulus above `phase_zero` is real and positive.
EigenSystem herm_eig(const CMatrix& a);

/// Applies a real function to the spectrum: V f(Lambda) V^dagger.
CMatrix hermitian_function(const CMatrix& a, const std::function<double(double)>& fn);

/// exp(-i h t) for Hermitian h.
CMatrix expm_i_hermitian(const CMatrix& h, double t);

/// General matrix exponential by scaling and squaring with a Taylor kernel.
CMatrix expm(const CMatrix& a);

/// Kronecker product; in the result the row index of `a` is the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// LU factorisation with partial pivoting.
class LuFactorization {
 public:
  explicit LuFactorization(const CMatrix& a);
  bool singular() const noexcept { return singular_; }
  std::vector<Complex> solve(std::span<const Complex> rhs) const;

 private:
  std::size_t n_ = 0;
  CMatrix lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
};

CMatrix inverse(const CMatrix& a);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all to `Tolerances`).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m);

  static DensityMatrix pure(std::span<const Complex> psi);
  static DensityMatrix diagonal(std::span<const double> probs);
  static DensityMatrix maximally_mixed(std::size_t d);
  /// Hermitises and renormalises a numerically produced matrix before validating.
  static DensityMatrix from_numerical(const CMatrix& m);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  CMatrix matrix_;
};

CMatrix partial_trace_env(const CMatrix& rho, std::size_t d_S, std::size_t d_E);
DensityMatrix partial_trace_env(const DensityMatrix& rho, std::size_t d_S, std::size_t d_E);
DensityMatrix gibbs_state(const CMatrix& h, double beta);

double vn_entropy(const DensityMatrix& rho);

struct RelativeEntropy {
  double value = 0.0;
  bool infinite = false;  // support(rho) not contained in support(sigma)
};

RelativeEntropy quantum_rel_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Classical Kullback-Leibler divergence with 0 ln 0 = 0.
RelativeEntropy kl_divergence(std::span<const double> p, std::span<const double> q);

/// Unique trace-one fixed point of a d^2 x d^2 superoperator `generator`
/// acting on row-major vectorised matrices, i.e. the normalised kernel of
/// `generator`. `gap` is the smallest singular value of the bordered system
/// used to pin the trace; it vanishes when the kernel is degenerate.
struct FixedPoint {
  CMatrix state;
  double gap = 0.0;
};
FixedPoint trace_one_kernel(const CMatrix& generator, std::size_t d);

}  // namespace qprecision
