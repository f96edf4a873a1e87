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

#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "qprecision/errors.hpp"
#include "qprecision/qlinalg.hpp"

namespace qprecision {
namespace {

const CMatrix kSigmaX{{0, 1}, {1, 0}};
const CMatrix kSigmaZ{{1, 0}, {0, -1}};

TEST(HermEig, PauliSpectrum) {
  const auto e = herm_eig(kSigmaX);
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], -1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(HermEig, IdentityIsDeterministic) {
  const auto e = herm_eig(CMatrix::identity(3));
  for (double v : e.values) EXPECT_NEAR(v, 1.0, 1e-15);
  EXPECT_LE(max_abs_diff(e.vectors, CMatrix::identity(3)), 1e-15);
}

TEST(HermEig, RandomReconstruction) {
  RngStream rng(11, 1, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = oracle::random_hermitian(rng, 6);
    const auto e = herm_eig(a);
    const CMatrix lambda = CMatrix::diagonal(std::span<const double>(e.values));
    EXPECT_LE(max_abs_diff(a * e.vectors, e.vectors * lambda), 1e-10);
    EXPECT_LE(max_abs_diff(e.vectors.adjoint() * e.vectors, CMatrix::identity(6)), 1e-10);
    EXPECT_LE(max_abs_diff(e.vectors * lambda * e.vectors.adjoint(), a), 1e-10);
    for (std::size_t i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
    // Phase convention: first nonzero component real and positive.
    for (std::size_t k = 0; k < 6; ++k) {
      for (std::size_t i = 0; i < 6; ++i) {
        if (std::abs(e.vectors(i, k)) > 1e-12) {
          EXPECT_GT(e.vectors(i, k).real(), 0.0);
          EXPECT_NEAR(e.vectors(i, k).imag(), 0.0, 1e-12);
          break;
        }
      }
    }
  }
}

TEST(HermEig, RejectsNonHermitian) {
  EXPECT_THROW(herm_eig(CMatrix{{0, 1}, {0, 0}}), HermiticityError);
}

TEST(Expm, PauliZRotation) {
  const double theta = 0.37;
  const CMatrix u = expm_i_hermitian(kSigmaZ, theta);
  EXPECT_LE(std::abs(u(0, 0) - std::exp(Complex(0, -theta))), 1e-14);
  EXPECT_LE(std::abs(u(1, 1) - std::exp(Complex(0, theta))), 1e-14);
  EXPECT_LE(std::abs(u(0, 1)), 1e-15);
}

TEST(Expm, ZeroTimeIsIdentity) {
  RngStream rng(12, 1, 0);
  EXPECT_LE(max_abs_diff(expm_i_hermitian(oracle::random_hermitian(rng, 4), 0.0), CMatrix::identity(4)), 1e-15);
}

TEST(Expm, MatchesTaylorOracle) {
  RngStream rng(13, 1, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix h = oracle::random_hermitian(rng, 4);
    const CMatrix u = expm_i_hermitian(h, 0.7);
    EXPECT_LE(max_abs_diff(u, oracle::taylor_expm(h * Complex(0, -0.7))), 1e-9);
    EXPECT_LE(unitarity_error(u), 1e-10);
    EXPECT_LE(max_abs_diff(u * expm_i_hermitian(h, -0.7), CMatrix::identity(4)), 1e-10);
  }
}

TEST(Expm, GeneralMatrixMatchesOracle) {
  RngStream rng(14, 1, 0);
  CMatrix a(5, 5);
  for (auto& z : a.data()) z = Complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
  EXPECT_LE(max_abs_diff(expm(a), oracle::taylor_expm(a)) / max_abs(oracle::taylor_expm(a)), 1e-12);
}

TEST(Kron, Basics) {
  EXPECT_EQ(kron(CMatrix::identity(2), CMatrix::identity(2)), CMatrix::identity(4));
  const std::vector<double> d{1, 1, -1, -1};
  EXPECT_EQ(kron(kSigmaZ, CMatrix::identity(2)), CMatrix::diagonal(std::span<const double>(d)));
}

TEST(Kron, MatchesIndexFormula) {
  RngStream rng(15, 1, 0);
  CMatrix a(2, 2), b(3, 3);
  for (auto& z : a.data()) z = Complex(rng.uniform(), rng.uniform());
  for (auto& z : b.data()) z = Complex(rng.uniform(), rng.uniform());
  EXPECT_EQ(kron(a, b), oracle::kron(a, b));
}

TEST(PartialTrace, ProductState) {
  RngStream rng(16, 1, 0);
  const CMatrix rho = oracle::random_density(rng, 2);
  const CMatrix sigma = oracle::random_density(rng, 3);
  EXPECT_LE(max_abs_diff(partial_trace_env(kron(rho, sigma), 2, 3), rho), 1e-14);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> bell{s, 0, 0, s};
  const DensityMatrix r = partial_trace_env(DensityMatrix::pure(bell), 2, 2);
  EXPECT_LE(max_abs_diff(r.matrix(), CMatrix::identity(2) * Complex(0.5)), 1e-15);
}

TEST(PartialTrace, MatchesIndexSumAndIsLinear) {
  RngStream rng(17, 1, 0);
  std::vector<Complex> psi(6);
  double norm = 0;
  for (auto& z : psi) {
    z = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    norm += std::norm(z);
  }
  for (auto& z : psi) z /= std::sqrt(norm);
  const DensityMatrix rho = DensityMatrix::pure(psi);
  const CMatrix r = partial_trace_env(rho.matrix(), 3, 2);
  EXPECT_LE(max_abs_diff(r, oracle::partial_trace_env(rho.matrix(), 3, 2)), 1e-15);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);

  const CMatrix a = oracle::random_density(rng, 6);
  const CMatrix b = oracle::random_density(rng, 6);
  const CMatrix mix = a * Complex(0.3) + b * Complex(0.7);
  EXPECT_LE(max_abs_diff(partial_trace_env(mix, 2, 3),
                         partial_trace_env(a, 2, 3) * Complex(0.3) + partial_trace_env(b, 2, 3) * Complex(0.7)),
            1e-14);
}

TEST(PartialTrace, DimensionMismatch) {
  EXPECT_THROW(partial_trace_env(CMatrix::identity(5), 2, 3), DimError);
}

TEST(Gibbs, InfiniteTemperature) {
  RngStream rng(18, 1, 0);
  const DensityMatrix g = gibbs_state(oracle::random_hermitian(rng, 3), 0.0);
  EXPECT_LE(max_abs_diff(g.matrix(), CMatrix::identity(3) * Complex(1.0 / 3.0)), 1e-15);
}

TEST(Gibbs, TwoLevel) {
  const double eps = 0.8, beta = 1.3;
  const std::vector<double> d{0.0, eps};
  const DensityMatrix g = gibbs_state(CMatrix::diagonal(std::span<const double>(d)), beta);
  EXPECT_NEAR(g.matrix()(0, 0).real(), 1.0 / (1.0 + std::exp(-beta * eps)), 1e-15);
}

TEST(Gibbs, CommutesWithHamiltonian) {
  RngStream rng(19, 1, 0);
  const CMatrix h = oracle::random_hermitian(rng, 4);
  const DensityMatrix g = gibbs_state(h, 1.0);
  EXPECT_NEAR(g.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_LE(max_abs(commutator(h, g.matrix())), 1e-10);
  for (double v : herm_eig(g.matrix()).values) EXPECT_GT(v, 0.0);
  // Against the exponential series.
  CMatrix ref = oracle::taylor_expm(h * Complex(-1.0));
  ref *= Complex(1.0) / ref.trace();
  EXPECT_LE(max_abs_diff(g.matrix(), ref), 1e-12);
}

TEST(Entropy, VonNeumann) {
  const std::vector<Complex> up{1, 0};
  EXPECT_NEAR(vn_entropy(DensityMatrix::pure(up)), 0.0, 1e-15);
  EXPECT_NEAR(vn_entropy(DensityMatrix::maximally_mixed(2)), std::log(2.0), 1e-15);
  const std::vector<double> p{0.3, 0.7};
  EXPECT_NEAR(vn_entropy(DensityMatrix::diagonal(p)), -0.3 * std::log(0.3) - 0.7 * std::log(0.7), 1e-15);
}

TEST(Entropy, RelativeEntropyBasics) {
  RngStream rng(20, 1, 0);
  const DensityMatrix rho(oracle::random_density(rng, 3));
  EXPECT_NEAR(quantum_rel_entropy(rho, rho).value, 0.0, 1e-12);
  const std::vector<Complex> up{1, 0};
  const auto d = quantum_rel_entropy(DensityMatrix::pure(up), DensityMatrix::maximally_mixed(2));
  EXPECT_FALSE(d.infinite);
  EXPECT_NEAR(d.value, std::log(2.0), 1e-14);
  const std::vector<Complex> down{0, 1};
  EXPECT_TRUE(quantum_rel_entropy(DensityMatrix::maximally_mixed(2), DensityMatrix::pure(down)).infinite);
}

TEST(Entropy, CommutingPairMatchesClassicalKl) {
  RngStream rng(21, 1, 0);
  const CMatrix basis = herm_eig(oracle::random_hermitian(rng, 3)).vectors;
  std::vector<double> p(3), q(3);
  double sp = 0, sq = 0;
  for (int i = 0; i < 3; ++i) {
    sp += p[i] = rng.uniform(0.1, 1.0);
    sq += q[i] = rng.uniform(0.1, 1.0);
  }
  for (int i = 0; i < 3; ++i) {
    p[i] /= sp;
    q[i] /= sq;
  }
  const DensityMatrix rho(basis * CMatrix::diagonal(std::span<const double>(p)) * basis.adjoint());
  const DensityMatrix sigma(basis * CMatrix::diagonal(std::span<const double>(q)) * basis.adjoint());
  EXPECT_NEAR(quantum_rel_entropy(rho, sigma).value, oracle::kl(p, q), 1e-12);
  EXPECT_NEAR(kl_divergence(p, q).value, oracle::kl(p, q), 1e-15);
}

TEST(Entropy, KleinInequality) {
  RngStream rng(22, 1, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const DensityMatrix rho(oracle::random_density(rng, d));
    const DensityMatrix sigma(oracle::random_density(rng, d));
    const auto r = quantum_rel_entropy(rho, sigma);
    ASSERT_FALSE(r.infinite);
    EXPECT_GE(r.value, -1e-10);
  }
}

TEST(Lu, SolveAndInverse) {
  RngStream rng(23, 1, 0);
  CMatrix a(4, 4);
  for (auto& z : a.data()) z = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  EXPECT_LE(max_abs_diff(a * inverse(a), CMatrix::identity(4)), 1e-12);
  EXPECT_THROW(inverse(CMatrix(3, 3)), SingularError);
}

TEST(DensityMatrixTest, ValidatesInvariants) {
  EXPECT_THROW(DensityMatrix(CMatrix{{0.5, 0}, {0, 0.6}}), StateError);
  EXPECT_THROW(DensityMatrix(CMatrix{{1.2, 0}, {0, -0.2}}), StateError);
  EXPECT_NO_THROW(DensityMatrix(CMatrix{{0.5, 0.5}, {0.5, 0.5}}));
}

}  // namespace
}  // namespace qprecision
