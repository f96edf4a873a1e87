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

#include "../oracles.hpp"
#include "qprecision/errors.hpp"
#include "qprecision/experiments.hpp"
#include "qprecision/model.hpp"
#include "qprecision/model_io.hpp"

namespace qprecision {
namespace {

CMatrix swap_unitary(std::size_t d) {
  CMatrix u(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t mu = 0; mu < d; ++mu) u(mu * d + i, i * d + mu) = 1.0;
  return u;
}

ModelSpec random_model(std::uint64_t id) {
  RngStream rng(kDefaultSeed, rng_tag::kModel, id);
  return sample_model(rng, RandomModelParams{});
}

TEST(TotalUnitary, DecoupledIsProduct) {
  ModelSpec s = random_model(1);
  s.lambda = 0.0;
  const CMatrix ref = oracle::kron(oracle::taylor_expm(s.H_S * Complex(0, -s.tau)),
                                   oracle::taylor_expm(s.H_E * Complex(0, -s.tau)));
  EXPECT_LE(max_abs_diff(total_unitary(s), ref), 1e-12);
}

TEST(TotalUnitary, ShortTimeIsIdentity) {
  ModelSpec s = random_model(2);
  s.tau = 1e-14;
  EXPECT_LE(max_abs_diff(total_unitary(s), CMatrix::identity(s.d_S * s.d_E)), 1e-12);
  s.tau = 0.0;
  EXPECT_THROW(s.validate(), SpecError);
}

TEST(TotalUnitary, RandomModelIsUnitary) {
  for (std::uint64_t id = 0; id < 10; ++id) {
    const ModelSpec s = random_model(id);
    const CMatrix u = total_unitary(s);
    EXPECT_LE(unitarity_error(u), 1e-10);
    EXPECT_LE(max_abs_diff(u, oracle::taylor_expm(s.total_hamiltonian() * Complex(0, -s.tau))), 1e-9);
  }
}

TEST(ForwardKraus, SwapExchangesSubsystems) {
  const std::vector<double> p{0.7, 0.3};
  const KrausSet k = kraus_from_unitary(swap_unitary(2), 2, 2, p);
  for (std::size_t mu = 0; mu < 2; ++mu)
    for (std::size_t nu = 0; nu < 2; ++nu)
      EXPECT_LE(max_abs_diff(k.op(mu, nu), CMatrix::unit(2, nu, mu) * Complex(std::sqrt(p[nu]))), 1e-15);
}

TEST(ForwardKraus, IdentityUnitary) {
  const std::vector<double> p{0.6, 0.4};
  const KrausSet k = kraus_from_unitary(CMatrix::identity(4), 2, 2, p);
  for (std::size_t mu = 0; mu < 2; ++mu)
    for (std::size_t nu = 0; nu < 2; ++nu) {
      const CMatrix expect = mu == nu ? CMatrix::identity(2) * Complex(std::sqrt(p[nu])) : CMatrix(2, 2);
      EXPECT_LE(max_abs_diff(k.op(mu, nu), expect), 1e-15);
    }
}

TEST(ForwardKraus, CompletenessAndEntries) {
  for (std::uint64_t id = 0; id < 20; ++id) {
    const ModelSpec s = random_model(id);
    const KrausSet k = forward_kraus(s);
    CMatrix sum(2, 2);
    for (const auto& m : k.ops()) sum += m.adjoint() * m;
    EXPECT_LE(max_abs_diff(sum, CMatrix::identity(2)), 1e-10);
    // M_{mu nu} = sqrt(p_nu) <mu|U|nu>.
    const CMatrix u = total_unitary(s);
    const auto p = s.environment_probabilities();
    for (std::size_t mu = 0; mu < s.d_E; ++mu)
      for (std::size_t nu = 0; nu < s.d_E; ++nu)
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j)
            EXPECT_LE(std::abs(k.op(mu, nu)(i, j) - std::sqrt(p[nu]) * u(i * s.d_E + mu, j * s.d_E + nu)), 1e-15);
  }
}

TEST(ForwardKraus, RejectsBrokenUnitary) {
  EXPECT_THROW(kraus_from_unitary(CMatrix::identity(4) * Complex(1.01), 2, 2, {0.5, 0.5}), KrausError);
}

TEST(EnvironmentProbabilities, GibbsWeights) {
  const ModelSpec s = random_model(3);
  const auto eps = s.env_energies();
  const auto p = s.environment_probabilities();
  double z = 0;
  for (double e : eps) z += std::exp(-s.beta * e);
  for (std::size_t i = 0; i < eps.size(); ++i) EXPECT_NEAR(p[i], std::exp(-s.beta * eps[i]) / z, 1e-15);
}

TEST(BackwardKraus, IdentityIsSelfDual) {
  const std::vector<double> p{0.6, 0.4};
  const KrausSet k = kraus_from_unitary(CMatrix::identity(4), 2, 2, p);
  const KrausSet b = backward_kraus(k);
  for (std::size_t i = 0; i < k.ops().size(); ++i) EXPECT_LE(max_abs_diff(b.ops()[i], k.ops()[i]), 1e-15);
}

TEST(BackwardKraus, SwapByHand) {
  // sqrt(p_nu / p_mu) M_{nu mu}^dagger with M_{nu mu} = sqrt(p_mu) |mu><nu|.
  const std::vector<double> p{0.7, 0.3};
  const KrausSet b = backward_kraus(kraus_from_unitary(swap_unitary(2), 2, 2, p));
  for (std::size_t mu = 0; mu < 2; ++mu)
    for (std::size_t nu = 0; nu < 2; ++nu)
      EXPECT_LE(max_abs_diff(b.op(mu, nu), CMatrix::unit(2, nu, mu) * Complex(std::sqrt(p[nu]))), 1e-15);
}

TEST(BackwardKraus, InvolutionAndCompleteness) {
  for (std::uint64_t id = 0; id < 20; ++id) {
    const KrausSet k = forward_kraus(random_model(id));
    const KrausSet b = backward_kraus(k);
    EXPECT_LE(b.completeness_error(), 1e-10);
    const KrausSet bb = backward_kraus(b);
    for (std::size_t i = 0; i < k.ops().size(); ++i) EXPECT_LE(max_abs_diff(bb.ops()[i], k.ops()[i]), 1e-10);
  }
}

TEST(BackwardKraus, ZeroProbabilityIsSupportError) {
  const KrausSet k = kraus_from_unitary(swap_unitary(2), 2, 2, {1.0, 0.0});
  EXPECT_THROW(backward_kraus(k), SupportError);
}

TEST(Channel, SwapPreparesEnvironmentState) {
  const std::vector<double> p{0.7, 0.3};
  const KrausSet k = kraus_from_unitary(swap_unitary(2), 2, 2, p);
  RngStream rng(31, 1, 0);
  const DensityMatrix out = channel_apply(k, DensityMatrix(oracle::random_density(rng, 2)));
  EXPECT_LE(max_abs_diff(out.matrix(), CMatrix::diagonal(std::span<const double>(p))), 1e-15);
  EXPECT_LE(max_abs_diff(stationary_state(k).matrix(), CMatrix::diagonal(std::span<const double>(p))), 1e-12);
}

TEST(Channel, IdentityUnitaryLeavesStateAlone) {
  const KrausSet k = kraus_from_unitary(CMatrix::identity(4), 2, 2, {0.6, 0.4});
  RngStream rng(32, 1, 0);
  const CMatrix rho = oracle::random_density(rng, 2);
  EXPECT_LE(max_abs_diff(channel_apply(k, rho), rho), 1e-15);
}

TEST(Channel, RandomIsTracePreservingAndPositive) {
  RngStream rng(33, 1, 0);
  for (std::uint64_t id = 0; id < 10; ++id) {
    const KrausSet k = forward_kraus(random_model(id));
    const DensityMatrix out = channel_apply(k, DensityMatrix(oracle::random_density(rng, 2)));
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(herm_eig(out.matrix()).values.front(), -1e-12);
  }
  const KrausSet k = forward_kraus(random_model(0));
  EXPECT_THROW(channel_apply(k, CMatrix::identity(3)), DimError);
}

TEST(Stationary, UnitalChannelGivesMaximallyMixed) {
  // Environment-controlled system unitaries: sum M M^dagger = 1.
  RngStream rng(34, 1, 0);
  const std::size_t dS = 3, dE = 2;
  CMatrix u(dS * dE, dS * dE);
  for (std::size_t mu = 0; mu < dE; ++mu) {
    const CMatrix v = expm_i_hermitian(oracle::random_hermitian(rng, dS), 1.0);
    for (std::size_t i = 0; i < dS; ++i)
      for (std::size_t j = 0; j < dS; ++j) u(i * dE + mu, j * dE + mu) = v(i, j);
  }
  const KrausSet k = kraus_from_unitary(u, dS, dE, {0.5, 0.5});
  CMatrix unital(dS, dS);
  for (const auto& m : k.ops()) unital += m * m.adjoint();
  ASSERT_LE(max_abs_diff(unital, CMatrix::identity(dS)), 1e-12);
  EXPECT_LE(max_abs_diff(stationary_state(k).matrix(), CMatrix::identity(dS) * Complex(1.0 / 3.0)), 1e-10);
}

TEST(Stationary, RandomModelResidualAndNonUniqueness) {
  for (std::uint64_t id = 0; id < 20; ++id) {
    const KrausSet k = forward_kraus(random_model(id));
    const DensityMatrix rho = stationary_state(k);
    EXPECT_LE(max_abs_diff(channel_apply(k, rho.matrix()), rho.matrix()), 1e-10);
  }
  const KrausSet id = kraus_from_unitary(CMatrix::identity(4), 2, 2, {0.5, 0.5});
  try {
    stationary_state(id);
    FAIL() << "expected NonUniqueStationaryError";
  } catch (const NonUniqueStationaryError& e) {
    EXPECT_LT(e.gap(), 1e-8);
  }
}

TEST(ThermalOperation, ExchangeConservesEnergy) {
  const ModelSpec s = thermal_operation_model({0.0, 1.0}, {0.0, 1.0}, {{0, 1, 1, 0, 0.8}}, 2.0, 1.0);
  const CMatrix h0 = kron(s.H_S, CMatrix::identity(2)) + kron(CMatrix::identity(2), s.H_E);
  EXPECT_LE(max_abs(commutator(s.total_hamiltonian(), h0)), 1e-12);
  EXPECT_LE(max_abs(commutator(total_unitary(s), h0)), 1e-10);
}

TEST(ThermalOperation, EmptyCouplingIsProduct) {
  const ModelSpec s = thermal_operation_model({0.0, 1.0}, {0.0, 0.5, 1.2}, {}, 2.0, 1.0);
  EXPECT_EQ(max_abs(s.H_I), 0.0);
  EXPECT_LE(max_abs_diff(total_unitary(s), oracle::kron(expm_i_hermitian(s.H_S, 2.0), expm_i_hermitian(s.H_E, 2.0))),
            1e-12);
}

TEST(ThermalOperation, Errors) {
  EXPECT_THROW(thermal_operation_model({0.0, 1.0}, {0.0, 0.5}, {{0, 1, 1, 0, 0.3}}, 1.0, 1.0), ResonanceError);
  EXPECT_THROW(thermal_operation_model({0.0, 0.0}, {0.0, 1.0}, {}, 1.0, 1.0), DegeneracyError);
  EXPECT_THROW(
      thermal_operation_model({0.0, 1.0, 2.0}, {0.0, 1.0}, {{0, 1, 1, 0, 0.3}, {1, 0, 0, 1, 0.3}}, 1.0, 1.0),
      SpecError);
}

TEST(ModelSpecTest, Validation) {
  ModelSpec s = random_model(0);
  EXPECT_NO_THROW(s.validate());
  ModelSpec bad = s;
  bad.N = 0;
  EXPECT_THROW(bad.validate(), SpecError);
  bad = s;
  bad.H_E(0, 1) = 0.3;
  bad.H_E(1, 0) = 0.3;
  EXPECT_THROW(bad.validate(), SpecError);
  bad = s;
  bad.H_S(0, 1) = Complex(0.1, 0.2);
  EXPECT_THROW(bad.validate(), HermiticityError);
  bad = s;
  bad.env_probs = std::vector<double>(s.d_E, 0.9);
  EXPECT_THROW(bad.validate(), Error);
}

TEST(ModelIo, RoundTrip) {
  const ModelSpec s = random_model(4);
  const LoadedModel back = parse_model_json(model_to_json(s));
  EXPECT_EQ(back.spec.d_E, s.d_E);
  EXPECT_EQ(back.spec.H_I, s.H_I);
  EXPECT_EQ(back.spec.H_E, s.H_E);
  EXPECT_EQ(back.spec.lambda, s.lambda);
  EXPECT_TRUE(back.warnings.empty());
}

TEST(ModelIo, FactoredFormAndObservable) {
  const std::string text = R"({"schema":"qprecision-model/1","dims":{"d_S":2,"d_E":2},
    "H_S":[[0.5,0],[0,-0.5]],"H_E":[[0,0],[0,0.1]],"V_S":[[0,1],[1,0]],"V_E":[[0,[0,-1]],[[0,1],0]],
    "lambda":0.5,"beta":1,"tau":2,"N":1,"observable":{"kind":"current","c":[[0,1],[-1,0]]}})";
  const LoadedModel m = parse_model_json(text);
  const CMatrix sy{{0, Complex(0, -1)}, {Complex(0, 1), 0}};
  EXPECT_EQ(m.spec.H_I, kron(CMatrix{{0, 1}, {1, 0}}, sy));
  ASSERT_TRUE(m.observable.has_value());
  EXPECT_EQ((*m.observable)[1][0], -1.0);
}

TEST(ModelIo, RotatesNonDiagonalEnvironment) {
  const std::string text = R"({"schema":"qprecision-model/1","dims":{"d_S":2,"d_E":2},
    "H_S":[[0.5,0],[0,-0.5]],"H_E":[[0,0.2],[0.2,0]],"V_S":[[0,1],[1,0]],"V_E":[[1,0],[0,-1]],
    "lambda":0.5,"beta":1,"tau":2,"N":1})";
  const LoadedModel m = parse_model_json(text);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NEAR(m.spec.H_E(0, 0).real(), -0.2, 1e-14);
  EXPECT_NEAR(m.spec.H_E(1, 1).real(), 0.2, 1e-14);
  // Spectrum of the total Hamiltonian is basis independent.
  const CMatrix orig = kron(CMatrix{{0.5, 0}, {0, -0.5}}, CMatrix::identity(2)) +
                       kron(CMatrix::identity(2), CMatrix{{0, 0.2}, {0.2, 0}}) +
                       kron(CMatrix{{0, 1}, {1, 0}}, CMatrix{{1, 0}, {0, -1}}) * Complex(0.5);
  const auto a = herm_eig(orig).values;
  const auto b = herm_eig(m.spec.total_hamiltonian()).values;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(ModelIo, SchemaErrors) {
  EXPECT_THROW(parse_model_json("{"), SchemaError);
  EXPECT_THROW(parse_model_json(R"({"schema":"other/1"})"), SchemaError);
  EXPECT_THROW(parse_model_json(R"({"schema":"qprecision-model/1","dims":{"d_S":2,"d_E":2}})"), SchemaError);
}

}  // namespace
}  // namespace qprecision
