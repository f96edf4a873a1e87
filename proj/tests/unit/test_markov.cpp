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
#include <filesystem>

#include "../oracles.hpp"
#include "qprecision/bounds.hpp"
#include "qprecision/errors.hpp"
#include "qprecision/experiments.hpp"
#include "qprecision/markov.hpp"
#include "qprecision/markov_io.hpp"

namespace qprecision {
namespace {

constexpr Complex kI{0.0, 1.0};

LindbladSpec decay_model(double gamma) {
  LindbladSpec s;
  s.d_S = 2;
  s.H = CMatrix(2, 2);
  s.jumps = {JumpOperator{CMatrix::unit(2, 0, 1) * Complex(std::sqrt(gamma)), 0.0, std::nullopt}};
  s.validate();
  return s;
}

LindbladSpec random_spec(std::uint64_t i) {
  RngStream rng(kDefaultSeed, rng_tag::kLindblad, i);
  const std::size_t d = rng.integer(2, 4);
  const std::size_t pairs = rng.integer(1, 2);
  return random_lindblad_spec(rng, d, pairs);
}

constexpr std::uint64_t kTestTag = 0x746d6bULL;

CMatrix test_hermitian(std::size_t d, std::uint64_t i) {
  RngStream rng(kDefaultSeed, kTestTag, i);
  return oracle::random_hermitian(rng, d);
}

DensityMatrix test_density(std::size_t d, std::uint64_t i) {
  RngStream rng(kDefaultSeed, kTestTag, 1000 + i);
  return DensityMatrix(oracle::random_density(rng, d));
}

DensityMatrix excited() {
  const std::vector<Complex> psi{0.0, 1.0};
  return DensityMatrix::pure(psi);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

TEST(EffectiveHamiltonian, Examples) {
  const double g = 0.8;
  EXPECT_LE(max_abs_diff(effective_hamiltonian(decay_model(g)), CMatrix::unit(2, 1, 1) * (-0.5 * g * kI)), 1e-15);
  LindbladSpec closed;
  closed.d_S = 2;
  closed.H = CMatrix{{0.3, 0.1}, {0.1, -0.2}};
  EXPECT_EQ(effective_hamiltonian(closed), closed.H);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const LindbladSpec s = random_spec(i);
    const CMatrix h = effective_hamiltonian(s);
    EXPECT_LE(max_abs_diff(hermitian_part(h), s.H), 1e-13);
    const CMatrix anti = (h - h.adjoint()) * Complex(0.0, 0.5);  // = (1/2) sum L^dagger L
    EXPECT_GE(herm_eig(anti).values.front(), -1e-13);
  }
}

TEST(NoJump, DecayModel) {
  const double g = 0.7;
  const LindbladSpec s = decay_model(g);
  for (double T : {0.01, 0.5, 2.0}) {
    EXPECT_NEAR(no_jump_probability(s, excited(), T), std::exp(-g * T), 1e-12);
    EXPECT_NEAR(loschmidt_echo(s, excited(), T), std::exp(-g * T), 1e-12);
    EXPECT_NEAR(dynamical_activity(s, excited(), T), g * T, 1e-14);
    const DensityMatrix r = lindblad_evolve(s, excited(), T, 0, false);
    EXPECT_NEAR(r.matrix()(1, 1).real(), std::exp(-g * T), 1e-9);
  }
}

TEST(NoJump, ClosedSystemIsUnitary) {
  LindbladSpec s;
  s.d_S = 3;
  s.H = test_hermitian(3, 11);
  const CMatrix u = no_jump_propagator(s, 1.7, recommended_no_jump_steps(s, 1.7));
  EXPECT_LE(unitarity_error(u), 1e-12);
  EXPECT_LE(max_abs_diff(u, expm_i_hermitian(s.H, 1.7)), 1e-12);
  EXPECT_NEAR(no_jump_probability(s, DensityMatrix::maximally_mixed(3), 1.7), 1.0, 1e-12);
  EXPECT_EQ(dynamical_activity(s, DensityMatrix::maximally_mixed(3), 1.7), 0.0);
  // Pure eigenstate of H: the echo is exactly one.
  const EigenSystem e = herm_eig(s.H);
  EXPECT_NEAR(loschmidt_echo(s, DensityMatrix::pure(e.vectors.column(0)), 1.7), 1.0, 1e-12);
}

TEST(NoJump, StepBudget) {
  const LindbladSpec s = decay_model(1.0);
  EXPECT_THROW(no_jump_propagator(s, 100.0, 1), AccuracyError);
  EXPECT_THROW(no_jump_propagator(s, 1.0, 0), DomainError);
}

TEST(NoJump, ContractionMonotonicityAndEcho) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    const LindbladSpec s = random_spec(i);
    const DensityMatrix rho = test_density(s.d_S, 100 + i);
    EXPECT_LE(spectral_norm(no_jump_propagator(s, 1.0, recommended_no_jump_steps(s, 1.0))), 1 + 1e-10);
    double prev = 1.0;
    for (double T : {0.0, 0.1, 0.3, 1.0, 3.0}) {
      const double P = no_jump_probability(s, rho, T);
      EXPECT_GT(P, 0.0);
      EXPECT_LE(P, prev + 1e-14);
      const double eta = loschmidt_echo(s, rho, T);
      EXPECT_GE(eta, 0.0);
      EXPECT_LE(eta, P + 1e-10);
      prev = P;
    }
  }
}

TEST(NoJump, InactivityDeficitMatchesActivityToSecondOrder) {
  const LindbladSpec s = bundled_coherent_qutrit();
  const DensityMatrix rho = lindblad_stationary_state(s);
  std::vector<double> Ts, gaps;
  for (int i = 0; i < 9; ++i) {
    const double T = 1e-4 * std::pow(100.0, i / 8.0);
    Ts.push_back(T);
    gaps.push_back(std::abs(1 / no_jump_probability(s, rho, T) - 1 - dynamical_activity(s, rho, T)));
  }
  const double k = slope(Ts, gaps);
  EXPECT_GE(k, 1.9);
  EXPECT_LE(k, 2.1);
}

TEST(Evolve, StationaryFixedAndTracePreserved) {
  for (const LindbladSpec& s : {driven_qubit(1, 1, 0.2), bundled_coherent_qutrit(), random_spec(3)}) {
    const DensityMatrix ss = lindblad_stationary_state(s);
    EXPECT_LE(max_abs_diff(lindblad_evolve(s, ss, 2.0, 0, false).matrix(), ss.matrix()), 1e-9);
    const DensityMatrix r = lindblad_evolve(s, test_density(s.d_S, 5), 1.0, 0, true);
    EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-9);
  }
}

TEST(Evolve, AgreesWithLiouvillianExponential) {
  const LindbladSpec s = random_spec(7);
  const DensityMatrix rho = test_density(s.d_S, 9);
  for (bool flip : {false, true}) {
    const CMatrix prop = expm(liouvillian(s, flip) * Complex(0.8));
    const std::vector<Complex> out = prop * rho.matrix().data();
    const DensityMatrix r = lindblad_evolve(s, rho, 0.8, 0, flip);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_LE(std::abs(r.matrix().data()[i] - out[i]), 1e-9);
  }
}

TEST(Evolve, SignflipIsNoOpWithoutHamiltonian) {
  const LindbladSpec s = decay_model(0.9);
  const DensityMatrix rho = test_density(2, 3);
  EXPECT_EQ(liouvillian(s, true), liouvillian(s, false));
  EXPECT_EQ(lindblad_evolve(s, rho, 1.0, 0, true).matrix(), lindblad_evolve(s, rho, 1.0, 0, false).matrix());
  const RelativeEntropy dp = sigma_star_dp_lower_bound(s, lindblad_stationary_state(s), 1.0);
  EXPECT_FALSE(dp.infinite);
  EXPECT_LE(dp.value, 1e-12);
}

TEST(Unraveling, ExactCompleteness) {
  const LindbladSpec s = driven_qubit(1.0, 1.0, 0.2);
  const UnraveledKraus u = unraveled_kraus_sets(s, 0.1, 8);
  EXPECT_NEAR(u.dt, 0.1 / 8, 1e-17);
  ASSERT_EQ(u.forward.size(), 3u);
  for (const auto* set : {&u.forward, &u.backward}) {
    CMatrix sum(2, 2);
    for (const CMatrix& J : *set) sum += J.adjoint() * J;
    EXPECT_LE(max_abs_diff(sum, CMatrix::identity(2)), 1e-13);
  }
  EXPECT_LE(u.forward_correction, 1e-3);
  EXPECT_GT(u.forward_correction, 0.0);
}

TEST(Unraveling, IncoherentSigmaStarVanishes) {
  const LindbladSpec s = bundled_incoherent_qutrit();
  const DensityMatrix ss = lindblad_stationary_state(s);
  for (std::size_t steps : {1, 4, 8}) {
    for (double T : {0.1, 1.0}) {
      // Four channels exceed the default exact limit; allowing every jump
      // count enumerates all paths anyway.
      PathOptions all;
      all.max_jumps = static_cast<int>(steps);
      const PathStats p = markov_sigma_star(s, ss, T, steps, all);
      EXPECT_LE(std::abs(p.sigma_star), 1e-10) << steps << " " << T;
      EXPECT_NEAR(p.forward_mass, 1.0, 1e-12);
      const PathStats t = markov_sigma_star(s, ss, T, steps);
      EXPECT_EQ(t.max_jumps, 2);
      EXPECT_LE(std::abs(t.sigma_star), 1e-10) << steps << " " << T;
    }
  }
  EXPECT_LE(sigma_star_dp_lower_bound(s, ss, 1.0).value, 1e-10);
}

TEST(Unraveling, ClosedSystemHasSinglePath) {
  LindbladSpec s;
  s.d_S = 2;
  s.H = CMatrix{{0.5, 0.2}, {0.2, -0.5}};
  const PathStats p = markov_sigma_star(s, DensityMatrix::maximally_mixed(2), 1.0, 4);
  EXPECT_NEAR(p.forward_mass, 1.0, 1e-12);
  EXPECT_LE(p.sigma_star, 1e-12);
}

TEST(Unraveling, ShortTimeAndDataProcessingBounds) {
  const LindbladSpec s = driven_qubit(1.0, 1.0, 0.2);
  const DensityMatrix ss = lindblad_stationary_state(s);
  const double T = 1e-2;
  const double lb = short_time_sigma_star_lb(s.H, s.jump_matrices(), ss, T);
  EXPECT_GT(lb, 0.0);
  EXPECT_GE(markov_sigma_star(s, ss, T, 8).sigma_star, 0.9 * lb);
  for (double t : {0.1, 0.5, 1.0}) {
    const RelativeEntropy dp = sigma_star_dp_lower_bound(s, ss, t);
    ASSERT_FALSE(dp.infinite);
    EXPECT_GE(dp.value, 0.0);
    EXPECT_GE(markov_sigma_star(s, ss, t, 8).sigma_star, dp.value - 1e-6) << t;
  }
}

TEST(Unraveling, CapExceeded) {
  const LindbladSpec s = driven_qubit(1.0, 1.0, 0.2);
  PathOptions o;
  o.max_jumps = 12;
  o.cap = 100;
  EXPECT_THROW(markov_sigma_star(s, lindblad_stationary_state(s), 1.0, 12, o), EnumerationCapError);
}

TEST(LindbladSpec, Validation) {
  LindbladSpec s = driven_qubit(1.0, 1.0, 0.2);
  s.jumps[0].ds += 0.1;
  EXPECT_THROW(s.validate(), SpecError);
  s = driven_qubit(1.0, 1.0, 0.2);
  s.jumps[0].partner = 0;
  EXPECT_THROW(s.validate(), SpecError);
  s = driven_qubit(1.0, 1.0, 0.2);
  s.jumps[1].partner = 7;
  EXPECT_THROW(s.validate(), SpecError);
  s = driven_qubit(1.0, 1.0, 0.2);
  s.H(0, 1) = Complex(0.5, 0.1);
  EXPECT_THROW(s.validate(), HermiticityError);
  s = driven_qubit(1.0, 1.0, 0.2);
  s.jumps[0].L = CMatrix(3, 3);
  EXPECT_THROW(s.validate(), DimError);
  EXPECT_THROW(driven_qubit(1.0, 0.0, 0.2), SpecError);
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_NO_THROW(random_spec(i).validate());
}

TEST(MarkovIo, RoundTripAndBundledFiles) {
  const LindbladSpec s = bundled_coherent_qutrit();
  const LoadedLindblad back = parse_lindblad_json(lindblad_to_json(s, "cq"));
  EXPECT_EQ(back.name, "cq");
  EXPECT_EQ(back.spec.H, s.H);
  ASSERT_EQ(back.spec.jumps.size(), s.jumps.size());
  for (std::size_t k = 0; k < s.jumps.size(); ++k) {
    EXPECT_EQ(back.spec.jumps[k].L, s.jumps[k].L);
    EXPECT_EQ(back.spec.jumps[k].ds, s.jumps[k].ds);
    EXPECT_EQ(back.spec.jumps[k].partner, s.jumps[k].partner);
  }
  EXPECT_THROW(parse_lindblad_json("{\"schema\": \"other\"}"), Error);
  EXPECT_THROW(parse_lindblad_json("not json"), Error);

  const std::filesystem::path data = QPRECISION_DATA_DIR;
  const std::pair<const char*, LindbladSpec> files[] = {{"driven_qubit.json", driven_qubit(1, 1, 0.2)},
                                                       {"incoherent_qutrit.json", bundled_incoherent_qutrit()},
                                                       {"coherent_qutrit.json", bundled_coherent_qutrit()}};
  for (const auto& [name, spec] : files) {
    const LoadedLindblad f = load_lindblad_file(data / name);
    EXPECT_LE(max_abs_diff(f.spec.H, spec.H), 1e-15) << name;
    ASSERT_EQ(f.spec.jumps.size(), spec.jumps.size()) << name;
    for (std::size_t k = 0; k < spec.jumps.size(); ++k)
      EXPECT_LE(max_abs_diff(f.spec.jumps[k].L, spec.jumps[k].L), 1e-15) << name;
  }
}

}  // namespace
}  // namespace qprecision
