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

#include "qprecision/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qprecision {

double phi_inverse(double y) {
  if (!(y >= 0.0)) throw DomainError("phi_inverse: argument must be nonnegative");
  if (y == 0.0) return 0.0;
  if (!std::isfinite(y)) return y;
  // x^2 >= x tanh x >= x - 1 brackets the root.
  double lo = std::sqrt(y);
  double hi = std::max(std::sqrt(y), y) + 1.0;
  const auto g = [y](double x) { return x * std::tanh(x) - y; };
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (gx > 0.0) hi = x; else lo = x;
    const double t = std::tanh(x);
    const double dg = t + x * (1.0 - t * t);
    double next = x - gx / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * next) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double f_bound(double x) {
  if (!(x > 0.0)) throw DomainError("f_bound: argument must be positive");
  if (x < kTol.f_small_x) return 2.0 / x - 2.0 / 3.0 + 2.0 * x / 45.0;
  const double s = std::sinh(phi_inverse(0.5 * x));
  return 1.0 / (s * s);
}

bool mean_vanishes(double mean, double second_moment) {
  return std::abs(mean) <= 1e-13 * std::max(1.0, std::sqrt(std::max(0.0, second_moment)));
}

namespace {

std::string describe(const BoundEntry& e) {
  std::ostringstream os;
  os.precision(17);
  os << e.name << ": value " << e.value << " < bound " << e.bound << " (margin " << e.margin << ")";
  return os.str();
}

BoundEntry relative_fluctuation_entry(const char* name, const TrajectoryStats& s) {
  BoundEntry e;
  e.name = name;
  if (mean_vanishes(s.mean_phi, s.second_moment)) {
    e.vacuous = true;
    return e;
  }
  e.value = s.var_phi / (s.mean_phi * s.mean_phi);
  return e;
}

}  // namespace

BoundEntry check_tur(const TrajectoryStats& s) {
  BoundEntry e = relative_fluctuation_entry("tur", s);
  if (e.vacuous) return e;
  const double x = s.sigma + s.sigma_star + s.boundary_b;
  if (!s.backward_available || !std::isfinite(x) || !(x > 0.0)) {
    e.vacuous = true;
    return e;
  }
  e.bound = f_bound(x);
  e.margin = e.value - e.bound;
  if (e.margin < -kTol.bound_margin) throw BoundViolationError(describe(e));
  return e;
}

BoundEntry compare_tur_sigma_only(const TrajectoryStats& s) {
  BoundEntry e = relative_fluctuation_entry("tur_sigma_only", s);
  if (e.vacuous) return e;
  if (!s.backward_available || !std::isfinite(s.sigma) || !(s.sigma > 0.0)) {
    e.vacuous = true;
    return e;
  }
  e.bound = f_bound(s.sigma);
  e.margin = e.value - e.bound;
  return e;
}

BoundEntry check_kur(const TrajectoryStats& s) {
  BoundEntry e = relative_fluctuation_entry("kur", s);
  if (e.vacuous) return e;
  const double P = s.inactivity;
  if (!(P > 0.0) || P >= 1.0 - 1e-15) {
    e.vacuous = true;
    return e;
  }
  e.bound = P / (1.0 - P);
  e.margin = e.value - e.bound;
  if (e.margin < -kTol.bound_margin) throw BoundViolationError(describe(e));
  return e;
}

std::optional<double> quality_factor(const TrajectoryStats& s) {
  const BoundEntry e = compare_tur_sigma_only(s);
  if (e.vacuous) return std::nullopt;
  return e.value / e.bound;
}

namespace {

CMatrix no_change_product(const KrausSet& fwd, int N) {
  const auto& p = fwd.env_probs();
  if (std::abs(p[0] - 1.0) > kTol.env_probability_sum) {
    throw ModeError("survival activity needs the environment prepared in the pure state |0>");
  }
  if (N < 1) throw DomainError("survival activity: N must be positive");
  CMatrix v = CMatrix::identity(fwd.d_S());
  for (int i = 0; i < N; ++i) v = fwd.op(0, 0) * v;
  return v;
}

}  // namespace

double survival_activity(const KrausSet& fwd, const DensityMatrix& rho_S, int N) {
  const CMatrix v = no_change_product(fwd, N);
  const CMatrix g = hermitian_part(v.adjoint() * v);
  const auto eig = herm_eig(g);
  if (eig.values.front() <= kTol.singular_eigenvalue) {
    throw SingularError("V0^dagger V0 is singular (smallest eigenvalue " + std::to_string(eig.values.front()) + ")");
  }
  const CMatrix inv = hermitian_function(g, [](double x) { return 1.0 / x; });
  return (inv * rho_S.matrix()).trace().real();
}

double survival_inactivity(const KrausSet& fwd, const DensityMatrix& rho_S, int N) {
  const CMatrix v = no_change_product(fwd, N);
  return (v.adjoint() * v * rho_S.matrix()).trace().real();
}

double short_time_sigma_star_lb(const CMatrix& H, const std::vector<CMatrix>& jumps, const DensityMatrix& rho_S,
                                double T) {
  if (!(T > 0.0)) throw DomainError("short_time_sigma_star_lb: T must be positive");
  const std::size_t d = H.rows();
  CMatrix lsum(d, d);
  for (const auto& l : jumps) lsum += l.adjoint() * l;
  const Complex c = (commutator(H, lsum) * rho_S.matrix()).trace();
  const CMatrix denom_op = H * H * Complex{2.0, 0.0} + lsum * lsum * Complex{0.5, 0.0};
  const double denom = (denom_op * rho_S.matrix()).trace().real();
  const double num = std::norm(c);
  if (num == 0.0) return 0.0;
  return 8.0 / 9.0 * num / denom * T * T;
}

}  // namespace qprecision
