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

#include "qprecision/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qprecision/markov_io.hpp"
#include "qprecision/parallel.hpp"

namespace qprecision {

namespace {

CMatrix random_hermitian(RngStream& rng, std::size_t d) {
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = rng.uniform(-1.0, 1.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const double re = rng.uniform(-1.0, 1.0);
      const double im = rng.uniform(-1.0, 1.0);
      m(i, j) = Complex{re, im};
      m(j, i) = Complex{re, -im};
    }
  }
  return m;
}

CMatrix random_complex(RngStream& rng, std::size_t d) {
  CMatrix m(d, d);
  for (auto& z : m.data()) {
    const double re = rng.uniform(-1.0, 1.0);
    z = Complex{re, rng.uniform(-1.0, 1.0)};
  }
  return m;
}

ObservableResult evaluate_observable(const Enumeration& e, const EnsembleStats& ens, const Observable& obs,
                                     bool check_tur_bound, bool check_kur_bound) {
  const ObservableMoments m = observable_moments(e, obs);
  TrajectoryStats t;
  t.mean_phi = m.mean;
  t.var_phi = m.variance;
  t.second_moment = m.second_moment;
  t.sigma = ens.sigma;
  t.sigma_star = ens.sigma_star;
  t.boundary_b = ens.boundary_b;
  t.inactivity = ens.inactivity;
  t.backward_available = ens.backward_available;
  ObservableResult r;
  r.name = obs.name;
  r.kind = obs.kind;
  r.mean = m.mean;
  r.variance = m.variance;
  r.tur_sigma_only = compare_tur_sigma_only(t);
  r.quality = quality_factor(t);
  if (check_tur_bound) r.tur = check_tur(t);
  if (check_kur_bound) r.kur = check_kur(t);
  if (!check_tur_bound) r.tur.vacuous = true;
  if (!check_kur_bound) r.kur.vacuous = true;
  r.tur.name = "tur";
  r.kur.name = "kur";
  return r;
}

}  // namespace

ModelSpec sample_model(RngStream& rng, const RandomModelParams& p) {
  if (p.d_E_min < 2 || p.d_E_max > 8 || p.d_E_min > p.d_E_max) {
    throw ConfigError("d_E range must lie within [2, 8]");
  }
  const std::size_t dE = static_cast<std::size_t>(rng.integer(p.d_E_min, p.d_E_max));
  std::vector<double> eps(dE);
  for (auto& e : eps) e = rng.uniform(0.0, p.eps_max);
  const CMatrix H_S{{0.5 * p.omega_z, 0.5 * p.omega_x}, {0.5 * p.omega_x, -0.5 * p.omega_z}};
  const CMatrix V_S = random_hermitian(rng, 2);
  const CMatrix V_E = random_hermitian(rng, dE);
  ModelSpec s = ModelSpec::factored(H_S, CMatrix::diagonal(std::span<const double>(eps)), V_S, V_E, p.lambda, p.beta,
                                    p.tau, p.N);
  s.validate();
  return s;
}

std::vector<std::vector<double>> sample_coefficients(RngStream& rng, std::size_t d_E, ObservableKind kind) {
  std::vector<std::vector<double>> c(d_E, std::vector<double>(d_E));
  for (auto& row : c)
    for (auto& x : row) x = rng.uniform(-1.0, 1.0);
  if (kind == ObservableKind::current) {
    for (std::size_t a = 0; a < d_E; ++a) {
      c[a][a] = 0.0;
      for (std::size_t b = a + 1; b < d_E; ++b) {
        const double v = 0.5 * (c[a][b] - c[b][a]);
        c[a][b] = v;
        c[b][a] = -v;
      }
    }
  } else {
    for (std::size_t a = 0; a < d_E; ++a) c[a][a] = 0.0;
  }
  return c;
}

Observable sample_observable(RngStream& rng, std::size_t d_E, ObservableKind kind) {
  return pair_observable(sample_coefficients(rng, d_E, kind), kind,
                         kind == ObservableKind::current ? "current" : "generic");
}

LindbladSpec random_lindblad_spec(RngStream& rng, std::size_t d, std::size_t pairs) {
  LindbladSpec s;
  s.d_S = d;
  s.H = random_hermitian(rng, d);
  for (std::size_t k = 0; k < pairs; ++k) {
    const CMatrix L = random_complex(rng, d) * Complex{0.5, 0.0};
    const double ds = rng.uniform(-2.0, 2.0);
    const std::size_t a = s.jumps.size();
    s.jumps.push_back({L, ds, a + 1});
    s.jumps.push_back({L.adjoint() * Complex{std::exp(-0.5 * ds), 0.0}, -ds, a});
  }
  s.validate();
  return s;
}

StationaryChoice model_stationary_state(const ModelSpec& spec, const KrausSet& k) {
  try {
    return {stationary_state(k), false};
  } catch (const NonUniqueStationaryError&) {
    DensityMatrix g = gibbs_state(spec.H_S, spec.beta);
    const double residual = max_abs_diff(channel_apply(k, g.matrix()), g.matrix());
    if (residual > kTol.stationary_residual) throw;
    return {std::move(g), true};
  }
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(0.25 * i);
  return g;
}

void validate_config(const ExperimentConfig& cfg) {
  const RandomModelParams& p = cfg.params;
  if (cfg.n_models == 0) throw ConfigError("n_models must be at least 1");
  if (p.d_E_min < 2 || p.d_E_max > 8 || p.d_E_min > p.d_E_max) {
    throw ConfigError("d_E range must lie within [2, 8]");
  }
  if (p.N < 1) throw ConfigError("N must be at least 1");
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) throw ConfigError("tau must be positive");
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw ConfigError("beta must be positive");
  if (!(p.eps_max >= 0.0) || !std::isfinite(p.eps_max)) throw ConfigError("eps_max must be nonnegative");
  if (!std::isfinite(p.lambda) || !std::isfinite(p.omega_z) || !std::isfinite(p.omega_x)) {
    throw ConfigError("model parameters must be finite");
  }
  for (double l : cfg.lambda_grid)
    if (!std::isfinite(l)) throw ConfigError("lambda grid entries must be finite");
  if (cfg.cap == 0) throw ConfigError("cap must be positive");
}

// ---------------------------------------------------------------------------
// Scatter experiments
// ---------------------------------------------------------------------------

namespace {

enum class ScatterKind { tur, kur };

struct ModelOutcome {
  std::optional<ModelResult> result;
  std::optional<ModelFailure> failure;
};

ModelOutcome run_one_model(const ExperimentConfig& cfg, std::size_t id, ScatterKind kind) {
  ModelOutcome out;
  try {
    RngStream model_rng(cfg.seed, rng_tag::kModel, id);
    ModelSpec spec = sample_model(model_rng, cfg.params);
    if (kind == ScatterKind::kur && cfg.pure_environment) {
      std::vector<double> pure(spec.d_E, 0.0);
      pure[0] = 1.0;
      spec.env_probs = pure;
    }
    const KrausSet k = forward_kraus(spec);
    const StationaryChoice st = model_stationary_state(spec, k);
    EnumerationOptions eo;
    eo.cap = cfg.cap;
    const Enumeration e = enumerate(k, st.rho, spec.N, Mode::stationary, eo);
    const EnsembleStats ens = ensemble_stats(e);

    ModelResult r;
    r.model_id = id;
    r.seed = cfg.seed;
    r.d_E = spec.d_E;
    r.lambda = spec.lambda;
    r.sigma = ens.sigma;
    r.sigma_star = ens.sigma_star;
    r.boundary_b = ens.boundary_b;
    r.inactivity = ens.inactivity;
    r.ift_check = ens.ift_check;
    r.backward_available = ens.backward_available;
    r.gibbs_fallback = st.gibbs_fallback;
    r.s_ee = entanglement_entropy_avg(spec, st.rho);

    RngStream obs_rng(cfg.seed, rng_tag::kObservable, id);
    if (kind == ScatterKind::tur) {
      const Observable obs = sample_observable(obs_rng, spec.d_E, ObservableKind::current);
      r.observables.push_back(evaluate_observable(e, ens, obs, true, false));
    } else {
      const Observable obs = sample_observable(obs_rng, spec.d_E, ObservableKind::generic);
      r.observables.push_back(evaluate_observable(e, ens, obs, false, true));
      r.observables.push_back(evaluate_observable(e, ens, change_indicator(), false, true));
      if (cfg.pure_environment) {
        r.survival_activity = survival_activity(k, st.rho, spec.N);
        BoundEntry sb;
        sb.name = "survival";
        const double A = *r.survival_activity;
        const BoundEntry& kur = r.observables.back().kur;
        if (A <= 1.0 || kur.vacuous) {
          sb.vacuous = true;
        } else {
          // The KUR bound must dominate the survival-activity bound.
          sb.value = kur.bound;
          sb.bound = 1.0 / (A - 1.0);
          sb.margin = sb.value - sb.bound;
        }
        r.survival = sb;
      }
    }
    out.result = std::move(r);
  } catch (const Error& e) {
    out.failure = ModelFailure{id, e.category(), e.what()};
  }
  return out;
}

ScatterResult run_scatter(const ExperimentConfig& cfg, ScatterKind kind) {
  validate_config(cfg);
  std::vector<ModelOutcome> outcomes(cfg.n_models);
  parallel_for(cfg.n_models, cfg.threads, [&](std::size_t i) { outcomes[i] = run_one_model(cfg, i, kind); });

  ScatterResult res;
  res.mode = kind == ScatterKind::tur ? "tur-scatter" : "kur-scatter";
  res.config = cfg;
  ScatterSummary& s = res.summary;
  s.min_tur_margin = std::numeric_limits<double>::infinity();
  s.min_kur_margin = std::numeric_limits<double>::infinity();
  s.min_quality = std::numeric_limits<double>::infinity();
  for (auto& o : outcomes) {
    if (o.failure) {
      if (o.failure->category == ErrorCategory::bound_violation) ++s.bound_violations;
      res.failures.push_back(*o.failure);
      continue;
    }
    const ModelResult& r = *o.result;
    ++s.models_ok;
    s.max_sigma_star = std::max(s.max_sigma_star, r.sigma_star);
    for (const auto& ob : r.observables) {
      if (!ob.tur.vacuous) s.min_tur_margin = std::min(s.min_tur_margin, ob.tur.margin);
      if (!ob.kur.vacuous) s.min_kur_margin = std::min(s.min_kur_margin, ob.kur.margin);
      if (kind == ScatterKind::tur && !ob.tur_sigma_only.vacuous && ob.tur_sigma_only.margin < 0.0) {
        ++s.sigma_only_violations;
      }
      if (ob.quality) s.min_quality = std::min(s.min_quality, *ob.quality);
      if (ob.name == "indicator" && !ob.kur.vacuous) {
        s.max_indicator_gap = std::max(s.max_indicator_gap, std::abs(ob.kur.margin));
      }
      if ((kind == ScatterKind::tur && ob.tur.vacuous) || (kind == ScatterKind::kur && ob.kur.vacuous)) {
        ++s.vacuous_rows;
      }
    }
    if (r.survival && !r.survival->vacuous && r.survival->margin < -kTol.bound_margin) s.survival_ordering = false;
  }
  s.failures = res.failures.size();
  res.models.reserve(s.models_ok);
  for (auto& o : outcomes)
    if (o.result) res.models.push_back(std::move(*o.result));
  return res;
}

}  // namespace

ScatterResult run_tur_scatter(const ExperimentConfig& cfg) { return run_scatter(cfg, ScatterKind::tur); }
ScatterResult run_kur_scatter(const ExperimentConfig& cfg) { return run_scatter(cfg, ScatterKind::kur); }

// ---------------------------------------------------------------------------
// Lambda sweep
// ---------------------------------------------------------------------------

SweepResult run_lambda_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  SweepResult res;
  res.config = cfg;
  const auto grid = cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
  RngStream model_rng(cfg.seed, rng_tag::kModel, 0);
  const ModelSpec base = sample_model(model_rng, cfg.params);
  RngStream obs_rng(cfg.seed, rng_tag::kObservable, 0);
  const Observable obs = sample_observable(obs_rng, base.d_E, ObservableKind::current);
  res.d_E = base.d_E;

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    ModelSpec spec = base;
    spec.lambda = grid[i];
    const KrausSet k = forward_kraus(spec);
    const StationaryChoice st = model_stationary_state(spec, k);
    EnumerationOptions eo;
    eo.cap = cfg.cap;
    const Enumeration e = enumerate(k, st.rho, spec.N, Mode::stationary, eo);
    const TrajectoryStats t = compute_stats(e, obs);
    SweepRow& r = rows[i];
    r.lambda = grid[i];
    r.sigma = t.sigma;
    r.sigma_star = t.sigma_star;
    r.s_ee = entanglement_entropy_avg(spec, st.rho);
    r.mean = t.mean_phi;
    r.variance = t.var_phi;
    r.quality = quality_factor(t);
    r.gibbs_fallback = st.gibbs_fallback;
  });
  res.rows = std::move(rows);

  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    if (res.rows[i].sigma_star < res.rows[i - 1].sigma_star) res.sigma_star_nondecreasing = false;
    if (res.rows[i].s_ee < res.rows[i - 1].s_ee) res.s_ee_nondecreasing = false;
  }
  for (const auto& r : res.rows)
    if (r.quality) res.min_quality = res.min_quality ? std::min(*res.min_quality, *r.quality) : *r.quality;

  const bool default_params = cfg.params.omega_z == RandomModelParams{}.omega_z && cfg.params.omega_x == RandomModelParams{}.omega_x &&
                              cfg.params.beta == RandomModelParams{}.beta && cfg.params.tau == RandomModelParams{}.tau &&
                              cfg.params.N == RandomModelParams{}.N && cfg.params.d_E_min == RandomModelParams{}.d_E_min &&
                              cfg.params.d_E_max == RandomModelParams{}.d_E_max && cfg.params.eps_max == RandomModelParams{}.eps_max;
  res.golden_checked = cfg.seed == kDefaultSeed && grid == default_lambda_grid() && default_params;
  if (res.golden_checked) {
    res.golden_ok = res.sigma_star_nondecreasing && res.s_ee_nondecreasing && res.min_quality && *res.min_quality < 1.0;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Markov suite
// ---------------------------------------------------------------------------

namespace {

// Thermal pair between levels i < j with gap delta at inverse temperature beta.
void add_thermal_pair(LindbladSpec& s, std::size_t i, std::size_t j, double gamma, double delta, double beta) {
  const double nbar = 1.0 / std::expm1(beta * delta);
  const std::size_t a = s.jumps.size();
  s.jumps.push_back({CMatrix::unit(s.d_S, i, j) * Complex{std::sqrt(gamma * (nbar + 1.0)), 0.0}, beta * delta, a + 1});
  s.jumps.push_back({CMatrix::unit(s.d_S, j, i) * Complex{std::sqrt(gamma * nbar), 0.0}, -beta * delta, a});
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

InvariantCheck at_most(std::string name, std::string subject, double measured, double threshold) {
  return {std::move(name), std::move(subject), measured, threshold, threshold - measured, measured <= threshold};
}

InvariantCheck at_least(std::string name, std::string subject, double measured, double threshold) {
  return {std::move(name), std::move(subject), measured, threshold, measured - threshold, measured >= threshold};
}

InvariantCheck within(std::string name, std::string subject, double measured, double lo, double hi) {
  const double slack = std::min(measured - lo, hi - measured);
  return {std::move(name), std::move(subject), measured, lo, slack, measured >= lo && measured <= hi};
}

}  // namespace

LindbladSpec bundled_driven_qubit() { return driven_qubit(1.0, 1.0, 0.2); }

LindbladSpec bundled_incoherent_qutrit() {
  LindbladSpec s;
  s.d_S = 3;
  const std::vector<double> e{0.0, 1.0, 2.5};
  s.H = CMatrix::diagonal(std::span<const double>(e));
  add_thermal_pair(s, 0, 1, 1.0, 1.0, 1.0);
  add_thermal_pair(s, 1, 2, 0.5, 1.5, 1.0);
  s.validate();
  return s;
}

LindbladSpec bundled_coherent_qutrit() {
  LindbladSpec s;
  s.d_S = 3;
  s.H = CMatrix{{0.0, 0.4, 0.0}, {0.4, 1.0, 0.3}, {0.0, 0.3, 2.5}};
  add_thermal_pair(s, 0, 1, 1.0, 1.0, 1.0);
  const std::vector<double> deph{0.5, -0.5, 0.0};
  s.jumps.push_back({CMatrix::diagonal(std::span<const double>(deph)), 0.0, s.jumps.size()});
  s.validate();
  return s;
}

MarkovSuiteResult run_markov_suite(const ExperimentConfig& cfg) {
  MarkovSuiteResult res;
  auto& checks = res.checks;
  PathOptions po;
  po.cap = cfg.cap;
  po.threads = cfg.threads;

  // Incoherent dynamics: the discretised forward and backward path measures coincide.
  {
    const LindbladSpec s = bundled_incoherent_qutrit();
    const DensityMatrix rho = lindblad_stationary_state(s);
    for (double T : {0.1, 1.0}) {
      const PathStats ps = markov_sigma_star(s, rho, T, 8, po);
      checks.push_back(at_most("incoherent_sigma_star", "incoherent_qutrit T=" + std::to_string(T),
                               std::abs(ps.sigma_star), 1e-10));
    }
  }

  const LindbladSpec dq = bundled_driven_qubit();
  const DensityMatrix dq_rho = lindblad_stationary_state(dq);
  // Short-time bound at T = 1e-2 with 8 steps, 10% slack.
  {
    const double T = 1e-2;
    const PathStats ps = markov_sigma_star(dq, dq_rho, T, 8, po);
    const double lb = short_time_sigma_star_lb(dq.H, dq.jump_matrices(), dq_rho, T);
    checks.push_back(at_least("short_time_bound", "driven_qubit T=0.01", ps.sigma_star, 0.9 * lb));
  }
  // Sigma* ~ T^2 over [1e-3, 1e-1].
  {
    const auto Ts = log_grid(1e-3, 1e-1, 9);
    std::vector<double> ys;
    for (double T : Ts) ys.push_back(markov_sigma_star(dq, dq_rho, T, 8, po).sigma_star);
    checks.push_back(within("sigma_star_slope", "driven_qubit", log_log_slope(Ts, ys), 1.9, 2.1));
  }
  // (P^{-1} - 1) - A_T = O(T^2) over [1e-4, 1e-2].
  {
    const auto Ts = log_grid(1e-4, 1e-2, 9);
    std::vector<double> ys;
    for (double T : Ts) {
      const double P = no_jump_probability(dq, dq_rho, T);
      ys.push_back(std::abs((1.0 / P - 1.0) - dynamical_activity(dq, dq_rho, T)));
    }
    checks.push_back(within("activity_slope", "driven_qubit", log_log_slope(Ts, ys), 1.9, 2.1));
  }
  // Data-processing bound on the coherent specs.
  {
    const std::vector<std::pair<std::string, LindbladSpec>> coherent{{"driven_qubit", dq},
                                                                     {"coherent_qutrit", bundled_coherent_qutrit()}};
    for (const auto& [name, s] : coherent) {
      const DensityMatrix rho = lindblad_stationary_state(s);
      for (double T : {0.1, 0.5, 1.0}) {
        const PathStats ps = markov_sigma_star(s, rho, T, 8, po);
        const RelativeEntropy dp = sigma_star_dp_lower_bound(s, rho, T);
        checks.push_back(at_least("data_processing_bound", name + " T=" + std::to_string(T), ps.sigma_star,
                                  dp.infinite ? std::numeric_limits<double>::infinity() : dp.value - 1e-6));
      }
    }
  }

  // Loschmidt echo below the inactivity on bundled, user and random specs.
  std::vector<std::pair<std::string, LindbladSpec>> specs{{"driven_qubit", dq},
                                                          {"incoherent_qutrit", bundled_incoherent_qutrit()},
                                                          {"coherent_qutrit", bundled_coherent_qutrit()}};
  for (const auto& path : cfg.lindblad_files) {
    const LoadedLindblad l = load_lindblad_file(path);
    specs.emplace_back(l.name.empty() ? path.filename().string() : l.name, l.spec);
  }
  const std::size_t fixed = specs.size();
  for (std::size_t i = 0; i < cfg.random_lindblad; ++i) {
    RngStream rng(cfg.seed, rng_tag::kLindblad, i);
    const std::size_t d = static_cast<std::size_t>(rng.integer(2, 4));
    const std::size_t pairs = static_cast<std::size_t>(rng.integer(1, 2));
    specs.emplace_back("random_" + std::to_string(i), random_lindblad_spec(rng, d, pairs));
  }
  std::vector<InvariantCheck> echo(specs.size());
  parallel_for(specs.size(), cfg.threads, [&](std::size_t i) {
    const auto& [name, s] = specs[i];
    const DensityMatrix rho = lindblad_stationary_state(s);
    RngStream rng(cfg.seed, rng_tag::kLindblad ^ 0xec40ULL, i);
    const double T = i < fixed ? 1.0 : rng.uniform(0.1, 2.0);
    const double P = no_jump_probability(s, rho, T);
    const double eta = loschmidt_echo(s, rho, T);
    echo[i] = at_most("echo_below_inactivity", name, eta, P + 1e-10);
  });
  checks.insert(checks.end(), echo.begin(), echo.end());

  res.all_passed = std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
  return res;
}

// ---------------------------------------------------------------------------
// Single model
// ---------------------------------------------------------------------------

SingleResult run_single(const ModelSpec& spec, const std::vector<Observable>& observables, const ExperimentConfig& cfg,
                        std::vector<std::string> warnings) {
  spec.validate();
  SingleResult out;
  out.warnings = std::move(warnings);
  out.observables = observables;
  const KrausSet k = forward_kraus(spec);
  const StationaryChoice st = model_stationary_state(spec, k);
  if (st.gibbs_fallback) out.warnings.push_back("stationary state not unique; using the Gibbs state of H_S");
  EnumerationOptions eo;
  eo.cap = cfg.cap;
  eo.threads = cfg.threads;
  out.enumeration = enumerate(k, st.rho, spec.N, Mode::stationary, eo);
  const EnsembleStats ens = ensemble_stats(out.enumeration);

  ModelResult& r = out.model;
  r.seed = cfg.seed;
  r.d_E = spec.d_E;
  r.lambda = spec.lambda;
  r.sigma = ens.sigma;
  r.sigma_star = ens.sigma_star;
  r.boundary_b = ens.boundary_b;
  r.inactivity = ens.inactivity;
  r.ift_check = ens.ift_check;
  r.backward_available = ens.backward_available;
  r.gibbs_fallback = st.gibbs_fallback;
  r.s_ee = entanglement_entropy_avg(spec, st.rho);
  for (const auto& obs : observables) {
    const bool current = obs.kind == ObservableKind::current;
    r.observables.push_back(evaluate_observable(out.enumeration, ens, obs, current, !current));
  }
  if (std::abs(spec.environment_probabilities()[0] - 1.0) <= kTol.env_probability_sum) {
    r.survival_activity = survival_activity(k, st.rho, spec.N);
  }
  return out;
}

}  // namespace qprecision
