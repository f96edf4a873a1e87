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

#include "qprecision/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json_util.hpp"
#include "qprecision/bounds.hpp"

namespace qprecision {

using nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(std::optional<double> x, const char* flag) {
  if (!x || !std::isfinite(*x)) return flag;
  return format_double(*x);
}

namespace {

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::input:
      return "input";
    case ErrorCategory::numerical:
      return "numerical";
    case ErrorCategory::bound_violation:
      return "bound_violation";
  }
  return "unknown";
}

const char* kind_name(ObservableKind k) { return k == ObservableKind::current ? "current" : "generic"; }

std::optional<double> rel_fluct(const ObservableResult& o) {
  if (mean_vanishes(o.mean, o.variance + o.mean * o.mean)) return std::nullopt;
  return o.variance / (o.mean * o.mean);
}

std::optional<double> entry_bound(const BoundEntry& e) {
  if (e.vacuous) return std::nullopt;
  return e.bound;
}

std::optional<double> entry_margin(const BoundEntry& e) {
  if (e.vacuous) return std::nullopt;
  return e.margin;
}

void write_row(std::ostream& os, const ModelResult& m, const ObservableResult& o) {
  os << m.model_id << ',' << m.seed << ',' << m.d_E << ',' << format_double(m.lambda) << ',' << format_double(m.sigma)
     << ',' << format_cell(m.backward_available ? std::optional(m.sigma_star) : std::nullopt, "excluded") << ','
     << format_double(m.boundary_b) << ',' << format_double(m.inactivity) << ',' << format_double(m.s_ee) << ','
     << o.name << ',' << kind_name(o.kind) << ',' << format_double(o.mean) << ',' << format_double(o.variance) << ','
     << format_cell(rel_fluct(o)) << ',' << format_cell(entry_bound(o.tur)) << ','
     << format_cell(entry_bound(o.tur_sigma_only)) << ',' << format_cell(entry_bound(o.kur)) << ','
     << format_cell(o.quality) << ',' << format_cell(entry_margin(o.tur)) << ',' << format_cell(entry_margin(o.kur))
     << ',' << (m.gibbs_fallback ? 1 : 0) << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

ordered_json opt_json(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return "vacuous";
  return *x;
}

ordered_json finite_or_inf(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

ordered_json params_json(const ExperimentConfig& c) {
  const RandomModelParams& p = c.params;
  ordered_json j;
  j["seed"] = c.seed;
  j["n_models"] = c.n_models;
  j["omega_z"] = p.omega_z;
  j["omega_x"] = p.omega_x;
  j["lambda"] = p.lambda;
  j["beta"] = p.beta;
  j["tau"] = p.tau;
  j["N"] = p.N;
  j["d_E_range"] = {p.d_E_min, p.d_E_max};
  j["eps_max"] = p.eps_max;
  j["pure_environment"] = c.pure_environment;
  j["cap"] = c.cap;
  return j;
}

ordered_json bound_json(const BoundEntry& e) {
  ordered_json j;
  j["name"] = e.name;
  if (e.vacuous) {
    j["vacuous"] = true;
  } else {
    j["value"] = e.value;
    j["bound"] = e.bound;
    j["margin"] = e.margin;
  }
  return j;
}

ordered_json model_json(const ModelResult& m) {
  ordered_json j;
  j["model_id"] = m.model_id;
  j["d_E"] = m.d_E;
  j["lambda"] = m.lambda;
  j["sigma"] = m.sigma;
  j["sigma_star"] = m.backward_available ? ordered_json(m.sigma_star) : ordered_json("excluded");
  j["boundary_b"] = m.boundary_b;
  j["inactivity"] = m.inactivity;
  j["s_ee"] = m.s_ee;
  j["ift_check"] = finite_or_inf(m.ift_check);
  j["gibbs_fallback"] = m.gibbs_fallback;
  if (m.survival_activity) j["survival_activity"] = finite_or_inf(*m.survival_activity);
  if (m.survival) j["survival"] = bound_json(*m.survival);
  ordered_json obs = ordered_json::array();
  for (const auto& o : m.observables) {
    ordered_json oj;
    oj["name"] = o.name;
    oj["kind"] = kind_name(o.kind);
    oj["mean"] = o.mean;
    oj["variance"] = o.variance;
    oj["rel_fluct"] = opt_json(rel_fluct(o));
    oj["tur"] = bound_json(o.tur);
    oj["tur_sigma_only"] = bound_json(o.tur_sigma_only);
    oj["kur"] = bound_json(o.kur);
    oj["quality"] = opt_json(o.quality);
    obs.push_back(std::move(oj));
  }
  j["observables"] = std::move(obs);
  return j;
}

}  // namespace

const std::vector<std::string>& result_row_columns() {
  static const std::vector<std::string> cols{
      "model_id",  "seed",        "d_E",          "lambda",    "sigma",   "sigma_star",     "boundary_b",
      "inactivity", "s_ee",       "observable",   "kind",      "mean",    "variance",       "rel_fluct",
      "f_sigma_total", "f_sigma", "kur_bound",    "quality",   "tur_margin", "kur_margin", "gibbs_fallback"};
  return cols;
}

void write_scatter_csv(std::ostream& os, const ScatterResult& r) {
  write_header(os, result_row_columns());
  for (const auto& m : r.models)
    for (const auto& o : m.observables) write_row(os, m, o);
}

std::string scatter_summary_json(const ScatterResult& r) {
  const ScatterSummary& s = r.summary;
  ordered_json j;
  j["schema"] = "qprecision-report/1";
  j["mode"] = r.mode;
  j["config"] = params_json(r.config);
  ordered_json sj;
  sj["models_ok"] = s.models_ok;
  sj["failures"] = s.failures;
  sj["bound_violations"] = s.bound_violations;
  if (r.mode == "tur-scatter") {
    sj["min_tur_margin"] = finite_or_inf(s.min_tur_margin);
    sj["sigma_only_violations"] = s.sigma_only_violations;
  } else {
    sj["min_kur_margin"] = finite_or_inf(s.min_kur_margin);
    sj["max_indicator_gap"] = s.max_indicator_gap;
    if (r.config.pure_environment) sj["survival_ordering"] = s.survival_ordering;
  }
  sj["max_sigma_star"] = s.max_sigma_star;
  sj["min_quality"] = finite_or_inf(s.min_quality);
  sj["vacuous_rows"] = s.vacuous_rows;
  j["summary"] = std::move(sj);
  ordered_json models = ordered_json::array();
  for (const auto& m : r.models) models.push_back(model_json(m));
  j["models"] = std::move(models);
  return j.dump(2) + "\n";
}

void write_errors(std::ostream& os, const std::vector<ModelFailure>& failures) {
  os << "model_id,category,message\n";
  for (const auto& f : failures) {
    std::string msg = f.message;
    for (auto& ch : msg)
      if (ch == '\n' || ch == ',') ch = ' ';
    os << f.model_id << ',' << category_name(f.category) << ',' << msg << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "lambda,sigma,sigma_star,s_ee,mean,variance,quality,gibbs_fallback\n";
  for (const auto& row : r.rows) {
    os << format_double(row.lambda) << ',' << format_double(row.sigma) << ',' << format_double(row.sigma_star) << ','
       << format_double(row.s_ee) << ',' << format_double(row.mean) << ',' << format_double(row.variance) << ','
       << format_cell(row.quality) << ',' << (row.gibbs_fallback ? 1 : 0) << '\n';
  }
}

std::string sweep_summary_json(const SweepResult& r) {
  ordered_json j;
  j["schema"] = "qprecision-report/1";
  j["mode"] = "lambda-sweep";
  j["config"] = params_json(r.config);
  j["d_E"] = r.d_E;
  ordered_json sj;
  sj["sigma_star_nondecreasing"] = r.sigma_star_nondecreasing;
  sj["s_ee_nondecreasing"] = r.s_ee_nondecreasing;
  sj["min_quality"] = opt_json(r.min_quality);
  sj["golden_checked"] = r.golden_checked;
  if (r.golden_checked) sj["golden_ok"] = r.golden_ok;
  j["summary"] = std::move(sj);
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json rj;
    rj["lambda"] = row.lambda;
    rj["sigma"] = row.sigma;
    rj["sigma_star"] = row.sigma_star;
    rj["s_ee"] = row.s_ee;
    rj["quality"] = opt_json(row.quality);
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string markov_report_json(const MarkovSuiteResult& r, const ExperimentConfig& cfg) {
  ordered_json j;
  j["schema"] = "qprecision-report/1";
  j["mode"] = "markov-suite";
  j["seed"] = cfg.seed;
  j["random_specs"] = cfg.random_lindblad;
  j["all_passed"] = r.all_passed;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["subject"] = c.subject;
    cj["measured"] = finite_or_inf(c.measured);
    cj["threshold"] = finite_or_inf(c.threshold);
    cj["slack"] = finite_or_inf(c.slack);
    cj["passed"] = c.passed;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

void write_single_csv(std::ostream& os, const SingleResult& r) {
  write_header(os, result_row_columns());
  for (const auto& o : r.model.observables) write_row(os, r.model, o);
}

std::string single_summary_json(const SingleResult& r) {
  ordered_json j;
  j["schema"] = "qprecision-report/1";
  j["mode"] = "single";
  j["warnings"] = r.warnings;
  j["trajectories"] = r.enumeration.forward.size();
  j["model"] = model_json(r.model);
  return j.dump(2) + "\n";
}

void write_trajectory_csv(std::ostream& os, const Enumeration& e, const std::vector<Observable>& observables) {
  const TrajectoryIndexer& idx = e.indexer;
  const int N = idx.rounds();
  os << 'n';
  for (int i = 1; i <= N; ++i) os << ",nu_" << i;
  for (int i = 1; i <= N; ++i) os << ",mu_" << i;
  os << ",m,p_fwd,p_bwd_same,p_fwd_reversed";
  for (std::size_t k = 0; k < observables.size(); ++k) os << ',' << (k == 0 ? "phi" : observables[k].name);
  os << '\n';
  Trajectory g;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double p = e.forward[i];
    if (!(p > kTol.zero_probability)) continue;
    idx.decode_into(i, g);
    os << g.n;
    for (const auto& pr : g.pairs) os << ',' << pr.nu;
    for (const auto& pr : g.pairs) os << ',' << pr.mu;
    os << ',' << g.m << ',' << format_double(p) << ','
       << (e.backward_available() ? format_double(e.backward[i]) : std::string("excluded")) << ','
       << format_double(e.forward[idx.reversed(i)]);
    for (const auto& o : observables) os << ',' << format_double(o.value(g));
    os << '\n';
  }
}

std::string gnuplot_script(const std::string& mode, const std::string& csv_name) {
  std::string s = "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 800,600\n";
  if (mode == "tur-scatter") {
    s += "set output 'tur_scatter.png'\nset logscale xy\nset xlabel 'entropy'\nset ylabel 'Var/mean^2'\n"
         "f(x) = 1/sinh(x/2)**2\n"
         "plot '" + csv_name + "' using ($5+$6+$7):14 title 'Sigma+Sigma*' with points pt 7 ps 0.6, \\\n"
         "     '" + csv_name + "' using 5:14 title 'Sigma' with points pt 6 ps 0.6, \\\n"
         "     f(x) title 'f(x)' with lines\n";
  } else if (mode == "kur-scatter") {
    s += "set output 'kur_scatter.png'\nset logscale xy\nset xlabel 'P/(1-P)'\nset ylabel 'Var/mean^2'\n"
         "plot '" + csv_name + "' using 17:14 with points pt 7 ps 0.6 notitle, x notitle\n";
  } else {
    s += "set output 'lambda_sweep.png'\nset xlabel 'lambda'\nset y2tics\n"
         "plot '" + csv_name + "' using 1:3 with linespoints title 'Sigma*', \\\n"
         "     '" + csv_name + "' using 1:4 with linespoints title 'S_EE', \\\n"
         "     '" + csv_name + "' using 1:7 axes x1y2 with linespoints title 'Q'\n";
  }
  return s;
}

}  // namespace qprecision
