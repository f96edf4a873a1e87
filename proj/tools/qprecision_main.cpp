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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "qprecision/model_io.hpp"
#include "qprecision/report_io.hpp"

namespace fs = std::filesystem;
using namespace qprecision;

namespace {

enum ExitCode { kOk = 0, kBoundViolation = 2, kNumerical = 3, kConfig = 4 };

struct Options {
  std::uint64_t seed = kDefaultSeed;
  std::size_t models = 0;
  std::vector<double> lambda;
  std::string out_dir = ".";
  std::string config;
  unsigned threads = 0;
  std::size_t cap = 0;
  bool pure = false;
  std::size_t random_specs = 0;
  std::vector<std::string> lindblad_files;
  std::string model_file;
  bool dump_trajectories = false;
};

bool given(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

unsigned env_threads() {
  const char* s = std::getenv("QPRECISION_THREADS");
  char* end = nullptr;
  const unsigned long v = std::strtoul(s, &end, 10);
  if (*end != '\0' || v == 0) throw ConfigError("QPRECISION_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

template <class F>
void write_stream(const fs::path& path, F&& fill) {
  std::ostringstream os;
  fill(os);
  write_file(path, os.str());
}

ExperimentConfig build_config(const Options& o, const CLI::App& sub) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cli::apply_config_file(o.config, cfg);
  if (given(sub, "--seed")) cfg.seed = o.seed;
  if (given(sub, "--models")) cfg.n_models = o.models;
  if (given(sub, "--threads")) {
    cfg.threads = o.threads;
  } else if (std::getenv("QPRECISION_THREADS")) {
    cfg.threads = env_threads();
  }
  if (cfg.threads == 0) throw ConfigError("--threads must be positive");
  if (given(sub, "--cap")) cfg.cap = o.cap;
  validate_config(cfg);
  return cfg;
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw ConfigError("cannot create output directory " + dir);
  return p;
}

int scatter_exit(const ScatterResult& r) {
  if (r.summary.bound_violations > 0) return kBoundViolation;
  for (const auto& f : r.failures)
    if (f.category == ErrorCategory::numerical) return kNumerical;
  return kOk;
}

int run_scatter(const Options& o, const CLI::App& sub, bool kur) {
  ExperimentConfig cfg = build_config(o, sub);
  if (given(sub, "--lambda")) {
    if (o.lambda.size() != 1) throw ConfigError("--lambda takes one value in scatter mode");
    cfg.params.lambda = o.lambda.front();
  }
  if (given(sub, "--pure-environment")) cfg.pure_environment = o.pure;
  const fs::path dir = prepare_out_dir(o.out_dir);
  const ScatterResult r = kur ? run_kur_scatter(cfg) : run_tur_scatter(cfg);
  const std::string stem = kur ? "kur_scatter" : "tur_scatter";
  write_stream(dir / (stem + ".csv"), [&](std::ostream& os) { write_scatter_csv(os, r); });
  write_file(dir / (stem + ".json"), scatter_summary_json(r));
  write_stream(dir / (stem + "_errors.csv"), [&](std::ostream& os) { write_errors(os, r.failures); });
  write_file(dir / (stem + ".gp"), gnuplot_script(r.mode, stem + ".csv"));
  const ScatterSummary& s = r.summary;
  std::cout << r.mode << ": " << s.models_ok << " models, " << s.failures << " failures";
  if (kur) {
    std::cout << ", min margin " << format_double(s.min_kur_margin) << ", indicator gap "
              << format_double(s.max_indicator_gap);
  } else {
    std::cout << ", min margin " << format_double(s.min_tur_margin) << ", below f(Sigma) "
              << s.sigma_only_violations;
  }
  std::cout << '\n';
  return scatter_exit(r);
}

int run_sweep(const Options& o, const CLI::App& sub) {
  ExperimentConfig cfg = build_config(o, sub);
  if (given(sub, "--lambda")) cfg.lambda_grid = o.lambda;
  const fs::path dir = prepare_out_dir(o.out_dir);
  const SweepResult r = run_lambda_sweep(cfg);
  write_stream(dir / "lambda_sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, r); });
  write_file(dir / "lambda_sweep.json", sweep_summary_json(r));
  write_file(dir / "lambda_sweep.gp", gnuplot_script("lambda-sweep", "lambda_sweep.csv"));
  std::cout << "lambda-sweep: d_E " << r.d_E << ", Sigma* nondecreasing " << r.sigma_star_nondecreasing
            << ", S_EE nondecreasing " << r.s_ee_nondecreasing << ", min Q "
            << format_cell(r.min_quality) << '\n';
  if (r.golden_checked && !r.golden_ok) {
    std::cerr << "golden regression failed for the default seed\n";
    return kBoundViolation;
  }
  return kOk;
}

int run_markov(const Options& o, const CLI::App& sub) {
  ExperimentConfig cfg = build_config(o, sub);
  if (given(sub, "--random-specs")) cfg.random_lindblad = o.random_specs;
  for (const auto& f : o.lindblad_files) cfg.lindblad_files.emplace_back(f);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const MarkovSuiteResult r = run_markov_suite(cfg);
  write_file(dir / "markov_suite.json", markov_report_json(r, cfg));
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    if (!c.passed) {
      ++failed;
      std::cerr << "FAILED " << c.name << " [" << c.subject << "] measured " << format_double(c.measured)
                << " threshold " << format_double(c.threshold) << '\n';
    }
  }
  std::cout << "markov-suite: " << r.checks.size() << " checks, " << failed << " failed\n";
  return r.all_passed ? kOk : kBoundViolation;
}

int run_single_model(const Options& o, const CLI::App& sub) {
  ExperimentConfig cfg = build_config(o, sub);
  LoadedModel lm = load_model_file(o.model_file);
  if (given(sub, "--lambda")) {
    if (o.lambda.size() != 1) throw ConfigError("--lambda takes one value in single mode");
    lm.spec.lambda = o.lambda.front();
  }
  std::vector<Observable> obs;
  if (lm.observable) {
    const ObservableKind kind = lm.observable_kind == "generic" ? ObservableKind::generic : ObservableKind::current;
    obs.push_back(pair_observable(*lm.observable, kind, lm.observable_kind));
    validate_observable(TrajectoryIndexer(lm.spec.d_S, lm.spec.d_E, lm.spec.N), obs.back());
  }
  obs.push_back(change_indicator());
  const fs::path dir = prepare_out_dir(o.out_dir);
  const SingleResult r = run_single(lm.spec, obs, cfg, lm.warnings);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  write_stream(dir / "single.csv", [&](std::ostream& os) { write_single_csv(os, r); });
  write_file(dir / "single.json", single_summary_json(r));
  if (o.dump_trajectories) {
    write_stream(dir / "trajectories.csv",
                 [&](std::ostream& os) { write_trajectory_csv(os, r.enumeration, r.observables); });
  }
  const ModelResult& m = r.model;
  std::cout << "single: Sigma " << format_double(m.sigma) << ", Sigma* "
            << (m.backward_available ? format_double(m.sigma_star) : std::string("excluded")) << ", inactivity "
            << format_double(m.inactivity) << '\n';
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--out-dir", o.out_dir, "Output directory");
  sub->add_option("--config", o.config, "JSON configuration file");
  sub->add_option("--threads", o.threads, "Worker threads (fallback: QPRECISION_THREADS)");
  sub->add_option("--cap", o.cap, "Trajectory enumeration cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-level uncertainty relations for open quantum systems"};
  app.require_subcommand(1);
  Options o;

  auto* tur = app.add_subcommand("tur-scatter", "Random models, current observables, TUR check");
  add_common(tur, o);
  tur->add_option("--models", o.models, "Number of random models");
  tur->add_option("--lambda", o.lambda, "Coupling strength")->expected(1);

  auto* kur = app.add_subcommand("kur-scatter", "Random models, generic observables, KUR check");
  add_common(kur, o);
  kur->add_option("--models", o.models, "Number of random models");
  kur->add_option("--lambda", o.lambda, "Coupling strength")->expected(1);
  kur->add_flag("--pure-environment", o.pure, "Start the environment in its ground state");

  auto* sweep = app.add_subcommand("lambda-sweep", "Coupling sweep of one seeded model");
  add_common(sweep, o);
  sweep->add_option("--lambda", o.lambda, "Coupling grid")->delimiter(',');

  auto* markov = app.add_subcommand("markov-suite", "Markovian invariant checks");
  add_common(markov, o);
  markov->add_option("--random-specs", o.random_specs, "Number of random Lindblad specs");
  markov->add_option("--spec", o.lindblad_files, "Extra Lindblad spec JSON files");

  auto* single = app.add_subcommand("single", "Enumerate one model from a JSON file");
  add_common(single, o);
  single->add_option("model", o.model_file, "Model JSON file")->required();
  single->add_option("--lambda", o.lambda, "Override the coupling strength")->expected(1);
  single->add_flag("--dump-trajectories", o.dump_trajectories, "Write trajectories.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (tur->parsed()) return run_scatter(o, *tur, false);
    if (kur->parsed()) return run_scatter(o, *kur, true);
    if (sweep->parsed()) return run_sweep(o, *sweep);
    if (markov->parsed()) return run_markov(o, *markov);
    return run_single_model(o, *single);
  } catch (const BoundViolationError& e) {
    std::cerr << "bound violation: " << e.what() << '\n';
    return kBoundViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.category() == ErrorCategory::numerical ? kNumerical : kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
