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

#include "cli_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qprecision::cli {

namespace {

using nlohmann::json;

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("config: unknown key '" + k + "' in " + where);
  }
}

}  // namespace

void apply_config_text(const std::string& text, ExperimentConfig& cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j,
             {"seed", "models", "lambda", "lambda_grid", "threads", "cap", "pure_environment", "random_lindblad",
              "lindblad_files", "params"},
             "config");
  if (j.contains("seed")) cfg.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("models")) cfg.n_models = get<std::size_t>(j, "models");
  if (j.contains("lambda")) cfg.params.lambda = get<double>(j, "lambda");
  if (j.contains("lambda_grid")) cfg.lambda_grid = get<std::vector<double>>(j, "lambda_grid");
  if (j.contains("threads")) cfg.threads = get<unsigned>(j, "threads");
  if (j.contains("cap")) cfg.cap = get<std::size_t>(j, "cap");
  if (j.contains("pure_environment")) cfg.pure_environment = get<bool>(j, "pure_environment");
  if (j.contains("random_lindblad")) cfg.random_lindblad = get<std::size_t>(j, "random_lindblad");
  if (j.contains("lindblad_files")) {
    cfg.lindblad_files.clear();
    for (const auto& s : get<std::vector<std::string>>(j, "lindblad_files")) cfg.lindblad_files.emplace_back(s);
  }
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError("config: 'params' must be an object");
    check_keys(p, {"omega_z", "omega_x", "lambda", "beta", "tau", "N", "d_E_min", "d_E_max", "eps_max"}, "params");
    RandomModelParams& f = cfg.params;
    if (p.contains("omega_z")) f.omega_z = get<double>(p, "omega_z");
    if (p.contains("omega_x")) f.omega_x = get<double>(p, "omega_x");
    if (p.contains("lambda")) f.lambda = get<double>(p, "lambda");
    if (p.contains("beta")) f.beta = get<double>(p, "beta");
    if (p.contains("tau")) f.tau = get<double>(p, "tau");
    if (p.contains("N")) f.N = get<int>(p, "N");
    if (p.contains("d_E_min")) f.d_E_min = get<std::size_t>(p, "d_E_min");
    if (p.contains("d_E_max")) f.d_E_max = get<std::size_t>(p, "d_E_max");
    if (p.contains("eps_max")) f.eps_max = get<double>(p, "eps_max");
  }
}

void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg) {
  const std::string ext = path.extension().string();
  if (ext == ".toml") throw ConfigError("config: TOML is not supported; supply a JSON file");
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(ss.str(), cfg);
}

}  // namespace qprecision::cli
