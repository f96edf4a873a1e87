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

#include "qprecision/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace qprecision {

using detail::json;

LoadedModel parse_model_json(const std::string& text) {
  const json j = detail::parse_json(text, "model");
  const auto schema = detail::required<std::string>(j, "schema", "model");
  if (schema != kModelSchema) throw SchemaError("model: unsupported schema '" + schema + "'");
  if (!j.contains("dims")) throw SchemaError("model: missing field 'dims'");
  const auto d_S = detail::required<std::size_t>(j["dims"], "d_S", "model.dims");
  const auto d_E = detail::required<std::size_t>(j["dims"], "d_E", "model.dims");

  LoadedModel out;
  ModelSpec& s = out.spec;
  s.d_S = d_S;
  s.d_E = d_E;
  if (!j.contains("H_S") || !j.contains("H_E")) throw SchemaError("model: H_S and H_E are required");
  s.H_S = detail::matrix_from_json(j["H_S"], "H_S");
  s.H_E = detail::matrix_from_json(j["H_E"], "H_E");
  if (s.H_S.rows() != d_S || s.H_E.rows() != d_E) throw SchemaError("model: matrix sizes disagree with dims");
  if (j.contains("H_I")) {
    s.H_I = detail::matrix_from_json(j["H_I"], "H_I");
  } else if (j.contains("V_S") && j.contains("V_E")) {
    s.H_I = kron(detail::matrix_from_json(j["V_S"], "V_S"), detail::matrix_from_json(j["V_E"], "V_E"));
  } else {
    throw SchemaError("model: provide H_I or both V_S and V_E");
  }
  s.lambda = detail::required<double>(j, "lambda", "model");
  s.beta = detail::required<double>(j, "beta", "model");
  s.tau = detail::required<double>(j, "tau", "model");
  s.N = detail::required<int>(j, "N", "model");
  if (j.contains("env_probs")) s.env_probs = j["env_probs"].get<std::vector<double>>();

  if (!is_hermitian(s.H_E)) throw HermiticityError("H_E");
  bool diagonal = true;
  for (std::size_t a = 0; a < d_E; ++a)
    for (std::size_t b = 0; b < d_E; ++b)
      if (a != b && std::abs(s.H_E(a, b)) > kTol.hermiticity) diagonal = false;
  if (!diagonal) {
    const auto eig = herm_eig(s.H_E);
    const CMatrix w = kron(CMatrix::identity(d_S), eig.vectors);
    s.H_I = w.adjoint() * s.H_I * w;
    s.H_E = CMatrix::diagonal(std::span<const double>(eig.values));
    out.warnings.push_back("H_E was not diagonal; the model was rotated into the H_E eigenbasis");
  }
  s.validate();

  if (j.contains("observable")) {
    const json& o = j["observable"];
    out.observable_kind = o.value("kind", std::string("current"));
    if (out.observable_kind != "current" && out.observable_kind != "generic") {
      throw SchemaError("observable.kind must be 'current' or 'generic'");
    }
    if (!o.contains("c")) throw SchemaError("observable: missing field 'c'");
    out.observable = detail::real_matrix_from_json(o["c"], "observable.c");
    if (out.observable->size() != d_E) throw SchemaError("observable.c must be d_E x d_E");
    for (const auto& row : *out.observable)
      if (row.size() != d_E) throw SchemaError("observable.c must be d_E x d_E");
  }
  return out;
}

LoadedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str());
}

std::string model_to_json(const ModelSpec& spec) {
  json j;
  j["schema"] = kModelSchema;
  j["dims"] = {{"d_S", spec.d_S}, {"d_E", spec.d_E}};
  j["H_S"] = detail::matrix_to_json(spec.H_S);
  j["H_E"] = detail::matrix_to_json(spec.H_E);
  j["H_I"] = detail::matrix_to_json(spec.H_I);
  j["lambda"] = spec.lambda;
  j["beta"] = spec.beta;
  j["tau"] = spec.tau;
  j["N"] = spec.N;
  if (spec.env_probs) j["env_probs"] = *spec.env_probs;
  return j.dump(2);
}

}  // namespace qprecision
