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

#include "qprecision/markov_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace qprecision {

using detail::json;

LoadedLindblad parse_lindblad_json(const std::string& text) {
  const json j = detail::parse_json(text, "lindblad");
  const auto schema = detail::required<std::string>(j, "schema", "lindblad");
  if (schema != kLindbladSchema) throw SchemaError("lindblad: unsupported schema '" + schema + "'");
  LoadedLindblad out;
  out.name = j.value("name", std::string());
  LindbladSpec& s = out.spec;
  s.d_S = detail::required<std::size_t>(j, "d_S", "lindblad");
  if (!j.contains("H")) throw SchemaError("lindblad: missing field 'H'");
  s.H = detail::matrix_from_json(j["H"], "H");
  const json ls = j.value("L", json::array());
  const json ds = j.value("ds", json::array());
  const json pairing = j.value("pairing", json::array());
  if (!ls.is_array() || !ds.is_array() || !pairing.is_array()) throw SchemaError("lindblad: L, ds, pairing must be lists");
  if (ds.size() != ls.size() || pairing.size() != ls.size()) {
    throw SchemaError("lindblad: L, ds and pairing must have equal length");
  }
  for (std::size_t k = 0; k < ls.size(); ++k) {
    JumpOperator op;
    op.L = detail::matrix_from_json(ls[k], "L[" + std::to_string(k) + "]");
    if (!ds[k].is_number()) throw SchemaError("lindblad: ds entries must be numbers");
    op.ds = ds[k].get<double>();
    if (pairing[k].is_number_integer()) {
      op.partner = pairing[k].get<std::size_t>();
    } else if (!pairing[k].is_null()) {
      throw SchemaError("lindblad: pairing entries must be indices or null");
    }
    s.jumps.push_back(std::move(op));
  }
  s.validate();
  return out;
}

LoadedLindblad load_lindblad_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open Lindblad file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lindblad_json(ss.str());
}

std::string lindblad_to_json(const LindbladSpec& spec, const std::string& name) {
  json j;
  j["schema"] = kLindbladSchema;
  if (!name.empty()) j["name"] = name;
  j["d_S"] = spec.d_S;
  j["H"] = detail::matrix_to_json(spec.H);
  j["L"] = json::array();
  j["ds"] = json::array();
  j["pairing"] = json::array();
  for (const auto& op : spec.jumps) {
    j["L"].push_back(detail::matrix_to_json(op.L));
    j["ds"].push_back(op.ds);
    j["pairing"].push_back(op.partner ? json(*op.partner) : json(nullptr));
  }
  return j.dump(2);
}

}  // namespace qprecision
