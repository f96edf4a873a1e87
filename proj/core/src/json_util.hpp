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

#pragma once

// Internal helpers shared by the JSON readers and writers.

#include <string>
#include <vector>

#include "json.hpp"
#include "qprecision/errors.hpp"
#include "qprecision/qlinalg.hpp"

namespace qprecision::detail {

using nlohmann::json;

// Matrices are nested arrays of rows, each entry an [re, im] pair. A bare
// number is accepted as a real entry.
inline CMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw SchemaError(name + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw SchemaError(name + ": rows must be arrays");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError(name + ": ragged row " + std::to_string(i));
    for (std::size_t k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = Complex{e[0].get<double>(), e[1].get<double>()};
      } else {
        throw SchemaError(name + ": entry (" + std::to_string(i) + "," + std::to_string(k) +
                          ") is not a number or [re, im] pair");
      }
    }
  }
  return m;
}

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<std::vector<double>> real_matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw SchemaError(name + ": expected an array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError(name + ": rows must be arrays");
    std::vector<double> r;
    for (const auto& e : row) {
      if (!e.is_number()) throw SchemaError(name + ": entries must be real numbers");
      r.push_back(e.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": field '" + key + "' has the wrong type");
  }
}

inline json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace qprecision::detail
