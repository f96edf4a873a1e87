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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qprecision/model.hpp"

namespace qprecision {

inline constexpr const char* kModelSchema = "qprecision-model/1";

struct LoadedModel {
  ModelSpec spec;
  // Optional per-round observable coefficients c_{mu nu} and their kind
  // ("current" or "generic").
  std::optional<std::vector<std::vector<double>>> observable;
  std::string observable_kind = "current";
  std::vector<std::string> warnings;
};

/// Parses a model document. A non-diagonal H_E is rotated into its
/// eigenbasis (together with H_I) and a warning is recorded.
LoadedModel parse_model_json(const std::string& text);
LoadedModel load_model_file(const std::filesystem::path& path);
std::string model_to_json(const ModelSpec& spec);

}  // namespace qprecision
