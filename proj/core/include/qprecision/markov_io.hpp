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
#include <string>

#include "qprecision/markov.hpp"

namespace qprecision {

inline constexpr const char* kLindbladSchema = "qprecision-lindblad/1";

struct LoadedLindblad {
  std::string name;
  LindbladSpec spec;
};

/// Fields: schema, d_S, H, L (list of matrices), ds (list), pairing (list of
/// partner indices or null), optional name.
LoadedLindblad parse_lindblad_json(const std::string& text);
LoadedLindblad load_lindblad_file(const std::filesystem::path& path);
std::string lindblad_to_json(const LindbladSpec& spec, const std::string& name = "");

}  // namespace qprecision
