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

#include "qprecision/experiments.hpp"

namespace qprecision::cli {

/// Applies a JSON config file on top of `cfg`. Throws ConfigError.
void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg);
void apply_config_text(const std::string& text, ExperimentConfig& cfg);

}  // namespace qprecision::cli
