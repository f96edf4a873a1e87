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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qprecision/experiments.hpp"

namespace qprecision {

/// Shortest text that round-trips, "%.17g".
std::string format_double(double x);

/// Cell text for an optional value: the number, or `flag` when absent or non-finite.
std::string format_cell(std::optional<double> x, const char* flag = "vacuous");

/// Columns of one result row, in output order.
const std::vector<std::string>& result_row_columns();

void write_scatter_csv(std::ostream& os, const ScatterResult& r);
std::string scatter_summary_json(const ScatterResult& r);
void write_errors(std::ostream& os, const std::vector<ModelFailure>& failures);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
std::string sweep_summary_json(const SweepResult& r);

std::string markov_report_json(const MarkovSuiteResult& r, const ExperimentConfig& cfg);

void write_single_csv(std::ostream& os, const SingleResult& r);
std::string single_summary_json(const SingleResult& r);

/// One line per support trajectory: n, nu_1..nu_N, mu_1..mu_N, m, p_fwd, p_bwd_same,
/// p_fwd_reversed, then one column per observable (the first is headed "phi").
void write_trajectory_csv(std::ostream& os, const Enumeration& e, const std::vector<Observable>& observables);

/// gnuplot script plotting `csv_name` for the given mode.
std::string gnuplot_script(const std::string& mode, const std::string& csv_name);

}  // namespace qprecision
