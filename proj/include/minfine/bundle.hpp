// Copyright 2026 The minfine Authors
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

#include <string>

#include "minfine/compile.hpp"

namespace minfine {

inline constexpr const char* kToolVersion = "0.1.0";

/// Writes summary.json plus schedules.csv, prices.csv (LP) and
/// aggregation.json (when aggregated) into dir. results may be null for
/// non-optimal runs; then only the summary is written. All writes are
/// atomic (temp file + rename).
void write_results_bundle(const std::string& dir,
                          const EnergySystemModel& model,
                          const SparseProblem& problem,
                          const Solution& solution, const ResultSet* results,
                          const TypicalPeriodSet* tps,
                          const std::string& inputHash);

/// Fixed-width text report over a written bundle: capacities, cost
/// breakdown, and the top shadow-price hours per commodity.
std::string render_report(const std::string& bundleDir);

}  // namespace minfine
