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

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "minfine/model.hpp"
#include "minfine/problem.hpp"
#include "minfine/solve.hpp"
#include "minfine/tsa.hpp"

namespace minfine {

/// How storage appears in an aggregated problem: chained inter-period
/// states (seasonal storage survives), or naive per-typical-period cycles.
enum class StorageAggregation { interPeriodLinkage, perPeriodCyclic };

/// Compiles a validated model at full temporal resolution.
SparseProblem build_problem(const EnergySystemModel& model);

/// Compiles on typical steps with weighted operating costs; storage gets
/// intra-period states plus the chosen aggregation treatment.
SparseProblem build_linked_problem(
    const EnergySystemModel& model, const TypicalPeriodSet& tps,
    StorageAggregation storage = StorageAggregation::interPeriodLinkage);

/// Recomputes the objective from the compiled coefficients, independent
/// of any solver report. Throws Error if the point violates bounds or
/// rows beyond 1e-7 (scaled).
double evaluate_solution(const EnergySystemModel& model,
                         const SparseProblem& problem,
                         const std::vector<double>& primal);

/// Max |residual| of the commodity balance per (region, commodity).
std::map<std::pair<std::string, std::string>, double> balance_residuals(
    const EnergySystemModel& model, const SparseProblem& problem,
    const std::vector<double>& primal);

struct CostBreakdown {
    double annualizedInvest = 0.0;
    double fixedOpex = 0.0;
    double variableOpex = 0.0;
    double commodityCost = 0.0;

    double total() const {
        return annualizedInvest + fixedOpex + variableOpex + commodityCost;
    }
};

struct ScheduleSeries {
    std::string component;
    std::string where;  // region or directed edge "A~B"
    VarKind kind = VarKind::operation;
    std::vector<double> values;  // per operational step
};

struct ResultSet {
    SolveStatus status = SolveStatus::infeasible;
    double objectiveTAC = 0.0;
    // component -> region/edge -> installed capacity (fixed ones included)
    std::map<std::string, std::map<std::string, double>> capacities;
    std::map<std::string, std::map<std::string, int>> buildDecisions;
    std::vector<ScheduleSeries> schedules;  // deterministic order
    // component -> region -> soc at step boundaries t = 0..N_t (for
    // aggregated solves reconstructed from inter+intra states)
    std::map<std::string, std::map<std::string, std::vector<double>>> storageStates;
    std::map<std::string, CostBreakdown> costBreakdown;
    bool hasShadowPrices = false;
    // region -> commodity -> price per operational step
    std::map<std::string, std::map<std::string, std::vector<double>>> shadowPrices;
    SolveStats stats;
};

/// Maps an optimal solution back onto the model via the variable table.
ResultSet extract_results(const EnergySystemModel& model,
                          const SparseProblem& problem,
                          const Solution& solution);

}  // namespace minfine
