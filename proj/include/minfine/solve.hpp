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
#include <vector>

#include "minfine/problem.hpp"

namespace minfine {

enum class SolveStatus { optimal, infeasible, unbounded, iterationLimit, nodeLimit };

const char* to_string(SolveStatus status);

struct SolveStats {
    long iterations = 0;
    long nodes = 0;
    long refactorizations = 0;
    double wallTimeSeconds = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<double> primal;  // length numVars when a point exists
    double objective = 0.0;      // includes the problem's objectiveConstant
    std::vector<double> duals;   // per row, d(objective)/d(rhs); LP only
    SolveStats stats;
};

struct LpOptions {
    double tolPrimal = 1e-7;
    double tolDual = 1e-7;
    long maxIter = 100000;
};

struct MilpOptions {
    double gapAbs = 1e-6;
    double gapRel = 1e-6;
    long maxNodes = 100000;
    LpOptions lp;
};

/// Two-phase bounded-variable primal simplex. Integrality marks are
/// ignored (binaries are relaxed to their bounds).
Solution solve_lp(const SparseProblem& problem, const LpOptions& options = {});

/// Best-first branch-and-bound over the problem's binary variables.
/// Throws Error if an integral variable has bounds outside [0, 1].
Solution solve_milp(const SparseProblem& problem, const MilpOptions& options = {});

/// Independent KKT verification of an LP solution with duals.
struct OptimalityReport {
    double worstPrimal = 0.0;  // bound/row violation, scaled by 1+|rhs|
    double worstDual = 0.0;    // reduced-cost sign violation vs active bounds
    double worstComplementarity = 0.0;
    std::string worstPrimalWhere;
    std::string worstDualWhere;
    std::string worstComplementarityWhere;

    double worst() const;
    bool pass(double tol = 1e-6) const { return worst() <= tol; }
};

OptimalityReport check_optimality(const SparseProblem& problem,
                                  const Solution& solution);

}  // namespace minfine
