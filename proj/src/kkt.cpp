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

#include <cmath>

#include "minfine/kernels.hpp"
#include "minfine/solve.hpp"

namespace minfine {

double OptimalityReport::worst() const {
    return std::max({worstPrimal, worstDual, worstComplementarity});
}

namespace {

constexpr double kActiveTol = 1e-6;

void raiseIfWorse(double value, const std::string& where, double& worst,
                  std::string& worstWhere) {
    if (value > worst) {
        worst = value;
        worstWhere = where;
    }
}

}  // namespace

// Verifies primal feasibility, reduced-cost signs against active bounds,
// and row complementary slackness directly from the problem data; no
// simplex internals are reused.
OptimalityReport check_optimality(const SparseProblem& problem,
                                  const Solution& solution) {
    problem.checkConsistent();
    int n = problem.numVars;
    int m = static_cast<int>(problem.rows.size());
    if (static_cast<int>(solution.primal.size()) != n) {
        throw Error("solution primal length does not match the problem");
    }
    if (static_cast<int>(solution.duals.size()) != m) {
        throw Error("solution lacks row duals");
    }
    const std::vector<double>& x = solution.primal;
    const std::vector<double>& y = solution.duals;
    OptimalityReport report;

    for (int j = 0; j < n; ++j) {
        double lo = problem.lowerBounds[j];
        double hi = problem.upperBounds[j];
        double viol = 0.0;
        if (is_finite(lo)) viol = std::max(viol, (lo - x[j]) / (1.0 + std::fabs(lo)));
        if (is_finite(hi)) viol = std::max(viol, (x[j] - hi) / (1.0 + std::fabs(hi)));
        raiseIfWorse(viol, "bound " + problem.columnName(j), report.worstPrimal,
                     report.worstPrimalWhere);
    }

    std::vector<double> activity(m, 0.0);
    kernels::row_activities_serial(problem, x.data(), activity.data());
    for (int i = 0; i < m; ++i) {
        const RowDef& row = problem.rows[i];
        double scale = 1.0 + std::fabs(row.rhs);
        double over = (activity[i] - row.rhs) / scale;
        double viol = 0.0;
        switch (row.sense) {
            case RowSense::lessEqual: viol = std::max(0.0, over); break;
            case RowSense::greaterEqual: viol = std::max(0.0, -over); break;
            case RowSense::equal: viol = std::fabs(over); break;
        }
        raiseIfWorse(viol, "row " + row.tag, report.worstPrimal,
                     report.worstPrimalWhere);

        // d(obj)/d(rhs) signs: <= rows price at most 0, >= rows at least 0.
        double signViol = 0.0;
        if (row.sense == RowSense::lessEqual) {
            signViol = std::max(0.0, y[i]) / (1.0 + std::fabs(y[i]));
        } else if (row.sense == RowSense::greaterEqual) {
            signViol = std::max(0.0, -y[i]) / (1.0 + std::fabs(y[i]));
        }
        raiseIfWorse(signViol, "row dual sign " + row.tag, report.worstDual,
                     report.worstDualWhere);

        if (row.sense != RowSense::equal) {
            double slack = std::fabs(activity[i] - row.rhs) / scale;
            double compl_ = std::min(std::fabs(y[i]), slack);
            raiseIfWorse(compl_, "row " + row.tag, report.worstComplementarity,
                         report.worstComplementarityWhere);
        }
    }

    // Reduced costs c - A^T y, checked against each variable's resting bound.
    std::vector<double> reduced = problem.objective;
    for (int i = 0; i < m; ++i) {
        for (const auto& [col, coeff] : problem.rows[i].entries) {
            reduced[col] -= y[i] * coeff;
        }
    }
    for (int j = 0; j < n; ++j) {
        double lo = problem.lowerBounds[j];
        double hi = problem.upperBounds[j];
        bool atLower = is_finite(lo) && x[j] - lo <= kActiveTol * (1.0 + std::fabs(lo));
        bool atUpper = is_finite(hi) && hi - x[j] <= kActiveTol * (1.0 + std::fabs(hi));
        double d = reduced[j];
        double scale = 1.0 + std::fabs(problem.objective[j]);
        double viol;
        if (atLower && atUpper) {
            viol = 0.0;  // fixed variable: any reduced cost is fine
        } else if (atLower) {
            viol = std::max(0.0, -d) / scale;
        } else if (atUpper) {
            viol = std::max(0.0, d) / scale;
        } else {
            viol = std::fabs(d) / scale;  // strictly between its bounds
        }
        raiseIfWorse(viol, "reduced cost " + problem.columnName(j),
                     report.worstDual, report.worstDualWhere);
    }
    return report;
}

}  // namespace minfine
