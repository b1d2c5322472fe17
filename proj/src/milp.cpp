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

#include <chrono>
#include <cmath>
#include <queue>
#include <vector>

#include "minfine/solve.hpp"

namespace minfine {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
    double bound = -kInf;  // parent LP value; lower bound on the subtree
    long id = 0;
    // Bound overrides accumulated along the branching path.
    std::vector<std::pair<int, double>> fixLower;
    std::vector<std::pair<int, double>> fixUpper;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

}  // namespace

Solution solve_milp(const SparseProblem& problem, const MilpOptions& options) {
    auto t0 = std::chrono::steady_clock::now();
    problem.checkConsistent();

    std::vector<int> binaries;
    for (int j = 0; j < problem.numVars; ++j) {
        if (!problem.integrality[j]) continue;
        if (problem.lowerBounds[j] < -kIntTol ||
            problem.upperBounds[j] > 1.0 + kIntTol) {
            throw Error("integral variable " + problem.columnName(j) +
                        " is not a binary; general integers are not supported");
        }
        binaries.push_back(j);
    }
    if (binaries.empty()) return solve_lp(problem, options.lp);

    SparseProblem work = problem;
    Solution best;
    best.status = SolveStatus::infeasible;
    bool haveIncumbent = false;
    double incumbentObj = kInf;
    SolveStats stats;

    auto pruneThreshold = [&]() {
        if (!haveIncumbent) return kInf;
        double gap = std::max(options.gapAbs,
                              options.gapRel * std::fabs(incumbentObj));
        return incumbentObj - gap;
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long nextId = 0;
    open.push(Node{-kInf, nextId++, {}, {}});
    SolveStatus finalStatus = SolveStatus::optimal;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (node.bound >= pruneThreshold()) break;  // best-first: all pruned
        if (stats.nodes >= options.maxNodes) {
            finalStatus = SolveStatus::nodeLimit;
            break;
        }
        ++stats.nodes;

        work.lowerBounds = problem.lowerBounds;
        work.upperBounds = problem.upperBounds;
        for (const auto& [j, v] : node.fixLower) work.lowerBounds[j] = v;
        for (const auto& [j, v] : node.fixUpper) work.upperBounds[j] = v;

        Solution relax = solve_lp(work, options.lp);
        stats.iterations += relax.stats.iterations;
        stats.refactorizations += relax.stats.refactorizations;
        if (relax.status == SolveStatus::unbounded) {
            Solution out;
            out.status = SolveStatus::unbounded;
            out.stats = stats;
            return out;
        }
        if (relax.status == SolveStatus::iterationLimit) {
            finalStatus = SolveStatus::iterationLimit;
            break;
        }
        if (relax.status != SolveStatus::optimal) continue;
        if (relax.objective >= pruneThreshold()) continue;

        int branchVar = -1;
        double bestFracScore = kInf;  // distance of the fraction from 1/2
        for (int j : binaries) {
            double v = relax.primal[j];
            double frac = v - std::floor(v);
            if (std::min(frac, 1.0 - frac) <= kIntTol) continue;
            double score = std::fabs(frac - 0.5);
            if (score < bestFracScore) {
                bestFracScore = score;
                branchVar = j;
            }
        }
        if (branchVar < 0) {
            if (!haveIncumbent || relax.objective < incumbentObj) {
                haveIncumbent = true;
                incumbentObj = relax.objective;
                best = relax;
                best.duals.clear();  // MILP solutions carry no duals
            }
            continue;
        }

        Node zero{relax.objective, nextId++, node.fixLower, node.fixUpper};
        zero.fixUpper.emplace_back(branchVar, 0.0);
        Node one{relax.objective, nextId++, node.fixLower, node.fixUpper};
        one.fixLower.emplace_back(branchVar, 1.0);
        open.push(std::move(zero));  // the 0-branch explores first on ties
        open.push(std::move(one));
    }

    Solution out;
    if (haveIncumbent) {
        out = best;
        out.status = finalStatus;
    } else {
        out.status = finalStatus == SolveStatus::optimal ? SolveStatus::infeasible
                                                         : finalStatus;
    }
    out.stats = stats;
    out.stats.wallTimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
}

}  // namespace minfine
