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

#include <algorithm>
#include <cmath>

#include "minfine/compile.hpp"
#include "minfine/kernels.hpp"

namespace minfine {

namespace {

constexpr double kFeasTol = 1e-7;

int operationalSteps(const EnergySystemModel& model,
                     const SparseProblem& problem) {
    if (problem.aggregation) {
        return problem.aggregation->numClusters *
               problem.aggregation->periodLength;
    }
    return model.time.numSteps;
}

double stepWeight(const SparseProblem& problem, int t) {
    if (!problem.aggregation) return 1.0;
    return problem.aggregation->weights[t / problem.aggregation->periodLength];
}

void checkPrimal(const SparseProblem& problem, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != problem.numVars) {
        throw Error("primal vector length " + std::to_string(x.size()) +
                    " != " + std::to_string(problem.numVars));
    }
    for (int j = 0; j < problem.numVars; ++j) {
        double lo = problem.lowerBounds[j];
        double hi = problem.upperBounds[j];
        if ((is_finite(lo) && x[j] < lo - kFeasTol * (1.0 + std::fabs(lo))) ||
            (is_finite(hi) && x[j] > hi + kFeasTol * (1.0 + std::fabs(hi)))) {
            throw Error("variable " + problem.columnName(j) + " = " +
                        format_full(x[j]) + " violates its bounds");
        }
    }
    std::vector<double> activity(problem.rows.size(), 0.0);
    kernels::row_activities_serial(problem, x.data(), activity.data());
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
        const RowDef& row = problem.rows[i];
        double tol = kFeasTol * (1.0 + std::fabs(row.rhs));
        double over = activity[i] - row.rhs;
        bool bad = (row.sense == RowSense::lessEqual && over > tol) ||
                   (row.sense == RowSense::greaterEqual && over < -tol) ||
                   (row.sense == RowSense::equal && std::fabs(over) > tol);
        if (bad) {
            throw Error("row " + row.tag + " violated by " + format_full(over));
        }
    }
}

}  // namespace

double evaluate_solution(const EnergySystemModel& model,
                         const SparseProblem& problem,
                         const std::vector<double>& primal) {
    (void)model;
    problem.checkConsistent();
    checkPrimal(problem, primal);
    double obj = problem.objectiveConstant;
    for (int j = 0; j < problem.numVars; ++j) {
        obj += problem.objective[j] * primal[j];
    }
    return obj;
}

std::map<std::pair<std::string, std::string>, double> balance_residuals(
    const EnergySystemModel& model, const SparseProblem& problem,
    const std::vector<double>& primal) {
    (void)model;
    if (static_cast<int>(primal.size()) != problem.numVars) {
        throw Error("primal vector length mismatch");
    }
    std::vector<double> activity(problem.rows.size(), 0.0);
    kernels::row_activities_serial(problem, primal.data(), activity.data());
    std::map<std::pair<std::string, std::string>, double> out;
    for (const auto& ref : problem.balanceRefs) {
        double residual =
            std::fabs(activity[ref.row] - problem.rows[ref.row].rhs);
        double& worst = out[{ref.region, ref.commodity}];
        worst = std::max(worst, residual);
    }
    return out;
}

namespace {

/// Typical series reconstructed from the original one via the medoids.
std::vector<double> typicalFromOriginal(const std::vector<double>& original,
                                        const AggregationInfo& agg) {
    std::vector<double> typical;
    typical.reserve(static_cast<std::size_t>(agg.numClusters) *
                    agg.periodLength);
    for (int medoid : agg.medoidIndices) {
        for (int tau = 0; tau < agg.periodLength; ++tau) {
            typical.push_back(
                original[static_cast<std::size_t>(medoid) * agg.periodLength +
                         tau]);
        }
    }
    return typical;
}

struct StateCollector {
    // component -> region -> timeIndex -> value
    std::map<std::string, std::map<std::string, std::map<int, double>>> intra;
    std::map<std::string, std::map<std::string, std::map<int, double>>> inter;
};

}  // namespace

ResultSet extract_results(const EnergySystemModel& model,
                          const SparseProblem& problem,
                          const Solution& solution) {
    if (solution.status != SolveStatus::optimal) {
        throw Error(std::string("results require an optimal solution, got ") +
                    to_string(solution.status));
    }
    if (problem.varTable.size() != static_cast<std::size_t>(problem.numVars)) {
        throw Error("problem lacks a variable table; was it compiled?");
    }
    int steps = operationalSteps(model, problem);
    ResultSet rs;
    rs.status = solution.status;
    rs.objectiveTAC = solution.objective;
    rs.stats = solution.stats;

    std::map<std::pair<std::string, std::string>, std::size_t> scheduleIndex;
    StateCollector states;
    auto scheduleSlot = [&](const std::string& comp, const std::string& where,
                            VarKind kind) -> std::vector<double>& {
        auto key = std::make_pair(comp, where + "\x1f" +
                                            std::string(var_kind_tag(kind)));
        auto it = scheduleIndex.find(key);
        if (it == scheduleIndex.end()) {
            scheduleIndex[key] = rs.schedules.size();
            rs.schedules.push_back(
                {comp, where, kind, std::vector<double>(steps, 0.0)});
            return rs.schedules.back().values;
        }
        return rs.schedules[it->second].values;
    };

    for (int j = 0; j < problem.numVars; ++j) {
        const VariableRef& ref = problem.varTable[j];
        double v = solution.primal[j];
        switch (ref.kind) {
            case VarKind::capacity:
                rs.capacities[ref.component][ref.where] = v;
                break;
            case VarKind::build:
                rs.buildDecisions[ref.component][ref.where] =
                    v > 0.5 ? 1 : 0;
                break;
            case VarKind::operation:
            case VarKind::charge:
            case VarKind::discharge:
            case VarKind::flow:
                scheduleSlot(ref.component, ref.where, ref.kind)[ref.timeIndex] =
                    v;
                break;
            case VarKind::socIntra:
                states.intra[ref.component][ref.where][ref.timeIndex] = v;
                break;
            case VarKind::socInter:
                states.inter[ref.component][ref.where][ref.timeIndex] = v;
                break;
            case VarKind::onOff:
                break;  // instrument variable, not reported
        }
    }

    // Fixed capacities and pinned schedules come from the model itself.
    for (const auto& comp : model.components) {
        if (const auto* ss = std::get_if<SourceSinkSpec>(&comp)) {
            if (!ss->capacity.hasCapacityVariable && ss->capacity.hasFix()) {
                for (const auto& [region, fix] : ss->capacity.capacityFix->values) {
                    double built = 1.0;
                    if (ss->capacity.hasBuildBinary) {
                        built = rs.buildDecisions[ss->name][region];
                    }
                    rs.capacities[ss->name][region] = fix * built;
                }
            }
            if (!ss->capacity.hasCapacityVariable && ss->operationRateFix) {
                for (const auto& [region, series] : *ss->operationRateFix) {
                    std::vector<double> values =
                        problem.aggregation
                            ? typicalFromOriginal(series, *problem.aggregation)
                            : series;
                    scheduleSlot(ss->name, region, VarKind::operation) =
                        std::move(values);
                }
            }
        } else if (const auto* st = std::get_if<StorageSpec>(&comp)) {
            if (!st->capacity.hasCapacityVariable && st->capacity.hasFix()) {
                for (const auto& [region, fix] : st->capacity.capacityFix->values) {
                    double built = st->capacity.hasBuildBinary
                                       ? rs.buildDecisions[st->name][region]
                                       : 1.0;
                    rs.capacities[st->name][region] = fix * built;
                }
            }
        } else if (const auto* cv = std::get_if<ConversionSpec>(&comp)) {
            if (!cv->capacity.hasCapacityVariable && cv->capacity.hasFix()) {
                for (const auto& [region, fix] : cv->capacity.capacityFix->values) {
                    double built = cv->capacity.hasBuildBinary
                                       ? rs.buildDecisions[cv->name][region]
                                       : 1.0;
                    rs.capacities[cv->name][region] = fix * built;
                }
            }
        } else if (const auto* tr = std::get_if<TransmissionSpec>(&comp)) {
            if (!tr->capacity.hasCapacityVariable && tr->capacity.hasFix()) {
                for (const auto& edge : tr->edges) {
                    double fix = tr->capacity.fix(edge.key());
                    double built = tr->capacity.hasBuildBinary
                                       ? rs.buildDecisions[tr->name][edge.key()]
                                       : 1.0;
                    rs.capacities[tr->name][edge.key()] = fix * built;
                }
            }
        }
    }

    // Storage state profiles over the original horizon.
    for (const auto& comp : model.components) {
        const auto* st = std::get_if<StorageSpec>(&comp);
        if (st == nullptr) continue;
        auto intraIt = states.intra.find(st->name);
        if (intraIt == states.intra.end()) continue;
        for (const auto& [region, intraVals] : intraIt->second) {
            std::vector<double>& out = rs.storageStates[st->name][region];
            if (!problem.aggregation) {
                out.resize(model.time.numSteps + 1, 0.0);
                for (const auto& [t, v] : intraVals) out[t] = v;
                continue;
            }
            const AggregationInfo& agg = *problem.aggregation;
            int P = agg.periodLength;
            int numPeriods = static_cast<int>(agg.orderingMap.size());
            out.assign(model.time.numSteps + 1, 0.0);
            const std::map<int, double>* interVals = nullptr;
            auto interComp = states.inter.find(st->name);
            if (interComp != states.inter.end()) {
                auto interRegion = interComp->second.find(region);
                if (interRegion != interComp->second.end()) {
                    interVals = &interRegion->second;
                }
            }
            for (int p = 0; p < numPeriods; ++p) {
                int j = agg.orderingMap[p];
                double base = interVals ? interVals->at(p) : 0.0;
                for (int tau = 0; tau < P; ++tau) {
                    double keep =
                        std::pow(1.0 - st->selfDischargePerHour,
                                 tau * model.time.hoursPerStep);
                    out[p * P + tau] =
                        base * keep + intraVals.at(j * (P + 1) + tau);
                }
            }
            if (interVals != nullptr) {
                out[model.time.numSteps] = interVals->at(numPeriods);
            } else {
                int lastCluster = agg.orderingMap[numPeriods - 1];
                out[model.time.numSteps] = intraVals.at(lastCluster * (P + 1) + P);
            }
        }
    }

    // Cost breakdown recomputed from model data and the mapped results.
    double omega = model.time.annualScale();
    for (const auto& comp : model.components) {
        const std::string& name = component_name(comp);
        const Economics& econ = std::visit(
            [](const auto& s) -> const Economics& { return s.economics; }, comp);
        double crf = econ.annuity();
        CostBreakdown& cb = rs.costBreakdown[name];
        bool hasBinary = std::visit(
            [](const auto& s) { return s.capacity.hasBuildBinary; }, comp);

        const auto* tr = std::get_if<TransmissionSpec>(&comp);
        auto capIt = rs.capacities.find(name);
        if (capIt != rs.capacities.end()) {
            for (const auto& [where, value] : capIt->second) {
                double investScale = 1.0;
                if (tr != nullptr) {
                    for (const auto& edge : tr->edges) {
                        if (edge.key() == where) investScale = edge.length;
                    }
                }
                cb.annualizedInvest +=
                    value * econ.investPerCapacity * investScale * crf;
                cb.fixedOpex += value * econ.opexPerCapacity;
            }
        }
        int instances = 1;
        if (tr != nullptr) {
            instances = static_cast<int>(tr->edges.size());
        } else {
            instances = static_cast<int>(std::visit(
                [&](const auto& s) -> std::size_t {
                    if constexpr (std::is_same_v<std::decay_t<decltype(s)>,
                                                 TransmissionSpec>) {
                        return s.edges.size();
                    } else {
                        std::size_t n = 0;
                        for (const auto& r : model.regions) {
                            if (std::find(s.regions.begin(), s.regions.end(),
                                          r) != s.regions.end()) {
                                ++n;
                            }
                        }
                        return n;
                    }
                },
                comp));
        }
        if (hasBinary) {
            auto bIt = rs.buildDecisions.find(name);
            if (bIt != rs.buildDecisions.end()) {
                for (const auto& [where, built] : bIt->second) {
                    (void)where;
                    cb.annualizedInvest += built * econ.investIfBuilt * crf;
                    cb.fixedOpex += built * econ.opexIfBuiltPerYear;
                }
            }
        } else {
            cb.annualizedInvest += instances * econ.investIfBuilt * crf;
            cb.fixedOpex += instances * econ.opexIfBuiltPerYear;
        }
    }
    for (const auto& sched : rs.schedules) {
        const ComponentSpec* comp = model.findComponent(sched.component);
        if (comp == nullptr) continue;
        const Economics& econ = std::visit(
            [](const auto& s) -> const Economics& { return s.economics; },
            *comp);
        double weighted = 0.0;
        for (int t = 0; t < steps && t < static_cast<int>(sched.values.size());
             ++t) {
            weighted += stepWeight(problem, t) * sched.values[t];
        }
        CostBreakdown& cb = rs.costBreakdown[sched.component];
        cb.variableOpex += omega * econ.opexPerOperation * weighted;
        if (sched.kind == VarKind::operation) {
            if (const auto* ss = std::get_if<SourceSinkSpec>(comp)) {
                cb.commodityCost += omega * ss->commodityCostPerUnit * weighted;
            }
        }
    }

    if (!problem.isMip() && !solution.duals.empty()) {
        rs.hasShadowPrices = true;
        for (const auto& ref : problem.balanceRefs) {
            auto& series = rs.shadowPrices[ref.region][ref.commodity];
            if (series.empty()) series.assign(steps, 0.0);
            series[ref.timeIndex] = solution.duals[ref.row];
        }
    }
    return rs;
}

}  // namespace minfine
