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

#include "minfine/compile.hpp"

#include <algorithm>
#include <cmath>

#include "minfine/kernels.hpp"

namespace minfine {

namespace {

std::string tstep(int t) { return "__t" + std::to_string(t); }

/// Where a component's capacity lives: nowhere, in a column, as a fixed
/// constant, or as fixed-size-if-built via the build binary.
struct CapRef {
    enum class Kind { none, variable, fixed, fixedTimesBinary };
    Kind kind = Kind::none;
    int column = -1;     // capacity column or build binary
    double value = 0.0;  // fixed size

    bool boundsOps() const { return kind == Kind::none || kind == Kind::fixed; }
};

class Emitter {
  public:
    Emitter(const EnergySystemModel& model, const TypicalPeriodSet* tps,
            StorageAggregation storageMode)
        : model_(model), tps_(tps), storageMode_(storageMode) {
        dt_ = model.time.hoursPerStep;
        omega_ = model.time.annualScale();
        if (tps_ != nullptr) {
            check_aggregation(model, *tps_);
            periodLength_ = tps_->periodLength;
            numPeriods_ = tps_->numPeriods;
            steps_ = tps_->numClusters * tps_->periodLength;
        } else {
            steps_ = model.time.numSteps;
        }
        numCommodities_ = static_cast<int>(model.commodities.size());
        balances_.resize(static_cast<std::size_t>(model.regions.size()) *
                         numCommodities_ * steps_);
    }

    SparseProblem run() {
        auto diags = validate_model(model_);
        if (!diags.empty()) {
            throw Error("model does not validate: " + diags.front().component +
                        ": " + diags.front().message);
        }
        if (model_.components.empty()) {
            throw Error("model has no components");
        }
        problem_.name = sanitize_label(model_.name);
        if (tps_ != nullptr) {
            problem_.aggregation = AggregationInfo{
                tps_->periodLength, tps_->numClusters, tps_->weights,
                tps_->orderingMap, tps_->medoidIndices};
        }
        for (const auto& comp : model_.components) {
            std::visit([&](const auto& spec) { emit(spec); }, comp);
        }
        emitBalances();
        emitAnnualLimits();
        problem_.checkConsistent();
        return std::move(problem_);
    }

  private:
    // ---- shared helpers -------------------------------------------------

    double stepWeight(int t) const {
        return tps_ == nullptr ? 1.0
                               : static_cast<double>(
                                     tps_->weights[t / periodLength_]);
    }

    int regionIndex(const std::string& region) const {
        for (std::size_t i = 0; i < model_.regions.size(); ++i) {
            if (model_.regions[i] == region) return static_cast<int>(i);
        }
        throw Error("unknown region " + region);
    }

    int commodityIndex(const std::string& commodity) const {
        for (std::size_t i = 0; i < model_.commodities.size(); ++i) {
            if (model_.commodities[i].label == commodity) {
                return static_cast<int>(i);
            }
        }
        throw Error("unknown commodity " + commodity);
    }

    struct Balance {
        std::vector<std::pair<int, double>> vars;
        double constant = 0.0;
    };

    Balance& balance(int region, int commodity, int t) {
        return balances_[(static_cast<std::size_t>(region) * numCommodities_ +
                          commodity) *
                             steps_ +
                         t];
    }

    /// Regions of the model, in declaration order, that the component
    /// occupies.
    std::vector<std::string> occupiedRegions(
        const std::vector<std::string>& compRegions) const {
        std::vector<std::string> out;
        for (const auto& r : model_.regions) {
            if (std::find(compRegions.begin(), compRegions.end(), r) !=
                compRegions.end()) {
                out.push_back(r);
            }
        }
        return out;
    }

    /// Effective operational series: the model's own at full resolution,
    /// the medoid (typical) series under aggregation.
    const std::vector<double>* seriesFor(const std::string& component,
                                         const std::string& region,
                                         const std::string& attribute,
                                         const PerRegionSeries* spec) const {
        if (spec == nullptr) return nullptr;
        auto it = spec->find(region);
        if (it == spec->end()) return nullptr;
        if (tps_ == nullptr) return &it->second;
        return &tps_->typicalSeries.at(series_key(component, region, attribute));
    }

    /// Emits the capacity/build structure of one (component, region/edge)
    /// instance. perUnitCost and ifBuiltCost are annualized.
    CapRef makeCapacity(const std::string& name, const std::string& where,
                        const CapacityPolicy& cap, double perUnitCost,
                        double ifBuiltCost) {
        CapRef ref;
        int buildCol = -1;
        if (cap.hasBuildBinary) {
            double cost = ifBuiltCost;
            if (!cap.hasCapacityVariable && cap.hasFix()) {
                cost += cap.fix(where) * perUnitCost;
            }
            buildCol = problem_.addVariable({VarKind::build, name, where, -1},
                                            0.0, 1.0, cost, /*integral=*/true);
        } else if (ifBuiltCost != 0.0) {
            problem_.objectiveConstant += ifBuiltCost;  // always built
        }
        if (cap.hasCapacityVariable) {
            double lo = cap.hasBuildBinary ? 0.0 : cap.capacityMin.get(where);
            double hi = cap.capacityMax.get(where);
            if (cap.hasFix()) lo = hi = cap.fix(where);
            int col = problem_.addVariable({VarKind::capacity, name, where, -1},
                                           lo, hi, perUnitCost);
            ref = {CapRef::Kind::variable, col, 0.0};
            if (buildCol >= 0) {
                double bigM = cap.hasFix() ? cap.fix(where)
                                           : cap.capacityMax.get(where);
                problem_.addRow({{{col, 1.0}, {buildCol, -bigM}},
                                 RowSense::lessEqual,
                                 0.0,
                                 "bldub__" + name + "__" + where});
                double minBuilt = std::max(cap.minCapacityIfBuilt.get(where),
                                           cap.capacityMin.get(where));
                if (minBuilt > 0.0) {
                    problem_.addRow({{{col, 1.0}, {buildCol, -minBuilt}},
                                     RowSense::greaterEqual,
                                     0.0,
                                     "bldlb__" + name + "__" + where});
                }
            }
        } else if (cap.hasFix()) {
            double fix = cap.fix(where);
            if (buildCol >= 0) {
                ref = {CapRef::Kind::fixedTimesBinary, buildCol, fix};
            } else {
                ref = {CapRef::Kind::fixed, -1, fix};
                problem_.objectiveConstant += fix * perUnitCost;
            }
        }
        return ref;
    }

    /// Row "var <= factor * capacity" for non-constant capacities.
    void capLimitRow(const std::string& tag, int varCol, const CapRef& cap,
                     double factor) {
        switch (cap.kind) {
            case CapRef::Kind::variable:
                problem_.addRow({{{varCol, 1.0}, {cap.column, -factor}},
                                 RowSense::lessEqual,
                                 0.0,
                                 tag});
                break;
            case CapRef::Kind::fixedTimesBinary:
                problem_.addRow(
                    {{{varCol, 1.0}, {cap.column, -factor * cap.value}},
                     RowSense::lessEqual,
                     0.0,
                     tag});
                break;
            default:
                break;  // constant capacities become plain variable bounds
        }
    }

    void recordOperation(const std::string& name, int col, double weight) {
        opColumns_[name].emplace_back(col, weight);
    }

    // ---- archetypes ------------------------------------------------------

    void emit(const SourceSinkSpec& s) {
        double crf = s.economics.annuity();
        double perUnitCost =
            s.economics.investPerCapacity * crf + s.economics.opexPerCapacity;
        double ifBuiltCost =
            s.economics.investIfBuilt * crf + s.economics.opexIfBuiltPerYear;
        double opUnitCost =
            s.economics.opexPerOperation + s.commodityCostPerUnit;
        double sign = s.kind == FlowKind::source ? 1.0 : -1.0;
        int commodity = commodityIndex(s.commodity);

        for (const auto& region : occupiedRegions(s.regions)) {
            int r = regionIndex(region);
            CapRef cap = makeCapacity(s.name, region, s.capacity, perUnitCost,
                                      ifBuiltCost);
            const std::vector<double>* fix =
                seriesFor(s.name, region, "operationRateFix",
                          s.operationRateFix ? &*s.operationRateFix : nullptr);
            const std::vector<double>* rate =
                seriesFor(s.name, region, "operationRateMax",
                          s.operationRateMax ? &*s.operationRateMax : nullptr);

            if (fix != nullptr && !s.capacity.hasCapacityVariable) {
                // Absolute fixed series: no columns, constants only.
                for (int t = 0; t < steps_; ++t) {
                    double v = (*fix)[t];
                    balance(r, commodity, t).constant += sign * v;
                    problem_.objectiveConstant +=
                        omega_ * stepWeight(t) * v * opUnitCost;
                }
                opConstAnnual_[s.name] += weightedSum(*fix);
                continue;
            }
            for (int t = 0; t < steps_; ++t) {
                double w = stepWeight(t);
                double upper = kInf;
                if (fix == nullptr && cap.kind == CapRef::Kind::fixed) {
                    double alpha = rate != nullptr ? (*rate)[t] : 1.0;
                    upper = cap.value * alpha * dt_;
                }
                int col = problem_.addVariable({VarKind::operation, s.name,
                                                region, t},
                                               0.0, upper,
                                               omega_ * w * opUnitCost);
                if (fix != nullptr) {
                    // Relative fixed series pins operation to capacity.
                    switch (cap.kind) {
                        case CapRef::Kind::variable:
                            problem_.addRow(
                                {{{col, 1.0}, {cap.column, -(*fix)[t] * dt_}},
                                 RowSense::equal,
                                 0.0,
                                 "oppin__" + s.name + "__" + region + tstep(t)});
                            break;
                        case CapRef::Kind::fixedTimesBinary:
                            problem_.addRow(
                                {{{col, 1.0},
                                  {cap.column, -cap.value * (*fix)[t] * dt_}},
                                 RowSense::equal,
                                 0.0,
                                 "oppin__" + s.name + "__" + region + tstep(t)});
                            break;
                        default:
                            throw Error(s.name +
                                        ": relative operationRateFix needs a "
                                        "capacity variable");
                    }
                } else if (!cap.boundsOps()) {
                    double alpha = rate != nullptr ? (*rate)[t] : 1.0;
                    capLimitRow("opmax__" + s.name + "__" + region + tstep(t),
                                col, cap, alpha * dt_);
                }
                balance(r, commodity, t).vars.emplace_back(col, sign);
                recordOperation(s.name, col, w);
            }
        }
    }

    void emit(const ConversionSpec& c) {
        double crf = c.economics.annuity();
        double perUnitCost =
            c.economics.investPerCapacity * crf + c.economics.opexPerCapacity;
        double ifBuiltCost =
            c.economics.investIfBuilt * crf + c.economics.opexIfBuiltPerYear;

        for (const auto& region : occupiedRegions(c.regions)) {
            int r = regionIndex(region);
            CapRef cap = makeCapacity(c.name, region, c.capacity, perUnitCost,
                                      ifBuiltCost);
            std::vector<int> ops(steps_);
            for (int t = 0; t < steps_; ++t) {
                double w = stepWeight(t);
                double upper =
                    cap.kind == CapRef::Kind::fixed ? cap.value * dt_ : kInf;
                int col = problem_.addVariable(
                    {VarKind::operation, c.name, region, t}, 0.0, upper,
                    omega_ * w * c.economics.opexPerOperation);
                ops[t] = col;
                if (!cap.boundsOps()) {
                    capLimitRow("opmax__" + c.name + "__" + region + tstep(t),
                                col, cap, dt_);
                }
                for (const auto& [commodity, gamma] : c.conversionFactors) {
                    balance(r, commodityIndex(commodity), t)
                        .vars.emplace_back(col, gamma);
                }
                recordOperation(c.name, col, w);
            }
            emitRamps(c, region, cap, ops);
            if (c.partLoadMin) emitPartLoad(c, region, ops);
        }
    }

    void emitRamps(const ConversionSpec& c, const std::string& region,
                   const CapRef& cap, const std::vector<int>& ops) {
        if (!c.rampUpMax && !c.rampDownMax) return;
        for (int t = 1; t < steps_; ++t) {
            // Under aggregation, ramps restart at each typical period.
            if (tps_ != nullptr && t % periodLength_ == 0) continue;
            if (c.rampUpMax) {
                rampRow("rampup__" + c.name + "__" + region + tstep(t), ops[t],
                        ops[t - 1], cap, *c.rampUpMax);
            }
            if (c.rampDownMax) {
                rampRow("rampdn__" + c.name + "__" + region + tstep(t),
                        ops[t - 1], ops[t], cap, *c.rampDownMax);
            }
        }
    }

    void rampRow(const std::string& tag, int hiCol, int loCol,
                 const CapRef& cap, double limit) {
        RowDef row;
        row.entries = {{hiCol, 1.0}, {loCol, -1.0}};
        row.sense = RowSense::lessEqual;
        row.rhs = 0.0;
        row.tag = tag;
        switch (cap.kind) {
            case CapRef::Kind::variable:
                row.entries.emplace_back(cap.column, -limit * dt_);
                break;
            case CapRef::Kind::fixedTimesBinary:
                row.entries.emplace_back(cap.column, -limit * dt_ * cap.value);
                break;
            case CapRef::Kind::fixed:
                row.rhs = limit * dt_ * cap.value;
                break;
            case CapRef::Kind::none:
                return;  // validation requires a capacity for ramps
        }
        problem_.addRow(std::move(row));
    }

    void emitPartLoad(const ConversionSpec& c, const std::string& region,
                      const std::vector<int>& ops) {
        double size = c.capacity.fix(region);
        for (int t = 0; t < steps_; ++t) {
            int on = problem_.addVariable({VarKind::onOff, c.name, region, t},
                                          0.0, 1.0, 0.0, /*integral=*/true);
            problem_.addRow({{{ops[t], 1.0}, {on, -size * dt_}},
                             RowSense::lessEqual,
                             0.0,
                             "plub__" + c.name + "__" + region + tstep(t)});
            problem_.addRow(
                {{{ops[t], 1.0}, {on, -*c.partLoadMin * size * dt_}},
                 RowSense::greaterEqual,
                 0.0,
                 "pllb__" + c.name + "__" + region + tstep(t)});
        }
    }

    void emit(const StorageSpec& s) {
        double crf = s.economics.annuity();
        double perUnitCost =
            s.economics.investPerCapacity * crf + s.economics.opexPerCapacity;
        double ifBuiltCost =
            s.economics.investIfBuilt * crf + s.economics.opexIfBuiltPerYear;
        int commodity = commodityIndex(s.commodity);
        double keepPerStep = std::pow(1.0 - s.selfDischargePerHour, dt_);

        for (const auto& region : occupiedRegions(s.regions)) {
            int r = regionIndex(region);
            CapRef cap = makeCapacity(s.name, region, s.capacity, perUnitCost,
                                      ifBuiltCost);
            std::vector<int> ch(steps_), dis(steps_);
            for (int t = 0; t < steps_; ++t) {
                double w = stepWeight(t);
                double upper = cap.kind == CapRef::Kind::fixed
                                   ? s.chargeRateMax * cap.value * dt_
                                   : kInf;
                ch[t] = problem_.addVariable(
                    {VarKind::charge, s.name, region, t}, 0.0, upper,
                    omega_ * w * s.economics.opexPerOperation);
            }
            for (int t = 0; t < steps_; ++t) {
                double w = stepWeight(t);
                double upper = cap.kind == CapRef::Kind::fixed
                                   ? s.dischargeRateMax * cap.value * dt_
                                   : kInf;
                dis[t] = problem_.addVariable(
                    {VarKind::discharge, s.name, region, t}, 0.0, upper,
                    omega_ * w * s.economics.opexPerOperation);
            }
            for (int t = 0; t < steps_; ++t) {
                capLimitRow("chub__" + s.name + "__" + region + tstep(t), ch[t],
                            cap, s.chargeRateMax * dt_);
                capLimitRow("disub__" + s.name + "__" + region + tstep(t),
                            dis[t], cap, s.dischargeRateMax * dt_);
                balance(r, commodity, t).vars.emplace_back(dis[t], 1.0);
                balance(r, commodity, t).vars.emplace_back(ch[t], -1.0);
            }
            if (tps_ == nullptr) {
                emitPlainStorageStates(s, region, cap, ch, dis, keepPerStep,
                                       model_.time.numSteps);
            } else if (storageMode_ == StorageAggregation::perPeriodCyclic) {
                emitPerPeriodStorageStates(s, region, cap, ch, dis, keepPerStep);
            } else {
                emitLinkedStorageStates(s, region, cap, ch, dis, keepPerStep);
            }
        }
    }

    struct SocBounds {
        double lower = 0.0;
        double upper = kInf;
        bool needUpperRow = false;
        bool needLowerRow = false;
    };

    SocBounds plainSocBounds(const StorageSpec& s, const CapRef& cap) const {
        SocBounds b;
        switch (cap.kind) {
            case CapRef::Kind::fixed:
                b.lower = s.socMinFraction * cap.value;
                b.upper = cap.value;
                break;
            case CapRef::Kind::variable:
            case CapRef::Kind::fixedTimesBinary:
                b.needUpperRow = true;
                b.needLowerRow = s.socMinFraction > 0.0;
                break;
            case CapRef::Kind::none:
                break;  // unbounded store
        }
        return b;
    }

    /// soc bound row "soc <=/>= fraction * capacity" for variable-ish caps.
    void socCapRow(const std::string& tag, int socCol, const CapRef& cap,
                   double fraction, RowSense sense) {
        double scale = cap.kind == CapRef::Kind::fixedTimesBinary
                           ? fraction * cap.value
                           : fraction;
        problem_.addRow({{{socCol, 1.0}, {cap.column, -scale}}, sense, 0.0, tag});
    }

    void emitPlainStorageStates(const StorageSpec& s, const std::string& region,
                                const CapRef& cap, const std::vector<int>& ch,
                                const std::vector<int>& dis, double keepPerStep,
                                int horizon) {
        SocBounds b = plainSocBounds(s, cap);
        std::vector<int> soc(horizon + 1);
        for (int t = 0; t <= horizon; ++t) {
            soc[t] = problem_.addVariable({VarKind::socIntra, s.name, region, t},
                                          b.lower, b.upper, 0.0);
        }
        for (int t = 0; t <= horizon; ++t) {
            if (b.needUpperRow) {
                socCapRow("socub__" + s.name + "__" + region + tstep(t), soc[t],
                          cap, 1.0, RowSense::lessEqual);
            }
            if (b.needLowerRow) {
                socCapRow("soclb__" + s.name + "__" + region + tstep(t), soc[t],
                          cap, s.socMinFraction, RowSense::greaterEqual);
            }
        }
        for (int t = 0; t < horizon; ++t) {
            problem_.addRow({{{soc[t + 1], 1.0},
                              {soc[t], -keepPerStep},
                              {ch[t], -s.chargeEfficiency},
                              {dis[t], 1.0 / s.dischargeEfficiency}},
                             RowSense::equal,
                             0.0,
                             "socev__" + s.name + "__" + region + tstep(t)});
        }
        if (s.cyclic) {
            problem_.addRow({{{soc[0], 1.0}, {soc[horizon], -1.0}},
                             RowSense::equal,
                             0.0,
                             "soccyc__" + s.name + "__" + region});
        }
    }

    void emitPerPeriodStorageStates(const StorageSpec& s,
                                    const std::string& region,
                                    const CapRef& cap,
                                    const std::vector<int>& ch,
                                    const std::vector<int>& dis,
                                    double keepPerStep) {
        SocBounds b = plainSocBounds(s, cap);
        int P = periodLength_;
        for (int j = 0; j < tps_->numClusters; ++j) {
            std::vector<int> soc(P + 1);
            for (int tau = 0; tau <= P; ++tau) {
                soc[tau] = problem_.addVariable(
                    {VarKind::socIntra, s.name, region, j * (P + 1) + tau},
                    b.lower, b.upper, 0.0);
            }
            std::string suffix = "__" + s.name + "__" + region + "__j" +
                                 std::to_string(j);
            for (int tau = 0; tau <= P; ++tau) {
                if (b.needUpperRow) {
                    socCapRow("socub" + suffix + "__s" + std::to_string(tau),
                              soc[tau], cap, 1.0, RowSense::lessEqual);
                }
                if (b.needLowerRow) {
                    socCapRow("soclb" + suffix + "__s" + std::to_string(tau),
                              soc[tau], cap, s.socMinFraction,
                              RowSense::greaterEqual);
                }
            }
            for (int tau = 0; tau < P; ++tau) {
                int t = j * P + tau;
                problem_.addRow({{{soc[tau + 1], 1.0},
                                  {soc[tau], -keepPerStep},
                                  {ch[t], -s.chargeEfficiency},
                                  {dis[t], 1.0 / s.dischargeEfficiency}},
                                 RowSense::equal,
                                 0.0,
                                 "socev" + suffix + "__s" + std::to_string(tau)});
            }
            problem_.addRow({{{soc[0], 1.0}, {soc[P], -1.0}},
                             RowSense::equal,
                             0.0,
                             "soccyc" + suffix});
        }
    }

    void emitLinkedStorageStates(const StorageSpec& s, const std::string& region,
                                 const CapRef& cap, const std::vector<int>& ch,
                                 const std::vector<int>& dis,
                                 double keepPerStep) {
        int P = periodLength_;
        int k = tps_->numClusters;
        int numPeriods = numPeriods_;
        // Intra-period states are anchored at zero so the inter-period
        // chain absorbs all offsets; they may go negative.
        std::vector<std::vector<int>> intra(k, std::vector<int>(P + 1));
        for (int j = 0; j < k; ++j) {
            for (int tau = 0; tau <= P; ++tau) {
                bool anchor = tau == 0;
                intra[j][tau] = problem_.addVariable(
                    {VarKind::socIntra, s.name, region, j * (P + 1) + tau},
                    anchor ? 0.0 : -kInf, anchor ? 0.0 : kInf, 0.0);
            }
        }
        std::vector<int> inter(numPeriods + 1);
        for (int p = 0; p <= numPeriods; ++p) {
            inter[p] = problem_.addVariable(
                {VarKind::socInter, s.name, region, p}, -kInf, kInf, 0.0);
        }
        std::string base = "__" + s.name + "__" + region;
        for (int j = 0; j < k; ++j) {
            for (int tau = 0; tau < P; ++tau) {
                int t = j * P + tau;
                problem_.addRow(
                    {{{intra[j][tau + 1], 1.0},
                      {intra[j][tau], -keepPerStep},
                      {ch[t], -s.chargeEfficiency},
                      {dis[t], 1.0 / s.dischargeEfficiency}},
                     RowSense::equal,
                     0.0,
                     "socev" + base + "__j" + std::to_string(j) + "__s" +
                         std::to_string(tau)});
            }
        }
        double keepPerPeriod = std::pow(1.0 - s.selfDischargePerHour, P * dt_);
        for (int p = 0; p < numPeriods; ++p) {
            int j = tps_->orderingMap[p];
            problem_.addRow({{{inter[p + 1], 1.0},
                              {inter[p], -keepPerPeriod},
                              {intra[j][P], -1.0}},
                             RowSense::equal,
                             0.0,
                             "iscev" + base + "__p" + std::to_string(p)});
        }
        if (s.cyclic) {
            problem_.addRow({{{inter[0], 1.0}, {inter[numPeriods], -1.0}},
                             RowSense::equal,
                             0.0,
                             "isccyc" + base});
        }
        // Combined bounds cover every original period at every offset.
        for (int p = 0; p < numPeriods; ++p) {
            int j = tps_->orderingMap[p];
            for (int tau = 0; tau <= P; ++tau) {
                double keep = std::pow(1.0 - s.selfDischargePerHour, tau * dt_);
                std::string at = base + "__p" + std::to_string(p) + "__s" +
                                 std::to_string(tau);
                RowDef upper;
                upper.entries = {{inter[p], keep}, {intra[j][tau], 1.0}};
                upper.sense = RowSense::lessEqual;
                upper.tag = "socbU" + at;
                RowDef lower;
                lower.entries = {{inter[p], keep}, {intra[j][tau], 1.0}};
                lower.sense = RowSense::greaterEqual;
                lower.tag = "socbL" + at;
                switch (cap.kind) {
                    case CapRef::Kind::variable:
                        upper.entries.emplace_back(cap.column, -1.0);
                        lower.entries.emplace_back(cap.column, -s.socMinFraction);
                        break;
                    case CapRef::Kind::fixedTimesBinary:
                        upper.entries.emplace_back(cap.column, -cap.value);
                        lower.entries.emplace_back(
                            cap.column, -s.socMinFraction * cap.value);
                        break;
                    case CapRef::Kind::fixed:
                        upper.rhs = cap.value;
                        lower.rhs = s.socMinFraction * cap.value;
                        break;
                    case CapRef::Kind::none:
                        upper.rhs = kInf;  // no cap: skip the upper row
                        break;
                }
                if (is_finite(upper.rhs)) problem_.addRow(std::move(upper));
                // The lower row stays even at socMin 0: anchored intra
                // states may dip below zero on their own.
                problem_.addRow(std::move(lower));
            }
        }
    }

    void emit(const TransmissionSpec& t) {
        double crf = t.economics.annuity();
        double ifBuiltCost =
            t.economics.investIfBuilt * crf + t.economics.opexIfBuiltPerYear;
        int commodity = commodityIndex(t.commodity);
        for (const auto& edge : t.edges) {
            // Only the invest share scales with line length.
            double perUnitCost = t.economics.investPerCapacity * edge.length * crf +
                                 t.economics.opexPerCapacity;
            CapRef cap = makeCapacity(t.name, edge.key(), t.capacity,
                                      perUnitCost, ifBuiltCost);
            double loss = std::min(t.lossPerLength * edge.length, 1.0);
            int ra = regionIndex(edge.regionA);
            int rb = regionIndex(edge.regionB);
            emitFlowDirection(t, edge.regionA + "~" + edge.regionB, cap, loss,
                              ra, rb, commodity);
            emitFlowDirection(t, edge.regionB + "~" + edge.regionA, cap, loss,
                              rb, ra, commodity);
        }
    }

    void emitFlowDirection(const TransmissionSpec& t, const std::string& where,
                           const CapRef& cap, double loss, int fromRegion,
                           int toRegion, int commodity) {
        for (int s = 0; s < steps_; ++s) {
            double w = stepWeight(s);
            double upper =
                cap.kind == CapRef::Kind::fixed ? cap.value * dt_ : kInf;
            int col = problem_.addVariable({VarKind::flow, t.name, where, s},
                                           0.0, upper,
                                           omega_ * w *
                                               t.economics.opexPerOperation);
            if (!cap.boundsOps()) {
                capLimitRow("flwub__" + t.name + "__" + where + tstep(s), col,
                            cap, dt_);
            }
            balance(fromRegion, commodity, s).vars.emplace_back(col, -1.0);
            balance(toRegion, commodity, s).vars.emplace_back(col, 1.0 - loss);
        }
    }

    // ---- closing sections ------------------------------------------------

    void emitBalances() {
        bool any = false;
        for (std::size_t r = 0; r < model_.regions.size(); ++r) {
            for (int c = 0; c < numCommodities_; ++c) {
                for (int t = 0; t < steps_; ++t) {
                    Balance& b = balance(static_cast<int>(r), c, t);
                    if (b.vars.empty()) {
                        if (std::fabs(b.constant) > 1e-9) {
                            throw Error(
                                "balance for region " + model_.regions[r] +
                                ", commodity " + model_.commodities[c].label +
                                " at step " + std::to_string(t) +
                                " has a fixed imbalance and no variables");
                        }
                        continue;
                    }
                    RowDef row;
                    row.entries = b.vars;
                    row.sense = RowSense::equal;
                    row.rhs = -b.constant;
                    row.tag = "bal__" + model_.regions[r] + "__" +
                              model_.commodities[c].label + tstep(t);
                    int rowId = problem_.addRow(std::move(row));
                    problem_.balanceRefs.push_back(
                        {rowId, model_.regions[r], model_.commodities[c].label,
                         t});
                    any = true;
                }
            }
        }
        if (!any) {
            throw Error("model compiles to no balance rows");
        }
    }

    void emitAnnualLimits() {
        for (const auto& lim : model_.annualLimits) {
            RowDef row;
            row.sense = RowSense::lessEqual;
            row.rhs = lim.limit;
            row.tag = "lim__" + lim.name;
            for (const auto& [member, sign] : lim.members) {
                auto it = opColumns_.find(member);
                if (it != opColumns_.end()) {
                    for (const auto& [col, w] : it->second) {
                        row.entries.emplace_back(col, sign * omega_ * w);
                    }
                }
                auto cit = opConstAnnual_.find(member);
                if (cit != opConstAnnual_.end()) {
                    row.rhs -= sign * omega_ * cit->second;
                }
            }
            if (row.entries.empty()) {
                if (row.rhs < -1e-9) {
                    throw Error("annual limit " + lim.name +
                                " is violated by fixed operation alone");
                }
                continue;
            }
            problem_.addRow(std::move(row));
        }
    }

    double weightedSum(const std::vector<double>& series) const {
        double s = 0.0;
        for (int t = 0; t < steps_; ++t) s += stepWeight(t) * series[t];
        return s;
    }

    const EnergySystemModel& model_;
    const TypicalPeriodSet* tps_;
    StorageAggregation storageMode_;
    SparseProblem problem_;
    int steps_ = 0;
    int periodLength_ = 0;
    int numPeriods_ = 0;
    int numCommodities_ = 0;
    double dt_ = 1.0;
    double omega_ = 1.0;
    std::vector<Balance> balances_;
    // per component: operation columns with their period weights, and the
    // weighted sum of constant (pinned) operation
    std::map<std::string, std::vector<std::pair<int, double>>> opColumns_;
    std::map<std::string, double> opConstAnnual_;
};

}  // namespace

SparseProblem build_problem(const EnergySystemModel& model) {
    return Emitter(model, nullptr, StorageAggregation::interPeriodLinkage).run();
}

SparseProblem build_linked_problem(const EnergySystemModel& model,
                                   const TypicalPeriodSet& tps,
                                   StorageAggregation storage) {
    return Emitter(model, &tps, storage).run();
}

}  // namespace minfine
