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

#include "minfine/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace minfine {

double capital_recovery_factor(double interestRate, int lifetimeYears) {
    if (!(interestRate >= 0.0) || interestRate >= 1.0) {
        throw Error("interest rate " + format_full(interestRate) +
                    " outside [0, 1)");
    }
    if (lifetimeYears < 1) {
        throw Error("economic lifetime " + std::to_string(lifetimeYears) +
                    " < 1 year");
    }
    if (interestRate == 0.0) {
        return 1.0 / lifetimeYears;
    }
    // i*(1+i)^n / ((1+i)^n - 1); expm1 keeps the denominator exact when
    // n*log1p(i) is tiny.
    double nl = lifetimeYears * std::log1p(interestRate);
    return interestRate * std::exp(nl) / std::expm1(nl);
}

double annual_scale(const TimeStructure& time) {
    if (time.numSteps < 2) {
        throw Error("time structure needs at least 2 steps, got " +
                    std::to_string(time.numSteps));
    }
    if (!(time.hoursPerStep > 0.0) || !is_finite(time.hoursPerStep)) {
        throw Error("hoursPerStep must be positive, got " +
                    format_full(time.hoursPerStep));
    }
    return time.annualScale();
}

const std::string& component_name(const ComponentSpec& spec) {
    return std::visit([](const auto& s) -> const std::string& { return s.name; },
                      spec);
}

bool EnergySystemModel::hasRegion(const std::string& r) const {
    return std::find(regions.begin(), regions.end(), r) != regions.end();
}

bool EnergySystemModel::hasCommodity(const std::string& c) const {
    return std::any_of(commodities.begin(), commodities.end(),
                       [&](const Commodity& x) { return x.label == c; });
}

const ComponentSpec* EnergySystemModel::findComponent(
    const std::string& name) const {
    for (const auto& comp : components) {
        if (component_name(comp) == name) return &comp;
    }
    return nullptr;
}

EnergySystemModel new_model(std::vector<std::string> regions,
                            std::vector<Commodity> commodities,
                            TimeStructure time) {
    if (regions.empty()) throw Error("model needs at least one region");
    if (commodities.empty()) throw Error("model needs at least one commodity");
    annual_scale(time);  // validates N_t and dt
    std::set<std::string> seen;
    for (const auto& r : regions) {
        if (r.empty()) throw Error("empty region label");
        if (!seen.insert(r).second) throw Error("duplicate region " + r);
    }
    seen.clear();
    for (const auto& c : commodities) {
        if (c.label.empty()) throw Error("empty commodity label");
        if (!seen.insert(c.label).second)
            throw Error("duplicate commodity " + c.label);
    }
    EnergySystemModel model;
    model.regions = std::move(regions);
    model.commodities = std::move(commodities);
    model.time = time;
    return model;
}

namespace {

using Diags = std::vector<Diagnostic>;

void report(Diags& out, const std::string& comp, const std::string& msg) {
    out.push_back({Severity::error, comp, msg});
}

void check_economics(Diags& out, const std::string& name, const Economics& e) {
    auto money = {e.investPerCapacity, e.opexPerCapacity, e.opexPerOperation,
                  e.investIfBuilt, e.opexIfBuiltPerYear};
    for (double v : money) {
        if (!is_finite(v) || v < 0.0) {
            report(out, name, "monetary field must be finite and >= 0, got " +
                                  format_full(v));
            break;
        }
    }
    if (!(e.interestRate >= 0.0) || e.interestRate >= 1.0) {
        report(out, name, "interestRate " + format_full(e.interestRate) +
                              " outside [0, 1)");
    }
    if (e.economicLifetime < 1) {
        report(out, name, "economicLifetime must be >= 1, got " +
                              std::to_string(e.economicLifetime));
    }
}

void check_capacity_policy(Diags& out, const std::string& name,
                           const CapacityPolicy& cap,
                           const std::vector<std::string>& labels) {
    for (const auto& label : labels) {
        double lo = cap.capacityMin.get(label);
        double hi = cap.capacityMax.get(label);
        if (!(lo >= 0.0)) {
            report(out, name, "capacityMin[" + label + "] must be >= 0");
        }
        if (is_finite(lo) && is_finite(hi) && lo > hi) {
            report(out, name, "capacityMin[" + label + "] = " + format_full(lo) +
                                  " exceeds capacityMax " + format_full(hi));
        }
        if (cap.hasFix()) {
            double fx = cap.fix(label);
            if (!(fx >= 0.0) || !is_finite(fx)) {
                report(out, name, "capacityFix[" + label + "] must be finite >= 0");
            } else if (fx < lo - 1e-12 || (is_finite(hi) && fx > hi + 1e-12)) {
                report(out, name, "capacityFix[" + label + "] = " + format_full(fx) +
                                      " outside [capacityMin, capacityMax]");
            }
        }
        if (cap.minCapacityIfBuilt.get(label) < 0.0) {
            report(out, name, "minCapacityIfBuilt[" + label + "] must be >= 0");
        }
        if (cap.hasBuildBinary && cap.hasCapacityVariable && !cap.hasFix() &&
            !is_finite(cap.capacityMax.get(label))) {
            report(out, name, "build binary requires a finite capacityMax[" +
                                  label + "] or capacityFix");
        }
    }
    if (cap.hasBuildBinary && !cap.hasCapacityVariable && !cap.hasFix()) {
        report(out, name,
               "build binary requires a capacity variable or capacityFix");
    }
}

bool has_capacity(const CapacityPolicy& cap) {
    return cap.hasCapacityVariable || cap.hasFix();
}

void check_series(Diags& out, const std::string& name,
                  const std::string& attr, const PerRegionSeries& series,
                  const std::vector<std::string>& regions, int numSteps,
                  bool unitInterval) {
    for (const auto& region : regions) {
        auto it = series.find(region);
        if (it == series.end()) {
            report(out, name, attr + " missing a series for region " + region);
            continue;
        }
        if (static_cast<int>(it->second.size()) != numSteps) {
            report(out, name, attr + "[" + region + "]: series length " +
                                  std::to_string(it->second.size()) + " != " +
                                  std::to_string(numSteps));
            continue;
        }
        for (double v : it->second) {
            if (!is_finite(v) || v < 0.0 || (unitInterval && v > 1.0)) {
                report(out, name, attr + "[" + region + "] values must lie in " +
                                      (unitInterval ? "[0, 1]" : "[0, inf)"));
                break;
            }
        }
    }
    for (const auto& [region, values] : series) {
        (void)values;
        if (std::find(regions.begin(), regions.end(), region) == regions.end()) {
            report(out, name, attr + " names region " + region +
                                  " the component does not occupy");
        }
    }
}

void check_component(Diags& out, const EnergySystemModel& model,
                     const ComponentSpec& spec);

void check_regions(Diags& out, const EnergySystemModel& model,
                   const std::string& name,
                   const std::vector<std::string>& regions) {
    if (regions.empty()) {
        report(out, name, "component occupies no region");
    }
    std::set<std::string> seen;
    for (const auto& r : regions) {
        if (!model.hasRegion(r)) report(out, name, "unknown region " + r);
        if (!seen.insert(r).second) report(out, name, "duplicate region " + r);
    }
}

void check_source_sink(Diags& out, const EnergySystemModel& model,
                       const SourceSinkSpec& s) {
    check_regions(out, model, s.name, s.regions);
    if (!model.hasCommodity(s.commodity)) {
        report(out, s.name, "unknown commodity " + s.commodity);
    }
    check_economics(out, s.name, s.economics);
    check_capacity_policy(out, s.name, s.capacity, s.regions);
    if (s.operationRateMax && s.operationRateFix) {
        report(out, s.name,
               "operationRateMax and operationRateFix are mutually exclusive");
    }
    int nt = model.time.numSteps;
    if (s.operationRateMax) {
        check_series(out, s.name, "operationRateMax", *s.operationRateMax,
                     s.regions, nt, /*unitInterval=*/true);
        if (!has_capacity(s.capacity)) {
            report(out, s.name,
                   "operationRateMax needs a capacity variable or capacityFix");
        }
    }
    if (s.operationRateFix) {
        check_series(out, s.name, "operationRateFix", *s.operationRateFix,
                     s.regions, nt,
                     /*unitInterval=*/s.capacity.hasCapacityVariable);
    }
    if (!is_finite(s.commodityCostPerUnit)) {
        report(out, s.name, "commodityCostPerUnit must be finite");
    }
    if (s.kind == FlowKind::sink && !s.operationRateFix && !has_capacity(s.capacity)) {
        report(out, s.name,
               "sink needs operationRateFix or a capacity bound; otherwise its "
               "operation is unconstrained");
    }
}

void check_conversion(Diags& out, const EnergySystemModel& model,
                      const ConversionSpec& c) {
    check_regions(out, model, c.name, c.regions);
    check_economics(out, c.name, c.economics);
    check_capacity_policy(out, c.name, c.capacity, c.regions);
    if (c.conversionFactors.size() < 2) {
        report(out, c.name, "conversionFactors needs at least 2 commodities");
    }
    auto ref = c.conversionFactors.find(c.referenceCommodity);
    if (ref == c.conversionFactors.end()) {
        report(out, c.name, "conversionFactors misses the reference commodity " +
                                c.referenceCommodity);
    } else if (ref->second != 1.0 && ref->second != -1.0) {
        report(out, c.name, "reference conversion factor must be +1 or -1, got " +
                                format_full(ref->second));
    }
    for (const auto& [commodity, factor] : c.conversionFactors) {
        if (!model.hasCommodity(commodity)) {
            report(out, c.name, "unknown commodity " + commodity);
        }
        if (!is_finite(factor) || factor == 0.0) {
            report(out, c.name, "conversion factor for " + commodity +
                                    " must be finite and nonzero");
        }
    }
    for (auto ramp : {c.rampUpMax, c.rampDownMax}) {
        if (ramp && !(*ramp > 0.0 && *ramp <= 1.0)) {
            report(out, c.name, "ramp limits must lie in (0, 1]");
        }
    }
    if (c.partLoadMin) {
        if (!(*c.partLoadMin > 0.0 && *c.partLoadMin < 1.0)) {
            report(out, c.name, "partLoadMin must lie in (0, 1)");
        }
        if (!c.capacity.hasFix()) {
            report(out, c.name, "partLoadMin requires capacityFix");
        }
        if (c.capacity.hasBuildBinary) {
            report(out, c.name,
                   "partLoadMin cannot be combined with a build binary");
        }
    }
}

void check_storage(Diags& out, const EnergySystemModel& model,
                   const StorageSpec& s) {
    check_regions(out, model, s.name, s.regions);
    if (!model.hasCommodity(s.commodity)) {
        report(out, s.name, "unknown commodity " + s.commodity);
    }
    check_economics(out, s.name, s.economics);
    check_capacity_policy(out, s.name, s.capacity, s.regions);
    if (!(s.chargeEfficiency > 0.0 && s.chargeEfficiency <= 1.0)) {
        report(out, s.name, "chargeEfficiency must lie in (0, 1]");
    }
    if (!(s.dischargeEfficiency > 0.0 && s.dischargeEfficiency <= 1.0)) {
        report(out, s.name, "dischargeEfficiency must lie in (0, 1]");
    }
    if (!(s.selfDischargePerHour >= 0.0 && s.selfDischargePerHour < 1.0)) {
        report(out, s.name, "selfDischargePerHour must lie in [0, 1)");
    }
    if (!(s.chargeRateMax > 0.0)) {
        report(out, s.name, "chargeRateMax must be > 0");
    }
    if (!(s.dischargeRateMax > 0.0)) {
        report(out, s.name, "dischargeRateMax must be > 0");
    }
    if (!(s.socMinFraction >= 0.0 && s.socMinFraction < 1.0)) {
        report(out, s.name, "socMinFraction must lie in [0, 1)");
    }
}

void check_transmission(Diags& out, const EnergySystemModel& model,
                        const TransmissionSpec& t) {
    if (!model.hasCommodity(t.commodity)) {
        report(out, t.name, "unknown commodity " + t.commodity);
    }
    check_economics(out, t.name, t.economics);
    if (t.edges.empty()) report(out, t.name, "transmission needs >= 1 edge");
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::string> edgeKeys;
    for (const auto& e : t.edges) {
        edgeKeys.push_back(e.key());
        if (e.regionA == e.regionB) {
            report(out, t.name, "edge endpoints must differ: " + e.regionA);
        }
        for (const auto& r : {e.regionA, e.regionB}) {
            if (!model.hasRegion(r)) report(out, t.name, "unknown region " + r);
        }
        auto unordered = std::minmax(e.regionA, e.regionB);
        if (!seen.insert({unordered.first, unordered.second}).second) {
            report(out, t.name, "duplicate edge " + e.key());
        }
        if (!(e.length > 0.0) || !is_finite(e.length)) {
            report(out, t.name, "edge length must be positive: " + e.key());
        }
    }
    if (!(t.lossPerLength >= 0.0) || !is_finite(t.lossPerLength)) {
        report(out, t.name, "lossPerLength must be finite and >= 0");
    }
    check_capacity_policy(out, t.name, t.capacity, edgeKeys);
}

void check_component(Diags& out, const EnergySystemModel& model,
                     const ComponentSpec& spec) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if (s.name.empty()) report(out, "", "component with empty name");
            if constexpr (std::is_same_v<T, SourceSinkSpec>) {
                check_source_sink(out, model, s);
            } else if constexpr (std::is_same_v<T, ConversionSpec>) {
                check_conversion(out, model, s);
            } else if constexpr (std::is_same_v<T, StorageSpec>) {
                check_storage(out, model, s);
            } else {
                check_transmission(out, model, s);
            }
        },
        spec);
}

void check_annual_limit(Diags& out, const EnergySystemModel& model,
                        const AnnualLimit& lim) {
    if (lim.name.empty()) report(out, "", "annual limit with empty name");
    if (!is_finite(lim.limit)) {
        report(out, lim.name, "annual limit must be finite");
    }
    if (lim.members.empty()) {
        report(out, lim.name, "annual limit has no members");
    }
    for (const auto& [member, sign] : lim.members) {
        if (sign != 1 && sign != -1) {
            report(out, lim.name, "member sign must be +1 or -1");
        }
        const ComponentSpec* comp = model.findComponent(member);
        if (comp == nullptr) {
            report(out, lim.name, "member references unknown component " + member);
        } else if (std::holds_alternative<StorageSpec>(*comp) ||
                   std::holds_alternative<TransmissionSpec>(*comp)) {
            report(out, lim.name,
                   "member " + member + " must be a source, sink or conversion");
        }
    }
}

}  // namespace

std::size_t add_component(EnergySystemModel& model, ComponentSpec spec) {
    const std::string& name = component_name(spec);
    if (model.findComponent(name) != nullptr) {
        throw Error("duplicate component name " + name);
    }
    Diags diags;
    check_component(diags, model, spec);
    if (!diags.empty()) {
        throw Error(name + ": " + diags.front().message);
    }
    model.components.push_back(std::move(spec));
    return model.components.size() - 1;
}

void add_annual_limit(EnergySystemModel& model, AnnualLimit limit) {
    Diags diags;
    check_annual_limit(diags, model, limit);
    if (!diags.empty()) {
        throw Error(limit.name + ": " + diags.front().message);
    }
    model.annualLimits.push_back(std::move(limit));
}

std::vector<Diagnostic> validate_model(const EnergySystemModel& model) {
    Diags out;
    if (model.regions.empty()) report(out, "", "model has no regions");
    if (model.commodities.empty()) report(out, "", "model has no commodities");
    if (model.time.numSteps < 2 || !(model.time.hoursPerStep > 0.0)) {
        report(out, "", "invalid time structure");
    }
    std::set<std::string> names;
    for (const auto& comp : model.components) {
        const std::string& name = component_name(comp);
        if (!names.insert(name).second) {
            report(out, name, "duplicate component name " + name);
        }
        check_component(out, model, comp);
    }
    for (const auto& lim : model.annualLimits) {
        check_annual_limit(out, model, lim);
    }
    return out;
}

}  // namespace minfine
