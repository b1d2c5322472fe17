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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minfine/common.hpp"

namespace minfine {

/// Discretization of the planning horizon. The annual scale factor
/// extrapolates sub-year horizons to a full reference year and multiplies
/// every operational cost term and annual limit.
struct TimeStructure {
    int numSteps = 0;         // N_t
    double hoursPerStep = 0;  // dt [h]

    double annualScale() const { return 8760.0 / (numSteps * hoursPerStep); }
};

/// Capital recovery factor i(1+i)^n / ((1+i)^n - 1); 1/n at i = 0.
/// Evaluated via expm1/log1p so tiny interest rates stay accurate.
double capital_recovery_factor(double interestRate, int lifetimeYears);

double annual_scale(const TimeStructure& time);

struct Economics {
    double investPerCapacity = 0.0;   // [cost/capacity-unit]
    double opexPerCapacity = 0.0;     // [cost/(capacity-unit*year)]
    double opexPerOperation = 0.0;    // [cost/commodity-unit]
    double interestRate = 0.0;        // in [0,1)
    int economicLifetime = 1;         // [years]
    double investIfBuilt = 0.0;       // [cost]
    double opexIfBuiltPerYear = 0.0;  // [cost/year]

    double annuity() const {
        return capital_recovery_factor(interestRate, economicLifetime);
    }
};

/// Per-region (or per-edge) scalar with a default for unlisted labels.
struct PerLabel {
    std::map<std::string, double> values;
    double fallback = 0.0;

    PerLabel() = default;
    PerLabel(double constant) : fallback(constant) {}  // NOLINT: implicit by design

    double get(const std::string& label) const {
        auto it = values.find(label);
        return it == values.end() ? fallback : it->second;
    }
};

struct CapacityPolicy {
    bool hasCapacityVariable = false;
    PerLabel capacityMin{0.0};
    PerLabel capacityMax{kInf};
    std::optional<PerLabel> capacityFix;
    bool hasBuildBinary = false;
    PerLabel minCapacityIfBuilt{0.0};

    bool hasFix() const { return capacityFix.has_value(); }
    double fix(const std::string& label) const { return capacityFix->get(label); }
};

/// Region -> dense series of length N_t.
using PerRegionSeries = std::map<std::string, std::vector<double>>;

enum class FlowKind { source, sink };

struct SourceSinkSpec {
    FlowKind kind = FlowKind::source;
    std::string name;
    std::vector<std::string> regions;
    std::string commodity;
    Economics economics;
    CapacityPolicy capacity;
    // Relative to capacity, values in [0,1]; defaults to constant 1.
    std::optional<PerRegionSeries> operationRateMax;
    // Absolute commodity-units per step without a capacity variable,
    // relative to capacity otherwise. Mutually exclusive with rateMax.
    std::optional<PerRegionSeries> operationRateFix;
    // Cost for sources; revenue entered as negative cost for sinks.
    double commodityCostPerUnit = 0.0;
};

struct ConversionSpec {
    std::string name;
    std::vector<std::string> regions;
    std::string referenceCommodity;
    // commodity -> signed factor; negative = consumed, positive = produced.
    std::map<std::string, double> conversionFactors;
    Economics economics;
    CapacityPolicy capacity;  // reference-commodity units per hour
    std::optional<double> rampUpMax;    // fraction of capacity*dt per step
    std::optional<double> rampDownMax;
    std::optional<double> partLoadMin;  // requires capacityFix
};

struct StorageSpec {
    std::string name;
    std::vector<std::string> regions;
    std::string commodity;
    Economics economics;
    CapacityPolicy capacity;  // commodity-energy units
    double chargeEfficiency = 1.0;      // (0,1]
    double dischargeEfficiency = 1.0;   // (0,1]
    double selfDischargePerHour = 0.0;  // [0,1)
    double chargeRateMax = 1.0;         // fraction of energy capacity per hour
    double dischargeRateMax = 1.0;
    double socMinFraction = 0.0;  // [0,1)
    bool cyclic = true;
};

struct TransmissionEdge {
    std::string regionA;
    std::string regionB;
    double length = 0.0;  // [km]

    std::string key() const { return regionA + "~" + regionB; }
};

struct TransmissionSpec {
    std::string name;
    std::string commodity;
    std::vector<TransmissionEdge> edges;
    Economics economics;  // investPerCapacity per capacity-unit*km
    CapacityPolicy capacity;  // per edge, keyed by edge key()
    double lossPerLength = 0.0;  // fraction per km; per-edge loss clamped to 1
};

struct AnnualLimit {
    std::string name;
    double limit = 0.0;  // [commodity-units/year]
    std::vector<std::pair<std::string, int>> members;  // (component, +-1)
};

using ComponentSpec =
    std::variant<SourceSinkSpec, ConversionSpec, StorageSpec, TransmissionSpec>;

const std::string& component_name(const ComponentSpec& spec);

struct Commodity {
    std::string label;
    std::string unit;
};

struct EnergySystemModel {
    std::string name = "model";
    std::vector<std::string> regions;
    std::vector<Commodity> commodities;
    TimeStructure time;
    std::vector<ComponentSpec> components;
    std::vector<AnnualLimit> annualLimits;

    bool hasRegion(const std::string& r) const;
    bool hasCommodity(const std::string& c) const;
    const ComponentSpec* findComponent(const std::string& name) const;
};

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string component;  // empty for model-level findings
    std::string message;
};

/// Builds an empty model; throws Error on duplicate or empty labels or an
/// invalid time structure.
EnergySystemModel new_model(std::vector<std::string> regions,
                            std::vector<Commodity> commodities,
                            TimeStructure time);

/// Appends a component after checking its own invariants and that every
/// referenced region/commodity exists. Returns the stable component index.
std::size_t add_component(EnergySystemModel& model, ComponentSpec spec);

void add_annual_limit(EnergySystemModel& model, AnnualLimit limit);

/// Re-checks the whole model. Empty result iff the model compiles.
std::vector<Diagnostic> validate_model(const EnergySystemModel& model);

}  // namespace minfine
