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

#include "minfine/bundle.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "minfine/model_io.hpp"

namespace minfine {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void write_results_bundle(const std::string& dir,
                          const EnergySystemModel& model,
                          const SparseProblem& problem,
                          const Solution& solution, const ResultSet* results,
                          const TypicalPeriodSet* tps,
                          const std::string& inputHash) {
    fs::create_directories(dir);
    Json summary = Json::object();
    summary["toolVersion"] = kToolVersion;
    summary["inputHash"] = inputHash;
    summary["model"] = model.name;
    summary["status"] = to_string(solution.status);
    summary["solverStats"] = {
        {"iterations", solution.stats.iterations},
        {"nodes", solution.stats.nodes},
        {"refactorizations", solution.stats.refactorizations},
        {"wallTimeSeconds", solution.stats.wallTimeSeconds}};
    if (results != nullptr) {
        summary["objectiveTAC"] = results->objectiveTAC;
        Json caps = Json::object();
        for (const auto& [component, perWhere] : results->capacities) {
            Json inner = Json::object();
            for (const auto& [where, value] : perWhere) inner[where] = value;
            caps[component] = std::move(inner);
        }
        summary["capacities"] = std::move(caps);
        Json builds = Json::object();
        for (const auto& [component, perWhere] : results->buildDecisions) {
            Json inner = Json::object();
            for (const auto& [where, value] : perWhere) inner[where] = value;
            builds[component] = std::move(inner);
        }
        summary["buildDecisions"] = std::move(builds);
        Json costs = Json::object();
        for (const auto& [component, cb] : results->costBreakdown) {
            costs[component] = {{"annualizedInvest", cb.annualizedInvest},
                                {"fixedOpex", cb.fixedOpex},
                                {"variableOpex", cb.variableOpex},
                                {"commodityCost", cb.commodityCost}};
        }
        summary["costBreakdown"] = std::move(costs);
    }
    atomic_write_file((fs::path(dir) / "summary.json").string(),
                      summary.dump(2) + "\n");

    if (results != nullptr) {
        std::ostringstream csv;
        csv << "component,where,kind,t,value\n";
        for (const auto& sched : results->schedules) {
            for (std::size_t t = 0; t < sched.values.size(); ++t) {
                csv << sched.component << ',' << sched.where << ','
                    << var_kind_tag(sched.kind) << ',' << t << ','
                    << format_full(sched.values[t]) << '\n';
            }
        }
        for (const auto& [component, perRegion] : results->storageStates) {
            for (const auto& [region, states] : perRegion) {
                for (std::size_t t = 0; t < states.size(); ++t) {
                    csv << component << ',' << region << ",soc," << t << ','
                        << format_full(states[t]) << '\n';
                }
            }
        }
        atomic_write_file((fs::path(dir) / "schedules.csv").string(), csv.str());

        if (results->hasShadowPrices) {
            std::ostringstream prices;
            prices << "region,commodity,t,price\n";
            for (const auto& [region, perCommodity] : results->shadowPrices) {
                for (const auto& [commodity, series] : perCommodity) {
                    for (std::size_t t = 0; t < series.size(); ++t) {
                        prices << region << ',' << commodity << ',' << t << ','
                               << format_full(series[t]) << '\n';
                    }
                }
            }
            atomic_write_file((fs::path(dir) / "prices.csv").string(),
                              prices.str());
        }
    }

    if (tps != nullptr) {
        Json agg = Json::object();
        agg["clusters"] = tps->numClusters;
        agg["periodLength"] = tps->periodLength;
        agg["weights"] = tps->weights;
        agg["orderingMap"] = tps->orderingMap;
        agg["medoidIndices"] = tps->medoidIndices;
        agg["totalWithinClusterDistance"] = tps->totalWithinClusterDistance;
        atomic_write_file((fs::path(dir) / "aggregation.json").string(),
                          agg.dump(2) + "\n");
    }
}

namespace {

struct PriceRow {
    std::string region;
    std::string commodity;
    long t = 0;
    double price = 0.0;
};

std::vector<PriceRow> readPrices(const std::string& path) {
    std::vector<PriceRow> rows;
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        PriceRow row;
        std::string cell;
        std::getline(ss, row.region, ',');
        std::getline(ss, row.commodity, ',');
        std::getline(ss, cell, ',');
        row.t = std::strtol(cell.c_str(), nullptr, 10);
        std::getline(ss, cell, ',');
        row.price = std::strtod(cell.c_str(), nullptr);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string render_report(const std::string& bundleDir) {
    fs::path dir(bundleDir);
    std::string summaryPath = (dir / "summary.json").string();
    Json summary;
    try {
        summary = Json::parse(read_file(summaryPath));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(summaryPath + ": corrupt summary: " + e.what());
    }

    std::ostringstream out;
    out << "model    " << summary.value("model", std::string("?")) << "\n";
    out << "status   " << summary.value("status", std::string("?")) << "\n";
    if (summary.contains("objectiveTAC")) {
        out << "TAC      " << format_full(summary["objectiveTAC"].get<double>())
            << "\n";
    }
    out << "\n";

    if (summary.contains("capacities")) {
        out << "capacity [component x region/edge]\n";
        out << "  " << std::left << std::setw(20) << "component" << std::setw(16)
            << "where" << "capacity\n";
        for (const auto& [component, perWhere] : summary["capacities"].items()) {
            for (const auto& [where, value] : perWhere.items()) {
                std::ostringstream num;
                num << std::fixed << std::setprecision(2) << value.get<double>();
                out << "  " << std::left << std::setw(20) << component
                    << std::setw(16) << where << num.str() << "\n";
            }
        }
        out << "\n";
    }

    if (summary.contains("costBreakdown")) {
        out << "cost breakdown [per year]\n";
        out << "  " << std::left << std::setw(20) << "component"
            << std::right << std::setw(14) << "invest" << std::setw(14)
            << "fixedOpex" << std::setw(14) << "varOpex" << std::setw(14)
            << "commodity" << std::setw(14) << "total" << "\n";
        for (const auto& [component, cb] : summary["costBreakdown"].items()) {
            double invest = cb.value("annualizedInvest", 0.0);
            double fixed = cb.value("fixedOpex", 0.0);
            double var = cb.value("variableOpex", 0.0);
            double commodity = cb.value("commodityCost", 0.0);
            out << "  " << std::left << std::setw(20) << component << std::right
                << std::fixed << std::setprecision(2) << std::setw(14) << invest
                << std::setw(14) << fixed << std::setw(14) << var
                << std::setw(14) << commodity << std::setw(14)
                << invest + fixed + var + commodity << "\n";
        }
        out << "\n";
    }

    fs::path pricesPath = dir / "prices.csv";
    if (fs::exists(pricesPath)) {
        auto rows = readPrices(pricesPath.string());
        std::set<std::string> commodities;
        for (const auto& row : rows) commodities.insert(row.commodity);
        out << "top shadow-price hours (per commodity)\n";
        for (const auto& commodity : commodities) {
            std::vector<PriceRow> filtered;
            for (const auto& row : rows) {
                if (row.commodity == commodity) filtered.push_back(row);
            }
            std::stable_sort(filtered.begin(), filtered.end(),
                             [](const PriceRow& a, const PriceRow& b) {
                                 if (a.price != b.price) return a.price > b.price;
                                 if (a.t != b.t) return a.t < b.t;
                                 return a.region < b.region;
                             });
            std::size_t top = std::min<std::size_t>(10, filtered.size());
            for (std::size_t i = 0; i < top; ++i) {
                out << "  " << std::left << std::setw(16) << commodity
                    << std::setw(12) << filtered[i].region << "t="
                    << std::setw(8) << filtered[i].t << std::fixed
                    << std::setprecision(4) << filtered[i].price << "\n";
            }
        }
    } else {
        out << "no prices.csv in bundle (integer run or non-optimal); price "
               "section omitted\n";
    }
    return out.str();
}

}  // namespace minfine
