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

#include "minfine/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "minfine/sha256.hpp"

namespace minfine {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

/// Strict object walker: every consumed key is remembered, finish()
/// rejects the rest naming their JSON pointer.
class ObjectReader {
  public:
    ObjectReader(const Json& node, std::string pointer)
        : node_(node), pointer_(std::move(pointer)) {
        if (!node_.is_object()) {
            throw Error("expected an object at " + pointer_);
        }
    }

    const Json* find(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    const Json& need(const std::string& key) {
        const Json* v = find(key);
        if (v == nullptr) {
            throw Error("missing key '" + key + "' at " + pointer_);
        }
        return *v;
    }

    std::string str(const std::string& key) {
        const Json& v = need(key);
        if (!v.is_string()) {
            throw Error("expected a string at " + pointer_ + "/" + key);
        }
        return v.get<std::string>();
    }

    std::string strOr(const std::string& key, const std::string& fallback) {
        const Json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_string()) {
            throw Error("expected a string at " + pointer_ + "/" + key);
        }
        return v->get<std::string>();
    }

    double num(const std::string& key) {
        const Json& v = need(key);
        if (!v.is_number()) {
            throw Error("expected a number at " + pointer_ + "/" + key);
        }
        return v.get<double>();
    }

    double numOr(const std::string& key, double fallback) {
        const Json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_number()) {
            throw Error("expected a number at " + pointer_ + "/" + key);
        }
        return v->get<double>();
    }

    int intOr(const std::string& key, int fallback) {
        const Json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_number_integer()) {
            throw Error("expected an integer at " + pointer_ + "/" + key);
        }
        return v->get<int>();
    }

    int integer(const std::string& key) {
        const Json& v = need(key);
        if (!v.is_number_integer()) {
            throw Error("expected an integer at " + pointer_ + "/" + key);
        }
        return v.get<int>();
    }

    bool boolOr(const std::string& key, bool fallback) {
        const Json* v = find(key);
        if (v == nullptr) return fallback;
        if (!v->is_boolean()) {
            throw Error("expected a boolean at " + pointer_ + "/" + key);
        }
        return v->get<bool>();
    }

    const std::string& pointer() const { return pointer_; }

    void finish() {
        for (const auto& [key, value] : node_.items()) {
            (void)value;
            if (seen_.count(key) == 0) {
                throw Error("unknown key '" + key + "' at " + pointer_ + "/" +
                            key);
            }
        }
    }

  private:
    const Json& node_;
    std::string pointer_;
    std::set<std::string> seen_;
};

struct LoadContext {
    fs::path baseDir;
    Sha256* hasher = nullptr;  // optional: referenced CSV bytes feed it
};

std::vector<double> numberArray(const Json& node, const std::string& pointer) {
    if (!node.is_array()) {
        throw Error("expected an array at " + pointer);
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) {
            throw Error("expected a number at " + pointer + "/" +
                        std::to_string(i));
        }
        out.push_back(node[i].get<double>());
    }
    return out;
}

/// A series is an inline array or a {file, column} CSV reference.
std::vector<double> readSeries(const Json& node, const std::string& pointer,
                               LoadContext& ctx) {
    if (node.is_array()) return numberArray(node, pointer);
    ObjectReader obj(node, pointer);
    std::string file = obj.str("file");
    std::string column = obj.str("column");
    obj.finish();
    fs::path path = ctx.baseDir / file;
    if (!fs::exists(path)) {
        throw Error("missing file " + path.string() + " referenced at " +
                    pointer);
    }
    if (ctx.hasher != nullptr) {
        ctx.hasher->update(read_file(path.string()));
    }
    return read_csv_column(path.string(), column);
}

PerRegionSeries readPerRegionSeries(const Json& node,
                                    const std::string& pointer,
                                    LoadContext& ctx) {
    if (!node.is_object()) {
        throw Error("expected an object of region series at " + pointer);
    }
    PerRegionSeries series;
    for (const auto& [region, value] : node.items()) {
        series[region] = readSeries(value, pointer + "/" + region, ctx);
    }
    return series;
}

/// Per-region scalars accept a plain number (all regions) or an object.
PerLabel readPerLabel(const Json& node, const std::string& pointer,
                      double fallback) {
    PerLabel out(fallback);
    if (node.is_number()) {
        out.fallback = node.get<double>();
        return out;
    }
    if (!node.is_object()) {
        throw Error("expected a number or object at " + pointer);
    }
    for (const auto& [label, value] : node.items()) {
        if (!value.is_number()) {
            throw Error("expected a number at " + pointer + "/" + label);
        }
        out.values[label] = value.get<double>();
    }
    return out;
}

Economics readEconomics(const Json* node, const std::string& pointer) {
    Economics econ;
    if (node == nullptr) return econ;
    ObjectReader obj(*node, pointer);
    econ.investPerCapacity = obj.numOr("investPerCapacity", 0.0);
    econ.opexPerCapacity = obj.numOr("opexPerCapacity", 0.0);
    econ.opexPerOperation = obj.numOr("opexPerOperation", 0.0);
    econ.interestRate = obj.numOr("interestRate", 0.0);
    econ.economicLifetime = obj.intOr("economicLifetime", 1);
    econ.investIfBuilt = obj.numOr("investIfBuilt", 0.0);
    econ.opexIfBuiltPerYear = obj.numOr("opexIfBuiltPerYear", 0.0);
    obj.finish();
    return econ;
}

CapacityPolicy readCapacity(const Json* node, const std::string& pointer) {
    CapacityPolicy cap;
    if (node == nullptr) return cap;
    ObjectReader obj(*node, pointer);
    cap.hasCapacityVariable = obj.boolOr("hasCapacityVariable", false);
    cap.hasBuildBinary = obj.boolOr("hasBuildBinary", false);
    if (const Json* v = obj.find("min")) {
        cap.capacityMin = readPerLabel(*v, pointer + "/min", 0.0);
    }
    if (const Json* v = obj.find("max")) {
        cap.capacityMax = readPerLabel(*v, pointer + "/max", kInf);
    }
    if (const Json* v = obj.find("fix")) {
        cap.capacityFix = readPerLabel(*v, pointer + "/fix", 0.0);
    }
    if (const Json* v = obj.find("minIfBuilt")) {
        cap.minCapacityIfBuilt = readPerLabel(*v, pointer + "/minIfBuilt", 0.0);
    }
    obj.finish();
    return cap;
}

std::vector<std::string> readStringArray(const Json& node,
                                         const std::string& pointer) {
    if (!node.is_array()) {
        throw Error("expected an array at " + pointer);
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_string()) {
            throw Error("expected a string at " + pointer + "/" +
                        std::to_string(i));
        }
        out.push_back(node[i].get<std::string>());
    }
    return out;
}

ComponentSpec readComponent(const Json& node, const std::string& pointer,
                            LoadContext& ctx) {
    ObjectReader obj(node, pointer);
    std::string type = obj.str("type");
    std::string name = obj.str("name");
    if (type == "source" || type == "sink") {
        SourceSinkSpec s;
        s.kind = type == "source" ? FlowKind::source : FlowKind::sink;
        s.name = name;
        s.regions = readStringArray(obj.need("regions"), pointer + "/regions");
        s.commodity = obj.str("commodity");
        s.economics = readEconomics(obj.find("economics"), pointer + "/economics");
        s.capacity = readCapacity(obj.find("capacity"), pointer + "/capacity");
        if (const Json* v = obj.find("operationRateMax")) {
            s.operationRateMax =
                readPerRegionSeries(*v, pointer + "/operationRateMax", ctx);
        }
        if (const Json* v = obj.find("operationRateFix")) {
            s.operationRateFix =
                readPerRegionSeries(*v, pointer + "/operationRateFix", ctx);
        }
        s.commodityCostPerUnit = obj.numOr("commodityCostPerUnit", 0.0);
        obj.finish();
        return s;
    }
    if (type == "conversion") {
        ConversionSpec c;
        c.name = name;
        c.regions = readStringArray(obj.need("regions"), pointer + "/regions");
        c.referenceCommodity = obj.str("referenceCommodity");
        const Json& factors = obj.need("conversionFactors");
        ObjectReader fObj(factors, pointer + "/conversionFactors");
        for (const auto& [commodity, value] : factors.items()) {
            (void)fObj.find(commodity);
            if (!value.is_number()) {
                throw Error("expected a number at " + pointer +
                            "/conversionFactors/" + commodity);
            }
            c.conversionFactors[commodity] = value.get<double>();
        }
        fObj.finish();
        c.economics = readEconomics(obj.find("economics"), pointer + "/economics");
        c.capacity = readCapacity(obj.find("capacity"), pointer + "/capacity");
        auto optNum = [&](const char* key) -> std::optional<double> {
            const Json* v = obj.find(key);
            if (v == nullptr) return std::nullopt;
            if (!v->is_number()) {
                throw Error("expected a number at " + pointer + "/" + key);
            }
            return v->get<double>();
        };
        c.rampUpMax = optNum("rampUpMax");
        c.rampDownMax = optNum("rampDownMax");
        c.partLoadMin = optNum("partLoadMin");
        obj.finish();
        return c;
    }
    if (type == "storage") {
        StorageSpec s;
        s.name = name;
        s.regions = readStringArray(obj.need("regions"), pointer + "/regions");
        s.commodity = obj.str("commodity");
        s.economics = readEconomics(obj.find("economics"), pointer + "/economics");
        s.capacity = readCapacity(obj.find("capacity"), pointer + "/capacity");
        s.chargeEfficiency = obj.numOr("chargeEfficiency", 1.0);
        s.dischargeEfficiency = obj.numOr("dischargeEfficiency", 1.0);
        s.selfDischargePerHour = obj.numOr("selfDischargePerHour", 0.0);
        s.chargeRateMax = obj.numOr("chargeRateMax", 1.0);
        s.dischargeRateMax = obj.numOr("dischargeRateMax", 1.0);
        s.socMinFraction = obj.numOr("socMinFraction", 0.0);
        s.cyclic = obj.boolOr("cyclic", true);
        obj.finish();
        return s;
    }
    if (type == "transmission") {
        TransmissionSpec t;
        t.name = name;
        t.commodity = obj.str("commodity");
        const Json& edges = obj.need("edges");
        if (!edges.is_array()) {
            throw Error("expected an array at " + pointer + "/edges");
        }
        for (std::size_t i = 0; i < edges.size(); ++i) {
            std::string ePtr = pointer + "/edges/" + std::to_string(i);
            ObjectReader eObj(edges[i], ePtr);
            TransmissionEdge edge;
            edge.regionA = eObj.str("regionA");
            edge.regionB = eObj.str("regionB");
            edge.length = eObj.num("length");
            eObj.finish();
            t.edges.push_back(edge);
        }
        t.economics = readEconomics(obj.find("economics"), pointer + "/economics");
        t.capacity = readCapacity(obj.find("capacity"), pointer + "/capacity");
        t.lossPerLength = obj.numOr("lossPerLength", 0.0);
        obj.finish();
        return t;
    }
    throw Error("unknown component type '" + type + "' at " + pointer +
                "/type");
}

EnergySystemModel parseModel(const Json& doc, LoadContext& ctx) {
    ObjectReader root(doc, "");
    ObjectReader meta(root.need("meta"), "/meta");
    std::string name = meta.strOr("name", "model");
    TimeStructure time;
    time.numSteps = meta.integer("numSteps");
    time.hoursPerStep = meta.num("hoursPerStep");
    meta.finish();

    std::vector<std::string> regions =
        readStringArray(root.need("regions"), "/regions");
    std::vector<Commodity> commodities;
    const Json& commNode = root.need("commodities");
    if (!commNode.is_array()) throw Error("expected an array at /commodities");
    for (std::size_t i = 0; i < commNode.size(); ++i) {
        std::string ptr = "/commodities/" + std::to_string(i);
        ObjectReader cObj(commNode[i], ptr);
        commodities.push_back({cObj.str("label"), cObj.strOr("unit", "")});
        cObj.finish();
    }

    EnergySystemModel model = new_model(regions, commodities, time);
    model.name = name;

    const Json& comps = root.need("components");
    if (!comps.is_array()) throw Error("expected an array at /components");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::string ptr = "/components/" + std::to_string(i);
        add_component(model, readComponent(comps[i], ptr, ctx));
    }

    if (const Json* limits = root.find("annualLimits")) {
        if (!limits->is_array()) {
            throw Error("expected an array at /annualLimits");
        }
        for (std::size_t i = 0; i < limits->size(); ++i) {
            std::string ptr = "/annualLimits/" + std::to_string(i);
            ObjectReader lObj((*limits)[i], ptr);
            AnnualLimit lim;
            lim.name = lObj.str("name");
            lim.limit = lObj.num("limit");
            const Json& members = lObj.need("members");
            if (!members.is_array()) {
                throw Error("expected an array at " + ptr + "/members");
            }
            for (std::size_t m = 0; m < members.size(); ++m) {
                std::string mPtr = ptr + "/members/" + std::to_string(m);
                ObjectReader mObj(members[m], mPtr);
                lim.members.emplace_back(mObj.str("component"),
                                         mObj.integer("sign"));
                mObj.finish();
            }
            lObj.finish();
            add_annual_limit(model, lim);
        }
    }
    root.finish();

    auto diags = validate_model(model);
    if (!diags.empty()) {
        throw Error("model does not validate: " + diags.front().component +
                    ": " + diags.front().message);
    }
    return model;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
        if (!out.good()) throw Error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("cannot rename " + tmp + " to " + path);
    }
}

std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(path + ": empty file, expected a header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> headers;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) headers.push_back(cell);
    }
    int columnIndex = -1;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (headers[i] == column) columnIndex = static_cast<int>(i);
    }
    if (columnIndex < 0) {
        throw Error(path + ": no column named '" + column + "'");
    }
    std::vector<double> values;
    int lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        bool found = false;
        while (std::getline(ss, cell, ',')) {
            if (col == columnIndex) {
                char* end = nullptr;
                double v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0') {
                    throw Error(path + " line " + std::to_string(lineNo) +
                                ", column " + std::to_string(col + 1) +
                                ": non-numeric cell '" + cell + "'");
                }
                values.push_back(v);
                found = true;
                break;
            }
            ++col;
        }
        if (!found) {
            throw Error(path + " line " + std::to_string(lineNo) +
                        ": row has no column " + std::to_string(columnIndex + 1));
        }
    }
    return values;
}

EnergySystemModel model_from_json_text(const std::string& text,
                                       const std::string& baseDir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("document is not valid JSON: ") + e.what());
    }
    LoadContext ctx;
    ctx.baseDir = baseDir;
    return parseModel(doc, ctx);
}

LoadedModel load_model_with_hash(const std::string& path) {
    std::string text = read_file(path);
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(path + ": not valid JSON: " + e.what());
    }
    Sha256 hasher;
    hasher.update(text);
    LoadContext ctx;
    ctx.baseDir = fs::path(path).parent_path();
    ctx.hasher = &hasher;
    LoadedModel out{parseModel(doc, ctx), ""};
    out.contentHash = hasher.hexDigest();
    return out;
}

EnergySystemModel load_model(const std::string& path) {
    return load_model_with_hash(path).model;
}

namespace {

Json perLabelJson(const PerLabel& v, const std::vector<std::string>& labels,
                  bool skipInfinite) {
    Json out = Json::object();
    for (const auto& label : labels) {
        double value = v.get(label);
        if (skipInfinite && !is_finite(value)) continue;
        out[label] = value;
    }
    return out;
}

bool anyFinite(const PerLabel& v, const std::vector<std::string>& labels) {
    for (const auto& label : labels) {
        if (is_finite(v.get(label))) return true;
    }
    return false;
}

bool anyNonzero(const PerLabel& v, const std::vector<std::string>& labels) {
    for (const auto& label : labels) {
        if (v.get(label) != 0.0) return true;
    }
    return false;
}

Json economicsJson(const Economics& e) {
    Json out = Json::object();
    out["investPerCapacity"] = e.investPerCapacity;
    out["opexPerCapacity"] = e.opexPerCapacity;
    out["opexPerOperation"] = e.opexPerOperation;
    out["interestRate"] = e.interestRate;
    out["economicLifetime"] = e.economicLifetime;
    out["investIfBuilt"] = e.investIfBuilt;
    out["opexIfBuiltPerYear"] = e.opexIfBuiltPerYear;
    return out;
}

Json capacityJson(const CapacityPolicy& cap,
                  const std::vector<std::string>& labels) {
    Json out = Json::object();
    out["hasCapacityVariable"] = cap.hasCapacityVariable;
    out["hasBuildBinary"] = cap.hasBuildBinary;
    if (anyNonzero(cap.capacityMin, labels)) {
        out["min"] = perLabelJson(cap.capacityMin, labels, false);
    }
    if (anyFinite(cap.capacityMax, labels)) {
        out["max"] = perLabelJson(cap.capacityMax, labels, true);
    }
    if (cap.hasFix()) {
        out["fix"] = perLabelJson(*cap.capacityFix, labels, false);
    }
    if (anyNonzero(cap.minCapacityIfBuilt, labels)) {
        out["minIfBuilt"] = perLabelJson(cap.minCapacityIfBuilt, labels, false);
    }
    return out;
}

Json seriesJson(const PerRegionSeries& series) {
    Json out = Json::object();
    for (const auto& [region, values] : series) {
        out[region] = values;
    }
    return out;
}

}  // namespace

std::string model_to_json_text(const EnergySystemModel& model) {
    Json doc = Json::object();
    doc["meta"] = {{"name", model.name},
                   {"numSteps", model.time.numSteps},
                   {"hoursPerStep", model.time.hoursPerStep}};
    doc["regions"] = model.regions;
    Json commodities = Json::array();
    for (const auto& c : model.commodities) {
        commodities.push_back({{"label", c.label}, {"unit", c.unit}});
    }
    doc["commodities"] = std::move(commodities);

    Json comps = Json::array();
    for (const auto& comp : model.components) {
        Json c = Json::object();
        if (const auto* ss = std::get_if<SourceSinkSpec>(&comp)) {
            c["type"] = ss->kind == FlowKind::source ? "source" : "sink";
            c["name"] = ss->name;
            c["regions"] = ss->regions;
            c["commodity"] = ss->commodity;
            c["economics"] = economicsJson(ss->economics);
            c["capacity"] = capacityJson(ss->capacity, ss->regions);
            if (ss->operationRateMax) {
                c["operationRateMax"] = seriesJson(*ss->operationRateMax);
            }
            if (ss->operationRateFix) {
                c["operationRateFix"] = seriesJson(*ss->operationRateFix);
            }
            c["commodityCostPerUnit"] = ss->commodityCostPerUnit;
        } else if (const auto* cv = std::get_if<ConversionSpec>(&comp)) {
            c["type"] = "conversion";
            c["name"] = cv->name;
            c["regions"] = cv->regions;
            c["referenceCommodity"] = cv->referenceCommodity;
            Json factors = Json::object();
            for (const auto& [commodity, gamma] : cv->conversionFactors) {
                factors[commodity] = gamma;
            }
            c["conversionFactors"] = std::move(factors);
            c["economics"] = economicsJson(cv->economics);
            c["capacity"] = capacityJson(cv->capacity, cv->regions);
            if (cv->rampUpMax) c["rampUpMax"] = *cv->rampUpMax;
            if (cv->rampDownMax) c["rampDownMax"] = *cv->rampDownMax;
            if (cv->partLoadMin) c["partLoadMin"] = *cv->partLoadMin;
        } else if (const auto* st = std::get_if<StorageSpec>(&comp)) {
            c["type"] = "storage";
            c["name"] = st->name;
            c["regions"] = st->regions;
            c["commodity"] = st->commodity;
            c["economics"] = economicsJson(st->economics);
            c["capacity"] = capacityJson(st->capacity, st->regions);
            c["chargeEfficiency"] = st->chargeEfficiency;
            c["dischargeEfficiency"] = st->dischargeEfficiency;
            c["selfDischargePerHour"] = st->selfDischargePerHour;
            c["chargeRateMax"] = st->chargeRateMax;
            c["dischargeRateMax"] = st->dischargeRateMax;
            c["socMinFraction"] = st->socMinFraction;
            c["cyclic"] = st->cyclic;
        } else if (const auto* tr = std::get_if<TransmissionSpec>(&comp)) {
            c["type"] = "transmission";
            c["name"] = tr->name;
            c["commodity"] = tr->commodity;
            Json edges = Json::array();
            std::vector<std::string> edgeKeys;
            for (const auto& e : tr->edges) {
                edges.push_back({{"regionA", e.regionA},
                                 {"regionB", e.regionB},
                                 {"length", e.length}});
                edgeKeys.push_back(e.key());
            }
            c["edges"] = std::move(edges);
            c["economics"] = economicsJson(tr->economics);
            c["capacity"] = capacityJson(tr->capacity, edgeKeys);
            c["lossPerLength"] = tr->lossPerLength;
        }
        comps.push_back(std::move(c));
    }
    doc["components"] = std::move(comps);

    if (!model.annualLimits.empty()) {
        Json limits = Json::array();
        for (const auto& lim : model.annualLimits) {
            Json members = Json::array();
            for (const auto& [component, sign] : lim.members) {
                members.push_back({{"component", component}, {"sign", sign}});
            }
            limits.push_back({{"name", lim.name},
                              {"limit", lim.limit},
                              {"members", std::move(members)}});
        }
        doc["annualLimits"] = std::move(limits);
    }
    return doc.dump(2) + "\n";
}

void save_model(const EnergySystemModel& model, const std::string& path) {
    atomic_write_file(path, model_to_json_text(model));
}

}  // namespace minfine
