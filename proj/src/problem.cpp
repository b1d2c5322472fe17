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

#include "minfine/problem.hpp"

#include <algorithm>
#include <map>

namespace minfine {

const char* var_kind_tag(VarKind kind) {
    switch (kind) {
        case VarKind::capacity: return "cap";
        case VarKind::build: return "bld";
        case VarKind::operation: return "op";
        case VarKind::charge: return "ch";
        case VarKind::discharge: return "dis";
        case VarKind::socIntra: return "soc";
        case VarKind::socInter: return "isoc";
        case VarKind::flow: return "flow";
        case VarKind::onOff: return "on";
    }
    return "var";
}

std::string VariableRef::name() const {
    std::string out = var_kind_tag(kind);
    out += "__" + sanitize_label(component);
    if (!where.empty()) out += "__" + sanitize_label(where);
    if (timeIndex >= 0) out += "__t" + std::to_string(timeIndex);
    return out;
}

int SparseProblem::addVariable(VariableRef ref, double lower, double upper,
                               double cost, bool integral) {
    if (lower > upper) {
        throw Error("variable " + ref.name() + ": lower bound " +
                    format_full(lower) + " exceeds upper " + format_full(upper));
    }
    varTable.push_back(std::move(ref));
    lowerBounds.push_back(lower);
    upperBounds.push_back(upper);
    objective.push_back(cost);
    integrality.push_back(integral ? 1 : 0);
    return numVars++;
}

int SparseProblem::addRow(RowDef row) {
    std::map<int, double> merged;
    for (const auto& [col, coeff] : row.entries) {
        if (col < 0 || col >= numVars) {
            throw Error("row " + row.tag + " references unknown column " +
                        std::to_string(col));
        }
        if (!is_finite(coeff)) {
            throw Error("row " + row.tag + " has a non-finite coefficient");
        }
        merged[col] += coeff;
    }
    row.entries.clear();
    for (const auto& [col, coeff] : merged) {
        if (coeff != 0.0) row.entries.emplace_back(col, coeff);
    }
    if (row.entries.empty()) {
        throw Error("row " + row.tag + " has no nonzero entries");
    }
    if (!is_finite(row.rhs)) {
        throw Error("row " + row.tag + " has a non-finite rhs");
    }
    rows.push_back(std::move(row));
    return static_cast<int>(rows.size()) - 1;
}

std::string SparseProblem::columnName(int j) const {
    if (j < static_cast<int>(colNames.size()) && !colNames[j].empty()) {
        return colNames[j];
    }
    if (j < static_cast<int>(varTable.size())) {
        return varTable[j].name();
    }
    return "x" + std::to_string(j);
}

int SparseProblem::findRow(const std::string& tag) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].tag == tag) return static_cast<int>(i);
    }
    return -1;
}

bool SparseProblem::isMip() const {
    return std::any_of(integrality.begin(), integrality.end(),
                       [](unsigned char b) { return b != 0; });
}

void SparseProblem::checkConsistent() const {
    auto n = static_cast<std::size_t>(numVars);
    if (lowerBounds.size() != n || upperBounds.size() != n ||
        objective.size() != n || integrality.size() != n ||
        (!varTable.empty() && varTable.size() != n)) {
        throw Error("problem arrays disagree on the variable count");
    }
    for (int j = 0; j < numVars; ++j) {
        if (lowerBounds[j] > upperBounds[j]) {
            throw Error("variable " + columnName(j) + " has crossed bounds");
        }
        if (!is_finite(objective[j])) {
            throw Error("variable " + columnName(j) +
                        " has a non-finite objective coefficient");
        }
    }
    for (const auto& row : rows) {
        if (row.entries.empty()) {
            throw Error("row " + row.tag + " has no nonzero entries");
        }
        for (const auto& [col, coeff] : row.entries) {
            if (col < 0 || col >= numVars || !is_finite(coeff)) {
                throw Error("row " + row.tag + " has an invalid entry");
            }
        }
    }
}

}  // namespace minfine
