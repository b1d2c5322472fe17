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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minfine/common.hpp"

namespace minfine {

enum class VarKind {
    capacity,
    build,
    operation,
    charge,
    discharge,
    socIntra,
    socInter,
    flow,
    onOff,
};

const char* var_kind_tag(VarKind kind);

struct VariableRef {
    VarKind kind = VarKind::operation;
    std::string component;
    std::string where;   // region, edge key, or directed edge "A~B"
    int timeIndex = -1;  // -1 = none

    std::string name() const;
};

enum class RowSense { lessEqual, equal, greaterEqual };

struct RowDef {
    std::vector<std::pair<int, double>> entries;  // (column, coefficient)
    RowSense sense = RowSense::equal;
    double rhs = 0.0;
    std::string tag;
};

/// Typical-period metadata a linked problem carries so results can be
/// mapped back onto the original horizon.
struct AggregationInfo {
    int periodLength = 0;            // P
    int numClusters = 0;             // k
    std::vector<int> weights;        // per cluster, sums to N_p
    std::vector<int> orderingMap;    // sigma, length N_p
    std::vector<int> medoidIndices;  // original period ids
};

/// Maps a balance row back to its (region, commodity, step).
struct BalanceRef {
    int row = -1;
    std::string region;
    std::string commodity;
    int timeIndex = -1;
};

/// Immutable after assembly. Always a minimization.
struct SparseProblem {
    std::string name = "MINFINE";
    int numVars = 0;
    std::vector<double> lowerBounds;
    std::vector<double> upperBounds;
    std::vector<double> objective;
    std::vector<unsigned char> integrality;  // binaries only
    double objectiveConstant = 0.0;
    std::vector<RowDef> rows;
    std::vector<VariableRef> varTable;
    // Explicit column names, e.g. read back from MPS. Empty -> derived
    // from varTable (or x<i> as a last resort).
    std::vector<std::string> colNames;
    std::optional<AggregationInfo> aggregation;
    std::vector<BalanceRef> balanceRefs;

    int addVariable(VariableRef ref, double lower, double upper, double cost,
                    bool integral = false);
    /// Sums duplicate (row, col) pairs, drops exact zeros, rejects rows
    /// without a nonzero entry.
    int addRow(RowDef row);

    std::string columnName(int j) const;
    int findRow(const std::string& tag) const;  // -1 when absent
    bool isMip() const;
    void checkConsistent() const;  // throws Error on broken invariants
};

}  // namespace minfine
