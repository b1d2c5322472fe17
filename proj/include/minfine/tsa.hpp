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
#include <string>
#include <vector>

#include "minfine/model.hpp"

namespace minfine {

/// "component <US> region <US> attribute" map key for per-series data.
std::string series_key(const std::string& component, const std::string& region,
                       const std::string& attribute);

/// The model's time series cut into N_p periods of P steps, min-max
/// normalized per attribute (constant attributes map to 0).
struct PeriodSegmentation {
    int periodLength = 0;  // P
    int numPeriods = 0;    // N_p
    int numAttributes = 0;
    std::vector<std::string> attributeKeys;  // deterministic order
    std::vector<double> matrix;  // N_p rows x (P * numAttributes), row-major
};

PeriodSegmentation segment(const EnergySystemModel& model, int periodLength);

struct ClusteringResult {
    std::vector<int> medoids;     // ascending original-period ids
    std::vector<int> assignment;  // per period: cluster id in [0, k)
    double totalDistance = 0.0;   // sum of squared distances to medoids
};

/// PAM k-medoids on the rows of a row-major matrix: deterministic greedy
/// BUILD, then best-improvement SWAP passes (at most maxIter) with ties
/// broken by lowest index. The seed is accepted for interface stability;
/// the algorithm is deterministic and does not consume it.
ClusteringResult kmedoids(const std::vector<double>& matrix, int numRows,
                          int numCols, int k, unsigned seed, int maxIter = 1000);

struct TypicalPeriodSet {
    int periodLength = 0;  // P
    int numClusters = 0;   // k
    int numPeriods = 0;    // N_p
    std::vector<int> medoidIndices;  // per cluster, ascending
    std::vector<int> weights;        // cluster sizes, sum to N_p
    std::vector<int> orderingMap;    // sigma, length N_p
    // Medoid periods' original values, verbatim; k*P entries per key.
    std::map<std::string, std::vector<double>> typicalSeries;
    double totalWithinClusterDistance = 0.0;
};

TypicalPeriodSet aggregate(const EnergySystemModel& model, int periodLength,
                           int numClusters, unsigned seed);

/// Throws Error when tps does not fit the model (wrong period split,
/// broken weights/ordering, or missing series).
void check_aggregation(const EnergySystemModel& model,
                       const TypicalPeriodSet& tps);

}  // namespace minfine
