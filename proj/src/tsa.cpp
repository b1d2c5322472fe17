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

#include "minfine/tsa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "minfine/kernels.hpp"

namespace minfine {

std::string series_key(const std::string& component, const std::string& region,
                       const std::string& attribute) {
    return component + '\x1f' + region + '\x1f' + attribute;
}

namespace {

/// Visits every time series of the model in deterministic
/// (component, region, attribute-name) order.
void for_each_series(
    const EnergySystemModel& model,
    const std::function<void(const std::string& component,
                             const std::string& region,
                             const std::string& attribute,
                             const std::vector<double>& values)>& visit) {
    for (const auto& comp : model.components) {
        const auto* ss = std::get_if<SourceSinkSpec>(&comp);
        if (ss == nullptr) continue;
        for (const auto& region : model.regions) {
            if (std::find(ss->regions.begin(), ss->regions.end(), region) ==
                ss->regions.end()) {
                continue;
            }
            if (ss->operationRateFix) {
                auto it = ss->operationRateFix->find(region);
                if (it != ss->operationRateFix->end()) {
                    visit(ss->name, region, "operationRateFix", it->second);
                }
            }
            if (ss->operationRateMax) {
                auto it = ss->operationRateMax->find(region);
                if (it != ss->operationRateMax->end()) {
                    visit(ss->name, region, "operationRateMax", it->second);
                }
            }
        }
    }
}

}  // namespace

PeriodSegmentation segment(const EnergySystemModel& model, int periodLength) {
    int numSteps = model.time.numSteps;
    if (periodLength < 1) {
        throw Error("period length must be >= 1");
    }
    if (numSteps % periodLength != 0) {
        throw Error(std::to_string(numSteps) + " not divisible by " +
                    std::to_string(periodLength));
    }
    PeriodSegmentation seg;
    seg.periodLength = periodLength;
    seg.numPeriods = numSteps / periodLength;

    std::vector<const std::vector<double>*> series;
    for_each_series(model, [&](const std::string& comp, const std::string& region,
                               const std::string& attr,
                               const std::vector<double>& values) {
        seg.attributeKeys.push_back(series_key(comp, region, attr));
        series.push_back(&values);
    });
    if (series.empty()) {
        throw Error("model has no time series to aggregate");
    }
    seg.numAttributes = static_cast<int>(series.size());

    int rowLen = seg.periodLength * seg.numAttributes;
    seg.matrix.assign(static_cast<std::size_t>(seg.numPeriods) * rowLen, 0.0);
    for (int a = 0; a < seg.numAttributes; ++a) {
        const std::vector<double>& values = *series[a];
        double lo = values[0];
        double hi = values[0];
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double range = hi - lo;
        for (int p = 0; p < seg.numPeriods; ++p) {
            for (int tau = 0; tau < periodLength; ++tau) {
                double v = values[static_cast<std::size_t>(p) * periodLength + tau];
                double norm = range > 0.0 ? (v - lo) / range : 0.0;
                seg.matrix[static_cast<std::size_t>(p) * rowLen +
                           a * periodLength + tau] = norm;
            }
        }
    }
    return seg;
}

ClusteringResult kmedoids(const std::vector<double>& matrix, int numRows,
                          int numCols, int k, unsigned seed, int maxIter) {
    (void)seed;
    if (numRows < 1 || static_cast<std::size_t>(numRows) * numCols != matrix.size()) {
        throw Error("profile matrix shape mismatch");
    }
    if (k < 1 || k > numRows) {
        throw Error("cluster count " + std::to_string(k) + " outside [1, " +
                    std::to_string(numRows) + "]");
    }
    int n = numRows;
    int threads = kernels::thread_count();
    std::vector<double> dist(static_cast<std::size_t>(n) * n);
    kernels::pairwise_sqdist(matrix.data(), n, numCols, dist.data(), threads);
    auto d = [&](int i, int j) -> double {
        return dist[static_cast<std::size_t>(i) * n + j];
    };

    // BUILD: first medoid minimizes the summed distance, each further one
    // maximizes the cost reduction; ties go to the lowest index.
    std::vector<int> medoids;
    std::vector<double> dNearest(n, kInf);
    {
        int best = -1;
        double bestCost = kInf;
        for (int j = 0; j < n; ++j) {
            double cost = 0.0;
            for (int i = 0; i < n; ++i) cost += d(i, j);
            if (cost < bestCost) {
                bestCost = cost;
                best = j;
            }
        }
        medoids.push_back(best);
        for (int i = 0; i < n; ++i) dNearest[i] = d(i, best);
    }
    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double bestGain = -kInf;
        for (int h = 0; h < n; ++h) {
            if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) {
                continue;
            }
            double gain = 0.0;
            for (int i = 0; i < n; ++i) {
                gain += std::max(0.0, dNearest[i] - d(i, h));
            }
            if (gain > bestGain) {
                bestGain = gain;
                best = h;
            }
        }
        medoids.push_back(best);
        for (int i = 0; i < n; ++i) dNearest[i] = std::min(dNearest[i], d(i, best));
    }

    // nearest/second-nearest bookkeeping for the SWAP scan.
    std::vector<int> nearest(n, -1);
    std::vector<double> dSecond(n, kInf);
    auto recompute = [&]() {
        for (int i = 0; i < n; ++i) {
            int bestM = -1;
            double best = kInf;
            double second = kInf;
            for (int m : medoids) {
                double dim = d(i, m);
                if (dim < best || (dim == best && (bestM < 0 || m < bestM))) {
                    second = best;
                    best = dim;
                    bestM = m;
                } else if (dim < second) {
                    second = dim;
                }
            }
            nearest[i] = bestM;
            dNearest[i] = best;
            dSecond[i] = second;
        }
    };
    recompute();

    for (int pass = 0; pass < maxIter; ++pass) {
        kernels::SwapChoice choice = kernels::best_swap(
            dist.data(), n, medoids, nearest, dNearest, dSecond, threads);
        if (choice.candidate < 0 || choice.delta >= -1e-12) break;
        medoids[choice.medoidPos] = choice.candidate;
        recompute();
    }

    ClusteringResult result;
    result.medoids = medoids;
    std::sort(result.medoids.begin(), result.medoids.end());
    result.assignment.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        int bestCluster = -1;
        double best = kInf;
        for (int c = 0; c < k; ++c) {
            double dim = d(i, result.medoids[c]);
            if (dim < best) {
                best = dim;
                bestCluster = c;
            }
        }
        result.assignment[i] = bestCluster;
        result.totalDistance += best;
    }
    // A medoid always belongs to its own cluster, also under duplicates.
    for (int c = 0; c < k; ++c) result.assignment[result.medoids[c]] = c;
    return result;
}

TypicalPeriodSet aggregate(const EnergySystemModel& model, int periodLength,
                           int numClusters, unsigned seed) {
    PeriodSegmentation seg = segment(model, periodLength);
    ClusteringResult clusters =
        kmedoids(seg.matrix, seg.numPeriods,
                 seg.periodLength * seg.numAttributes, numClusters, seed);

    TypicalPeriodSet tps;
    tps.periodLength = periodLength;
    tps.numClusters = numClusters;
    tps.numPeriods = seg.numPeriods;
    tps.medoidIndices = clusters.medoids;
    tps.orderingMap = clusters.assignment;
    tps.totalWithinClusterDistance = clusters.totalDistance;
    tps.weights.assign(numClusters, 0);
    for (int c : clusters.assignment) tps.weights[c] += 1;

    for_each_series(model, [&](const std::string& comp, const std::string& region,
                               const std::string& attr,
                               const std::vector<double>& values) {
        std::vector<double> typical;
        typical.reserve(static_cast<std::size_t>(numClusters) * periodLength);
        for (int c = 0; c < numClusters; ++c) {
            int p = tps.medoidIndices[c];
            for (int tau = 0; tau < periodLength; ++tau) {
                typical.push_back(
                    values[static_cast<std::size_t>(p) * periodLength + tau]);
            }
        }
        tps.typicalSeries[series_key(comp, region, attr)] = std::move(typical);
    });
    return tps;
}

void check_aggregation(const EnergySystemModel& model,
                       const TypicalPeriodSet& tps) {
    if (tps.periodLength < 1 || tps.numClusters < 1) {
        throw Error("aggregation has an empty period or cluster set");
    }
    if (tps.numPeriods * tps.periodLength != model.time.numSteps) {
        throw Error("aggregation period split " + std::to_string(tps.numPeriods) +
                    "x" + std::to_string(tps.periodLength) +
                    " does not match the model horizon " +
                    std::to_string(model.time.numSteps));
    }
    if (static_cast<int>(tps.orderingMap.size()) != tps.numPeriods) {
        throw Error("ordering map length mismatch");
    }
    for (int c : tps.orderingMap) {
        if (c < 0 || c >= tps.numClusters) {
            throw Error("ordering map references cluster " + std::to_string(c));
        }
    }
    if (static_cast<int>(tps.weights.size()) != tps.numClusters) {
        throw Error("weight vector length mismatch");
    }
    int total = 0;
    for (int w : tps.weights) total += w;
    if (total != tps.numPeriods) {
        throw Error("cluster weights sum to " + std::to_string(total) +
                    ", expected " + std::to_string(tps.numPeriods));
    }
    int typicalSteps = tps.numClusters * tps.periodLength;
    for_each_series(model, [&](const std::string& comp, const std::string& region,
                               const std::string& attr,
                               const std::vector<double>& values) {
        (void)values;
        auto it = tps.typicalSeries.find(series_key(comp, region, attr));
        if (it == tps.typicalSeries.end()) {
            throw Error("aggregation misses the series for " + comp + "/" +
                        region + "/" + attr);
        }
        if (static_cast<int>(it->second.size()) != typicalSteps) {
            throw Error("typical series for " + comp + "/" + region + "/" + attr +
                        " has wrong length");
        }
    });
}

}  // namespace minfine
