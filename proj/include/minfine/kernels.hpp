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

#include <vector>

#include "minfine/problem.hpp"

// Data-parallel inner loops. Every kernel has an OpenMP path and a serial
// reference; both run the same per-element arithmetic in the same order,
// so results are bit-identical for any thread count.
namespace minfine::kernels {

/// Thread count from MINFINE_THREADS (default 1, clamped to [1, 256]).
int thread_count();

/// Squared Euclidean distances between all row pairs of a row-major
/// n x d matrix; out is n x n, symmetric, zero diagonal.
void pairwise_sqdist(const double* points, int n, int d, double* out,
                     int threads);
void pairwise_sqdist_serial(const double* points, int n, int d, double* out);

/// activities[i] = sum over row i entries of coeff * x[col], accumulated
/// in stored entry order.
void row_activities(const SparseProblem& problem, const double* x,
                    double* activities, int threads);
void row_activities_serial(const SparseProblem& problem, const double* x,
                           double* activities);

/// Best cost change over all (medoid, non-medoid) swaps of a PAM state.
/// nearest[i] is the point id of i's closest medoid; dNearest/dSecond are
/// the distances to the closest and second-closest medoids.
struct SwapChoice {
    double delta = 0.0;  // < 0 only when an improving swap exists
    int medoidPos = -1;
    int candidate = -1;
};

SwapChoice best_swap(const double* dist, int n, const std::vector<int>& medoids,
                     const std::vector<int>& nearest,
                     const std::vector<double>& dNearest,
                     const std::vector<double>& dSecond, int threads);
SwapChoice best_swap_serial(const double* dist, int n,
                            const std::vector<int>& medoids,
                            const std::vector<int>& nearest,
                            const std::vector<double>& dNearest,
                            const std::vector<double>& dSecond);

}  // namespace minfine::kernels
