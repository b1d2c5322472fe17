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

#include "minfine/kernels.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace minfine::kernels {

int thread_count() {
    const char* env = std::getenv("MINFINE_THREADS");
    if (env == nullptr) return 1;
    long n = std::strtol(env, nullptr, 10);
    if (n < 1) return 1;
    if (n > 256) return 256;
    return static_cast<int>(n);
}

namespace {

inline double sqdist_rows(const double* a, const double* b, int d) {
    double s = 0.0;
    for (int t = 0; t < d; ++t) {
        double diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

inline double row_activity(const RowDef& row, const double* x) {
    double s = 0.0;
    for (const auto& [col, coeff] : row.entries) s += coeff * x[col];
    return s;
}

/// Cost change of replacing medoid m by candidate h; points are scanned
/// in ascending order, so the sum is schedule-independent.
inline double swap_delta(const double* dist, int n, int m, int h,
                         const std::vector<int>& nearest,
                         const std::vector<double>& dNearest,
                         const std::vector<double>& dSecond) {
    double delta = 0.0;
    const double* dh = dist + static_cast<std::size_t>(h) * n;
    for (int i = 0; i < n; ++i) {
        double toH = dh[i];
        if (nearest[i] == m) {
            delta += std::min(toH, dSecond[i]) - dNearest[i];
        } else if (toH < dNearest[i]) {
            delta += toH - dNearest[i];
        }
    }
    return delta;
}

inline bool swap_better(double delta, int medoidPos, int candidate,
                        const SwapChoice& best) {
    if (best.candidate < 0) return true;
    if (delta != best.delta) return delta < best.delta;
    if (medoidPos != best.medoidPos) return medoidPos < best.medoidPos;
    return candidate < best.candidate;
}

}  // namespace

void pairwise_sqdist_serial(const double* points, int n, int d, double* out) {
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i) * n + i] = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double s = sqdist_rows(points + static_cast<std::size_t>(i) * d,
                                   points + static_cast<std::size_t>(j) * d, d);
            out[static_cast<std::size_t>(i) * n + j] = s;
            out[static_cast<std::size_t>(j) * n + i] = s;
        }
    }
}

void pairwise_sqdist(const double* points, int n, int d, double* out,
                     int threads) {
#ifdef _OPENMP
    if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i) * n + i] = 0.0;
            for (int j = i + 1; j < n; ++j) {
                double s = sqdist_rows(points + static_cast<std::size_t>(i) * d,
                                       points + static_cast<std::size_t>(j) * d,
                                       d);
                out[static_cast<std::size_t>(i) * n + j] = s;
                out[static_cast<std::size_t>(j) * n + i] = s;
            }
        }
        return;
    }
#else
    (void)threads;
#endif
    pairwise_sqdist_serial(points, n, d, out);
}

void row_activities_serial(const SparseProblem& problem, const double* x,
                           double* activities) {
    int m = static_cast<int>(problem.rows.size());
    for (int i = 0; i < m; ++i) {
        activities[i] = row_activity(problem.rows[i], x);
    }
}

void row_activities(const SparseProblem& problem, const double* x,
                    double* activities, int threads) {
#ifdef _OPENMP
    if (threads > 1) {
        int m = static_cast<int>(problem.rows.size());
#pragma omp parallel for schedule(static) num_threads(threads)
        for (int i = 0; i < m; ++i) {
            activities[i] = row_activity(problem.rows[i], x);
        }
        return;
    }
#else
    (void)threads;
#endif
    row_activities_serial(problem, x, activities);
}

SwapChoice best_swap_serial(const double* dist, int n,
                            const std::vector<int>& medoids,
                            const std::vector<int>& nearest,
                            const std::vector<double>& dNearest,
                            const std::vector<double>& dSecond) {
    SwapChoice best;
    int k = static_cast<int>(medoids.size());
    for (int mp = 0; mp < k; ++mp) {
        for (int h = 0; h < n; ++h) {
            if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) {
                continue;
            }
            double delta =
                swap_delta(dist, n, medoids[mp], h, nearest, dNearest, dSecond);
            if (swap_better(delta, mp, h, best)) {
                best = {delta, mp, h};
            }
        }
    }
    return best;
}

SwapChoice best_swap(const double* dist, int n, const std::vector<int>& medoids,
                     const std::vector<int>& nearest,
                     const std::vector<double>& dNearest,
                     const std::vector<double>& dSecond, int threads) {
#ifdef _OPENMP
    if (threads > 1) {
        int k = static_cast<int>(medoids.size());
        std::vector<SwapChoice> perThread(threads);
#pragma omp parallel num_threads(threads)
        {
            int tid = omp_get_thread_num();
            SwapChoice local;
#pragma omp for schedule(static) collapse(2)
            for (int mp = 0; mp < k; ++mp) {
                for (int h = 0; h < n; ++h) {
                    if (std::find(medoids.begin(), medoids.end(), h) !=
                        medoids.end()) {
                        continue;
                    }
                    double delta = swap_delta(dist, n, medoids[mp], h, nearest,
                                              dNearest, dSecond);
                    if (swap_better(delta, mp, h, local)) {
                        local = {delta, mp, h};
                    }
                }
            }
            perThread[tid] = local;
        }
        SwapChoice best;
        // The (delta, medoidPos, candidate) order is total, so merging
        // per-thread winners in any order yields the same choice.
        for (const auto& c : perThread) {
            if (c.candidate >= 0 && swap_better(c.delta, c.medoidPos, c.candidate, best)) {
                best = c;
            }
        }
        return best;
    }
#else
    (void)threads;
#endif
    return best_swap_serial(dist, n, medoids, nearest, dNearest, dSecond);
}

}  // namespace minfine::kernels
