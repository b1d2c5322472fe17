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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "minfine/solve.hpp"

namespace minfine {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iterationLimit: return "iterationLimit";
        case SolveStatus::nodeLimit: return "nodeLimit";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-11;
constexpr int kRefactorInterval = 50;

using SparseCol = std::vector<std::pair<int, double>>;

/// Dense LU with partial pivoting of the current basis matrix, plus a
/// product-form eta file for the pivots since the last refactorization.
class BasisFactor {
  public:
    void factor(const std::vector<SparseCol*>& basisCols) {
        m_ = static_cast<int>(basisCols.size());
        lu_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
        piv_.resize(m_);
        etas_.clear();
        for (int j = 0; j < m_; ++j) {
            for (const auto& [i, v] : *basisCols[j]) lu_[idx(i, j)] = v;
        }
        for (int k = 0; k < m_; ++k) {
            int p = k;
            double best = std::fabs(lu_[idx(k, k)]);
            for (int i = k + 1; i < m_; ++i) {
                double a = std::fabs(lu_[idx(i, k)]);
                if (a > best) {
                    best = a;
                    p = i;
                }
            }
            if (best < 1e-13) throw Error("singular basis factorization");
            piv_[k] = p;
            if (p != k) {
                for (int j = 0; j < m_; ++j) std::swap(lu_[idx(k, j)], lu_[idx(p, j)]);
            }
            double inv = 1.0 / lu_[idx(k, k)];
            for (int i = k + 1; i < m_; ++i) {
                double f = lu_[idx(i, k)] * inv;
                lu_[idx(i, k)] = f;
                if (f != 0.0) {
                    for (int j = k + 1; j < m_; ++j) {
                        lu_[idx(i, j)] -= f * lu_[idx(k, j)];
                    }
                }
            }
        }
    }

    // z = B^{-1} v
    void ftran(std::vector<double>& v) const {
        for (int k = 0; k < m_; ++k) {
            if (piv_[k] != k) std::swap(v[k], v[piv_[k]]);
        }
        for (int i = 1; i < m_; ++i) {
            double s = v[i];
            for (int j = 0; j < i; ++j) s -= lu_[idx(i, j)] * v[j];
            v[i] = s;
        }
        for (int i = m_ - 1; i >= 0; --i) {
            double s = v[i];
            for (int j = i + 1; j < m_; ++j) s -= lu_[idx(i, j)] * v[j];
            v[i] = s / lu_[idx(i, i)];
        }
        for (const auto& eta : etas_) {
            double zr = v[eta.slot] / eta.w[eta.slot];
            for (int i = 0; i < m_; ++i) v[i] -= eta.w[i] * zr;
            v[eta.slot] = zr;
        }
    }

    // y with B^T y = c
    void btran(std::vector<double>& c) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = c[it->slot];
            for (int i = 0; i < m_; ++i) {
                if (i != it->slot) s -= it->w[i] * c[i];
            }
            c[it->slot] = s / it->w[it->slot];
        }
        for (int i = 0; i < m_; ++i) {
            double s = c[i];
            for (int j = 0; j < i; ++j) s -= lu_[idx(j, i)] * c[j];
            c[i] = s / lu_[idx(i, i)];
        }
        for (int i = m_ - 1; i >= 0; --i) {
            double s = c[i];
            for (int j = i + 1; j < m_; ++j) s -= lu_[idx(j, i)] * c[j];
            c[i] = s;
        }
        for (int k = m_ - 1; k >= 0; --k) {
            if (piv_[k] != k) std::swap(c[k], c[piv_[k]]);
        }
    }

    /// Records the pivot "entering column image w replaces basis slot r".
    void pushEta(int slot, std::vector<double> w) {
        etas_.push_back({slot, std::move(w)});
    }

    int etaCount() const { return static_cast<int>(etas_.size()); }

  private:
    struct Eta {
        int slot;
        std::vector<double> w;
    };

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * m_ + j;
    }

    int m_ = 0;
    std::vector<double> lu_;
    std::vector<int> piv_;
    std::vector<Eta> etas_;
};

enum class VarStatus : unsigned char { basic, atLower, atUpper, freeZero };

/// Bounded-variable primal simplex over the equality form
/// [A | I_slack] x = rhs with per-column bounds; artificials carry the
/// phase-1 objective.
class Simplex {
  public:
    Simplex(const SparseProblem& problem, const LpOptions& options)
        : prob_(problem), opt_(options) {
        n_ = problem.numVars;
        m_ = static_cast<int>(problem.rows.size());
        total_ = n_ + 2 * m_;  // structurals, slacks, artificials
        cols_.resize(total_);
        lb_.assign(total_, 0.0);
        ub_.assign(total_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lb_[j] = problem.lowerBounds[j];
            ub_[j] = problem.upperBounds[j];
        }
        for (int i = 0; i < m_; ++i) {
            const RowDef& row = problem.rows[i];
            for (const auto& [col, coeff] : row.entries) {
                cols_[col].emplace_back(i, coeff);
            }
            int s = slackCol(i);
            cols_[s] = {{i, 1.0}};
            switch (row.sense) {
                case RowSense::lessEqual:
                    lb_[s] = 0.0;
                    ub_[s] = kInf;
                    break;
                case RowSense::greaterEqual:
                    lb_[s] = -kInf;
                    ub_[s] = 0.0;
                    break;
                case RowSense::equal:
                    lb_[s] = 0.0;
                    ub_[s] = 0.0;
                    break;
            }
            rhs_.push_back(row.rhs);
        }
    }

    Solution run() {
        auto t0 = std::chrono::steady_clock::now();
        Solution sol;
        SolveStatus status = solve();
        sol.status = status;
        sol.stats.iterations = iterations_;
        sol.stats.refactorizations = refactorizations_;
        bool havePoint = status == SolveStatus::optimal ||
                         (status == SolveStatus::iterationLimit && phase1Complete_);
        if (havePoint) {
            sol.primal.assign(x_.begin(), x_.begin() + n_);
            double obj = prob_.objectiveConstant;
            for (int j = 0; j < n_; ++j) obj += prob_.objective[j] * sol.primal[j];
            sol.objective = obj;
            sol.duals = rowDuals();
        }
        sol.stats.wallTimeSeconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return sol;
    }

  private:
    int slackCol(int i) const { return n_ + i; }
    int artCol(int i) const { return n_ + m_ + i; }
    bool isArtificial(int j) const { return j >= n_ + m_; }

    SolveStatus solve() {
        prepareStart();
        if (m_ > 0) {
            // Phase 1: minimize the artificial infeasibility.
            std::vector<double> phase1Cost(total_, 0.0);
            for (int i = 0; i < m_; ++i) phase1Cost[artCol(i)] = 1.0;
            SolveStatus st = iterate(phase1Cost, /*phase1=*/true);
            if (st == SolveStatus::iterationLimit) return st;
            if (st == SolveStatus::unbounded) {
                throw Error("simplex phase 1 diverged");
            }
            double infeas = 0.0;
            double scale = 1.0;
            for (int i = 0; i < m_; ++i) {
                infeas += std::fabs(x_[artCol(i)]);
                scale = std::max(scale, std::fabs(rhs_[i]));
            }
            if (infeas > opt_.tolPrimal * scale * m_ + opt_.tolPrimal) {
                return SolveStatus::infeasible;
            }
            // Pin artificials to zero for phase 2.
            for (int i = 0; i < m_; ++i) {
                int a = artCol(i);
                lb_[a] = ub_[a] = 0.0;
                if (status_[a] != VarStatus::basic) {
                    x_[a] = 0.0;
                    status_[a] = VarStatus::atLower;
                }
            }
        }
        phase1Complete_ = true;
        std::vector<double> cost(total_, 0.0);
        for (int j = 0; j < n_; ++j) cost[j] = prob_.objective[j];
        SolveStatus st = iterate(cost, /*phase1=*/false);
        if (st == SolveStatus::optimal || st == SolveStatus::iterationLimit) {
            refresh();
        }
        finalCost_ = std::move(cost);
        return st;
    }

    void prepareStart() {
        x_.assign(total_, 0.0);
        status_.assign(total_, VarStatus::atLower);
        basic_.clear();
        for (int j = 0; j < n_ + m_; ++j) {
            if (is_finite(lb_[j])) {
                x_[j] = lb_[j];
                status_[j] = VarStatus::atLower;
            } else if (is_finite(ub_[j])) {
                x_[j] = ub_[j];
                status_[j] = VarStatus::atUpper;
            } else {
                x_[j] = 0.0;
                status_[j] = VarStatus::freeZero;
            }
        }
        std::vector<double> activity(m_, 0.0);
        for (int j = 0; j < n_ + m_; ++j) {
            if (x_[j] != 0.0) {
                for (const auto& [i, v] : cols_[j]) activity[i] += v * x_[j];
            }
        }
        for (int i = 0; i < m_; ++i) {
            double r = rhs_[i] - activity[i];
            int a = artCol(i);
            cols_[a] = {{i, r >= 0.0 ? 1.0 : -1.0}};
            lb_[a] = 0.0;
            ub_[a] = kInf;
            x_[a] = std::fabs(r);
            status_[a] = VarStatus::basic;
            basic_.push_back(a);
        }
        refactor();
    }

    void refactor() {
        std::vector<SparseCol*> basisCols(m_);
        for (int i = 0; i < m_; ++i) basisCols[i] = &cols_[basic_[i]];
        factor_.factor(basisCols);
        ++refactorizations_;
    }

    /// Recomputes basic values from a fresh factorization.
    void refresh() {
        if (m_ == 0) return;
        refactor();
        std::vector<double> v(m_, 0.0);
        for (int i = 0; i < m_; ++i) v[i] = rhs_[i];
        for (int j = 0; j < total_; ++j) {
            if (status_[j] != VarStatus::basic && x_[j] != 0.0) {
                for (const auto& [i, a] : cols_[j]) v[i] -= a * x_[j];
            }
        }
        factor_.ftran(v);
        for (int i = 0; i < m_; ++i) x_[basic_[i]] = v[i];
    }

    std::vector<double> rowDuals() {
        std::vector<double> y(m_, 0.0);
        if (m_ == 0) return y;
        for (int i = 0; i < m_; ++i) y[i] = finalCost_[basic_[i]];
        factor_.btran(y);
        return y;
    }

    SolveStatus iterate(const std::vector<double>& cost, bool phase1) {
        std::vector<double> y(m_);
        std::vector<double> w(m_);
        while (true) {
            if (iterations_ >= opt_.maxIter) return SolveStatus::iterationLimit;
            // BTRAN: duals of the current basis.
            for (int i = 0; i < m_; ++i) y[i] = cost[basic_[i]];
            factor_.btran(y);

            int entering = -1;
            int direction = 0;
            double bestScore = opt_.tolDual;
            for (int j = 0; j < total_; ++j) {
                VarStatus st = status_[j];
                if (st == VarStatus::basic || lb_[j] == ub_[j]) continue;
                if (phase1 && isArtificial(j) && st != VarStatus::basic) continue;
                double d = cost[j];
                for (const auto& [i, v] : cols_[j]) d -= y[i] * v;
                int dir = 0;
                double score = 0.0;
                if (st == VarStatus::atLower && d < -opt_.tolDual) {
                    dir = 1;
                    score = -d;
                } else if (st == VarStatus::atUpper && d > opt_.tolDual) {
                    dir = -1;
                    score = d;
                } else if (st == VarStatus::freeZero && std::fabs(d) > opt_.tolDual) {
                    dir = d > 0.0 ? -1 : 1;
                    score = std::fabs(d);
                } else {
                    continue;
                }
                if (bland_) {
                    entering = j;
                    direction = dir;
                    break;
                }
                if (score > bestScore) {
                    bestScore = score;
                    entering = j;
                    direction = dir;
                }
            }
            if (entering < 0) return SolveStatus::optimal;

            // FTRAN: image of the entering column in the current basis.
            std::fill(w.begin(), w.end(), 0.0);
            for (const auto& [i, v] : cols_[entering]) w[i] = v;
            factor_.ftran(w);

            double boundStep = kInf;
            if (is_finite(lb_[entering]) && is_finite(ub_[entering])) {
                boundStep = ub_[entering] - lb_[entering];
            }
            int leaveSlot = -1;
            double minStep = kInf;
            double leavePivot = 0.0;
            bool leaveToLower = true;
            for (int i = 0; i < m_; ++i) {
                double delta = direction * w[i];
                if (std::fabs(delta) <= kPivotTol) continue;
                int b = basic_[i];
                double step;
                bool toLower;
                if (delta > 0.0) {
                    if (!is_finite(lb_[b])) continue;
                    step = (x_[b] - lb_[b]) / delta;
                    toLower = true;
                } else {
                    if (!is_finite(ub_[b])) continue;
                    step = (ub_[b] - x_[b]) / (-delta);
                    toLower = false;
                }
                if (step < 0.0) step = 0.0;
                bool better;
                if (bland_) {
                    better = step < minStep - 1e-12 ||
                             (step <= minStep + 1e-12 &&
                              (leaveSlot < 0 || b < basic_[leaveSlot]));
                } else {
                    better = step < minStep * (1.0 - 1e-10) - 1e-15 ||
                             (step <= minStep * (1.0 + 1e-10) + 1e-15 &&
                              std::fabs(delta) > std::fabs(leavePivot));
                }
                if (leaveSlot < 0 || better) {
                    if (leaveSlot < 0 || step < minStep) minStep = step;
                    leaveSlot = i;
                    leavePivot = delta;
                    leaveToLower = toLower;
                }
            }

            double step = std::min(boundStep, minStep);
            if (!is_finite(step)) return SolveStatus::unbounded;
            ++iterations_;
            if (step <= kDegenerateStep) {
                if (++degeneratePivots_ > 3L * (total_ + m_)) bland_ = true;
            } else {
                degeneratePivots_ = 0;
            }

            if (is_finite(boundStep) && (leaveSlot < 0 || boundStep <= minStep)) {
                // Bound flip: the entering variable crosses to its other bound.
                for (int i = 0; i < m_; ++i) {
                    x_[basic_[i]] -= direction * w[i] * step;
                }
                if (direction > 0) {
                    x_[entering] = ub_[entering];
                    status_[entering] = VarStatus::atUpper;
                } else {
                    x_[entering] = lb_[entering];
                    status_[entering] = VarStatus::atLower;
                }
                continue;
            }

            for (int i = 0; i < m_; ++i) {
                x_[basic_[i]] -= direction * w[i] * step;
            }
            x_[entering] += direction * step;
            int leaving = basic_[leaveSlot];
            x_[leaving] = leaveToLower ? lb_[leaving] : ub_[leaving];
            status_[leaving] = leaveToLower ? VarStatus::atLower : VarStatus::atUpper;
            status_[entering] = VarStatus::basic;
            basic_[leaveSlot] = entering;
            if (factor_.etaCount() + 1 >= kRefactorInterval ||
                std::fabs(w[leaveSlot]) < 1e-7) {
                refactor();
            } else {
                factor_.pushEta(leaveSlot, w);
            }
        }
    }

    const SparseProblem& prob_;
    LpOptions opt_;
    int n_ = 0;
    int m_ = 0;
    int total_ = 0;
    std::vector<SparseCol> cols_;
    std::vector<double> lb_, ub_, rhs_, x_;
    std::vector<VarStatus> status_;
    std::vector<int> basic_;
    std::vector<double> finalCost_;
    BasisFactor factor_;
    long iterations_ = 0;
    long refactorizations_ = 0;
    long degeneratePivots_ = 0;
    bool bland_ = false;
    bool phase1Complete_ = false;
};

}  // namespace

Solution solve_lp(const SparseProblem& problem, const LpOptions& options) {
    problem.checkConsistent();
    Simplex simplex(problem, options);
    return simplex.run();
}

}  // namespace minfine
