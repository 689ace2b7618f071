// Copyright (2026) the mipdive project
//
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

#ifndef MIPDIVE_SIMPLEX_HPP_
#define MIPDIVE_SIMPLEX_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mipdive/mip.hpp"

namespace mipdive {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> solution;  // length n, valid iff kOptimal
  double objective = 0.0;        // valid iff kOptimal
  int iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  // 0 means the default cap of 50 * (num_vars + num_cons).
  int iteration_cap = 0;
};

namespace detail {

// Bounded-variable primal simplex over the equality system [A | I] x = b
// with an explicit dense basis inverse. Phase 1 installs artificial columns
// for rows whose slack starts below zero and minimizes their sum; phase 2
// minimizes the true objective. Pricing is Dantzig by default and switches
// to Bland's rule after a streak of degenerate pivots, which guarantees
// termination; the leaving-variable tie break is always the lowest column
// index.
class BoundedSimplex {
 public:
  BoundedSimplex(const MipInstance& inst, const SimplexOptions& opts)
      : n_(inst.num_vars), m_(inst.num_cons), opts_(opts) {
    cols_.resize(n_ + m_);
    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    cost_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = inst.lower[j];
      upper_[j] = inst.upper[j];
      cost_[j] = inst.objective[j];
    }
    for (const Triplet& t : inst.matrix)
      cols_[t.col].push_back({t.row, t.value});
    for (int i = 0; i < m_; ++i) {
      cols_[n_ + i].push_back({i, 1.0});
      lower_[n_ + i] = 0.0;
      upper_[n_ + i] = kInf;
    }
    rhs_ = inst.rhs;
  }

  LpResult run() {
    LpResult out;
    const int cap = opts_.iteration_cap > 0 ? opts_.iteration_cap
                                            : 50 * (n_ + m_ + 1);
    init_basis();
    if (needs_phase1()) {
      install_artificials();
      const PivotOutcome ph1 = iterate(/*phase1=*/true, cap);
      out.iterations = iterations_;
      if (ph1 == PivotOutcome::kIterationLimit) {
        out.status = LpStatus::kIterationLimit;
        return out;
      }
      double infeas = 0.0;
      for (int j = first_artificial_; j < num_cols(); ++j) infeas += value_of(j);
      if (infeas > 10 * opts_.feas_tol) {
        out.status = LpStatus::kInfeasible;
        return out;
      }
      retire_artificials();
    }
    const PivotOutcome ph2 = iterate(/*phase1=*/false, cap);
    out.iterations = iterations_;
    if (ph2 == PivotOutcome::kIterationLimit) {
      out.status = LpStatus::kIterationLimit;
      return out;
    }
    if (ph2 == PivotOutcome::kUnbounded) {
      out.status = LpStatus::kUnbounded;
      return out;
    }
    refactorize();
    out.solution.resize(n_);
    for (int j = 0; j < n_; ++j) {
      double v = value_of(j);
      // Snap hairline bound violations left by floating-point updates.
      if (v < lower_[j] && v > lower_[j] - 1e-6) v = lower_[j];
      if (v > upper_[j] && v < upper_[j] + 1e-6) v = upper_[j];
      out.solution[j] = v;
    }
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += cost_[j] * out.solution[j];
    out.status = numerically_feasible(out.solution) ? LpStatus::kOptimal
                                                    : LpStatus::kIterationLimit;
    return out;
  }

 private:
  enum class VarState : uint8_t { kBasic, kAtLower, kAtUpper, kFree };
  enum class PivotOutcome { kOptimal, kUnbounded, kIterationLimit };

  int num_cols() const { return static_cast<int>(cols_.size()); }

  double value_of(int j) const {
    switch (state_[j]) {
      case VarState::kAtLower:
        return lower_[j];
      case VarState::kAtUpper:
        return upper_[j];
      case VarState::kFree:
        return 0.0;
      case VarState::kBasic:
        return basic_value_[pos_in_basis_[j]];
    }
    return 0.0;
  }

  void init_basis() {
    state_.assign(num_cols(), VarState::kAtLower);
    pos_in_basis_.assign(num_cols(), -1);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lower_[j]))
        state_[j] = VarState::kAtLower;
      else if (std::isfinite(upper_[j]))
        state_[j] = VarState::kAtUpper;
      else
        state_[j] = VarState::kFree;
    }
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::kBasic;
      pos_in_basis_[n_ + i] = i;
    }
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[static_cast<size_t>(i) * m_ + i] = 1.0;
    recompute_basic_values();
  }

  bool needs_phase1() {
    for (int i = 0; i < m_; ++i)
      if (basic_value_[i] < -opts_.feas_tol) return true;
    return false;
  }

  void install_artificials() {
    first_artificial_ = num_cols();
    for (int i = 0; i < m_; ++i) {
      if (basic_value_[i] >= -opts_.feas_tol) continue;
      const int a = num_cols();
      cols_.push_back({{i, -1.0}});
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      cost_.push_back(0.0);
      state_.push_back(VarState::kBasic);
      pos_in_basis_.push_back(i);
      // The slack leaves the basis at its lower bound; the artificial takes
      // its row with value -residual > 0 and the diagonal of binv flips sign.
      const int slack = basis_[i];
      state_[slack] = VarState::kAtLower;
      pos_in_basis_[slack] = -1;
      basis_[i] = a;
      for (int k = 0; k < m_; ++k)
        binv_[static_cast<size_t>(i) * m_ + k] = -binv_[static_cast<size_t>(i) * m_ + k];
      basic_value_[i] = -basic_value_[i];
    }
  }

  void retire_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < first_artificial_) continue;
      // Degenerate pivot to push the zero-valued artificial out; if the row
      // has no eligible column it is redundant and the artificial stays
      // pinned at zero by its bounds.
      int entering = -1;
      for (int q = 0; q < first_artificial_; ++q) {
        if (state_[q] == VarState::kBasic) continue;
        if (upper_[q] - lower_[q] <= 0.0) continue;
        double alpha = 0.0;
        for (const auto& [row, v] : cols_[q])
          alpha += binv_[static_cast<size_t>(i) * m_ + row] * v;
        if (std::fabs(alpha) > 1e-7) {
          entering = q;
          break;
        }
      }
      if (entering >= 0) {
        std::vector<double> w = ftran(entering);
        pivot(entering, i, w, /*entering_value=*/value_of(entering));
        state_[j] = VarState::kAtLower;
      }
    }
    for (int j = first_artificial_; j < num_cols(); ++j) {
      lower_[j] = 0.0;
      upper_[j] = 0.0;
      if (state_[j] != VarState::kBasic) state_[j] = VarState::kAtLower;
    }
  }

  std::vector<double> ftran(int j) const {
    std::vector<double> w(m_, 0.0);
    for (const auto& [row, v] : cols_[j])
      for (int i = 0; i < m_; ++i)
        w[i] += binv_[static_cast<size_t>(i) * m_ + row] * v;
    return w;
  }

  void recompute_basic_values() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < num_cols(); ++j) {
      if (state_[j] == VarState::kBasic || state_[j] == VarState::kFree) continue;
      const double v = value_of(j);
      if (v == 0.0) continue;
      for (const auto& [row, a] : cols_[j]) r[row] -= a * v;
    }
    basic_value_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k)
        s += binv_[static_cast<size_t>(i) * m_ + k] * r[k];
      basic_value_[i] = s;
    }
  }

  // Rebuilds binv from the basis columns by Gauss-Jordan with partial
  // pivoting. Returns false on a numerically singular basis.
  bool refactorize() {
    std::vector<double> big(static_cast<size_t>(m_) * 2 * m_, 0.0);
    for (int p = 0; p < m_; ++p)
      for (const auto& [row, v] : cols_[basis_[p]])
        big[static_cast<size_t>(row) * 2 * m_ + p] = v;
    for (int i = 0; i < m_; ++i)
      big[static_cast<size_t>(i) * 2 * m_ + m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int i = col; i < m_; ++i) {
        const double a = std::fabs(big[static_cast<size_t>(i) * 2 * m_ + col]);
        if (a > best) {
          best = a;
          piv = i;
        }
      }
      if (piv < 0) return false;
      if (piv != col)
        for (int k = 0; k < 2 * m_; ++k)
          std::swap(big[static_cast<size_t>(piv) * 2 * m_ + k],
                    big[static_cast<size_t>(col) * 2 * m_ + k]);
      const double d = big[static_cast<size_t>(col) * 2 * m_ + col];
      for (int k = 0; k < 2 * m_; ++k)
        big[static_cast<size_t>(col) * 2 * m_ + k] /= d;
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = big[static_cast<size_t>(i) * 2 * m_ + col];
        if (f == 0.0) continue;
        for (int k = 0; k < 2 * m_; ++k)
          big[static_cast<size_t>(i) * 2 * m_ + k] -=
              f * big[static_cast<size_t>(col) * 2 * m_ + k];
      }
    }
    for (int i = 0; i < m_; ++i)
      for (int k = 0; k < m_; ++k)
        binv_[static_cast<size_t>(i) * m_ + k] =
            big[static_cast<size_t>(i) * 2 * m_ + m_ + k];
    recompute_basic_values();
    return true;
  }

  void pivot(int entering, int leaving_pos, const std::vector<double>& w,
             double entering_value) {
    const double piv = w[leaving_pos];
    const int old = basis_[leaving_pos];
    pos_in_basis_[old] = -1;
    basis_[leaving_pos] = entering;
    state_[entering] = VarState::kBasic;
    pos_in_basis_[entering] = leaving_pos;
    double* prow = &binv_[static_cast<size_t>(leaving_pos) * m_];
    for (int k = 0; k < m_; ++k) prow[k] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leaving_pos) continue;
      const double f = w[i];
      if (f == 0.0) continue;
      double* irow = &binv_[static_cast<size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
    }
    basic_value_[leaving_pos] = entering_value;
  }

  PivotOutcome iterate(bool phase1, int cap) {
    const double* cost = phase1 ? nullptr : cost_.data();
    int degenerate_streak = 0;
    bool bland = false;
    int since_refactor = 0;
    std::vector<double> devex(num_cols(), 1.0);
    std::vector<double> reduced(num_cols(), 0.0);
    while (true) {
      if (iterations_ >= cap) return PivotOutcome::kIterationLimit;
      // Simplex multipliers y = c_B' binv, then reduced costs per column.
      std::vector<double> y(m_, 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = basic_cost(basis_[i], phase1, cost);
        if (cb == 0.0) continue;
        const double* row = &binv_[static_cast<size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
      }
      int entering = -1;
      double entering_sigma = 1.0;
      double best_score = 0.0;
      const int limit = phase1 ? num_cols() : effective_cols_;
      for (int j = 0; j < limit; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        if (upper_[j] - lower_[j] <= 0.0) continue;
        double d = basic_cost(j, phase1, cost);
        for (const auto& [row, v] : cols_[j]) d -= y[row] * v;
        reduced[j] = d;
        double sigma = 0.0;
        if ((state_[j] == VarState::kAtLower || state_[j] == VarState::kFree) &&
            d < -opts_.opt_tol)
          sigma = 1.0;
        else if ((state_[j] == VarState::kAtUpper ||
                  state_[j] == VarState::kFree) &&
                 d > opts_.opt_tol)
          sigma = -1.0;
        else
          continue;
        if (bland) {
          entering = j;
          entering_sigma = sigma;
          break;
        }
        // Devex-weighted Dantzig score; ties to the lowest index.
        const double score = d * d / devex[j];
        if (score > best_score) {
          best_score = score;
          entering = j;
          entering_sigma = sigma;
        }
      }
      if (entering < 0) return PivotOutcome::kOptimal;

      std::vector<double> w = ftran(entering);
      // Bounded two-pass ratio test. The first pass finds the minimum ratio;
      // the second picks the leaving row, preferring the largest pivot
      // element among near-ties (lowest column index under Bland's rule).
      double t = kInf;
      if (std::isfinite(upper_[entering]) && std::isfinite(lower_[entering]))
        t = upper_[entering] - lower_[entering];
      for (int i = 0; i < m_; ++i) {
        const double dir = entering_sigma * w[i];
        const int jb = basis_[i];
        if (dir > 1e-9 && std::isfinite(lower_[jb])) {
          const double room = std::max(0.0, basic_value_[i] - lower_[jb]);
          t = std::min(t, room / dir);
        } else if (dir < -1e-9 && std::isfinite(upper_[jb])) {
          const double room = std::max(0.0, upper_[jb] - basic_value_[i]);
          t = std::min(t, room / (-dir));
        }
      }
      if (!std::isfinite(t)) return PivotOutcome::kUnbounded;
      int leaving_pos = -1;
      bool leaving_at_upper = false;
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double dir = entering_sigma * w[i];
        const int jb = basis_[i];
        double ratio = kInf;
        bool at_upper = false;
        if (dir > 1e-9 && std::isfinite(lower_[jb])) {
          ratio = std::max(0.0, basic_value_[i] - lower_[jb]) / dir;
        } else if (dir < -1e-9 && std::isfinite(upper_[jb])) {
          ratio = std::max(0.0, upper_[jb] - basic_value_[i]) / (-dir);
          at_upper = true;
        } else {
          continue;
        }
        if (ratio > t + 1e-9) continue;
        const bool take =
            bland ? (leaving_pos < 0 || jb < basis_[leaving_pos])
                  : std::fabs(w[i]) > best_pivot ||
                        (std::fabs(w[i]) == best_pivot && leaving_pos >= 0 &&
                         jb < basis_[leaving_pos]);
        if (take) {
          best_pivot = std::fabs(w[i]);
          leaving_pos = i;
          leaving_at_upper = at_upper;
        }
      }
      ++iterations_;
      if (t <= 1e-12) {
        ++degenerate_streak;
        if (degenerate_streak > 200 + n_ + m_) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      for (int i = 0; i < m_; ++i)
        basic_value_[i] -= entering_sigma * t * w[i];
      if (leaving_pos < 0) {
        // Bound flip: the entering variable traverses to its other bound.
        state_[entering] = entering_sigma > 0 ? VarState::kAtUpper
                                              : VarState::kAtLower;
        continue;
      }
      // Devex weight updates from the pivot row before the basis changes.
      if (!bland) {
        const double alpha_r = w[leaving_pos];
        const double wq = std::max(devex[entering], 1.0);
        const double* br = &binv_[static_cast<size_t>(leaving_pos) * m_];
        for (int j = 0; j < limit; ++j) {
          if (state_[j] == VarState::kBasic || j == entering) continue;
          if (upper_[j] - lower_[j] <= 0.0) continue;
          double arj = 0.0;
          for (const auto& [row, v] : cols_[j]) arj += br[row] * v;
          if (arj == 0.0) continue;
          const double cand = (arj / alpha_r) * (arj / alpha_r) * wq;
          if (cand > devex[j]) devex[j] = cand;
        }
        const int old_basic = basis_[leaving_pos];
        devex[old_basic] = std::max(wq / (alpha_r * alpha_r), 1.0);
        if (devex[entering] > 1e7)
          std::fill(devex.begin(), devex.end(), 1.0);  // reference reset
        devex[entering] = 1.0;
      }
      const double entering_value = value_of(entering) + entering_sigma * t;
      const int old = basis_[leaving_pos];
      pivot(entering, leaving_pos, w, entering_value);
      state_[old] = leaving_at_upper ? VarState::kAtUpper : VarState::kAtLower;
      if (!std::isfinite(lower_[old]) && !std::isfinite(upper_[old]))
        state_[old] = VarState::kFree;
      if (++since_refactor >= 128) {
        since_refactor = 0;
        if (!refactorize()) return PivotOutcome::kIterationLimit;
      }
    }
  }

  double basic_cost(int j, bool phase1, const double* cost) const {
    if (phase1) return j >= first_artificial_ ? 1.0 : 0.0;
    return cost[j];
  }

  bool numerically_feasible(const std::vector<double>& x) const {
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (x[j] == 0.0) continue;
      for (const auto& [row, v] : cols_[j]) act[row] += v * x[j];
    }
    for (int i = 0; i < m_; ++i)
      if (act[i] > rhs_[i] + opts_.feas_tol) return false;
    for (int j = 0; j < n_; ++j)
      if (x[j] < lower_[j] - opts_.feas_tol || x[j] > upper_[j] + opts_.feas_tol)
        return false;
    return true;
  }

  int n_;
  int m_;
  SimplexOptions opts_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lower_, upper_, cost_, rhs_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  std::vector<int> pos_in_basis_;
  std::vector<double> binv_;
  std::vector<double> basic_value_;
  int first_artificial_ = std::numeric_limits<int>::max();
  int effective_cols_ = 0;
  int iterations_ = 0;

  friend LpResult run_bounded_simplex(const MipInstance&, const SimplexOptions&);
};

inline LpResult run_bounded_simplex(const MipInstance& inst,
                                    const SimplexOptions& opts) {
  BoundedSimplex solver(inst, opts);
  solver.effective_cols_ = inst.num_vars + inst.num_cons;
  return solver.run();
}

}  // namespace detail

// LP relaxation of the instance (integrality dropped).
inline LpResult solve_lp(const MipInstance& inst,
                         const SimplexOptions& opts = {}) {
  return detail::run_bounded_simplex(inst, opts);
}

}  // namespace mipdive

#endif  // MIPDIVE_SIMPLEX_HPP_
