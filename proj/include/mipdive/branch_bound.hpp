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

#ifndef MIPDIVE_BRANCH_BOUND_HPP_
#define MIPDIVE_BRANCH_BOUND_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "mipdive/mip.hpp"
#include "mipdive/simplex.hpp"

namespace mipdive {

// Time source for solver budgets and incumbent timestamps. The default is a
// monotonic wall clock; tests and reproducible benchmark runs inject a
// deterministic clock instead.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() = 0;
};

class WallClock : public Clock {
 public:
  double now() override {
    const auto t = std::chrono::steady_clock::now().time_since_epoch();
    return std::chrono::duration<double>(t).count();
  }
};

// Advances by a fixed tick on every query, making traces and budget cutoffs
// a pure function of the solver's work and not of the host machine.
class DeterministicClock : public Clock {
 public:
  explicit DeterministicClock(double tick) : tick_(tick) {}
  double now() override { return tick_ * static_cast<double>(count_++); }

 private:
  double tick_;
  int64_t count_ = 0;
};

enum class MipStatus { kOptimal, kFeasible, kInfeasible, kTimeLimit };

enum class SolveMode { kFirstFeasible, kOptimize };

struct IncumbentEvent {
  double time = 0.0;
  double objective = 0.0;
};

// Time-stamped incumbent sequence of one solve. Objectives are strictly
// decreasing and the last one matches the best assignment.
struct SolveTrace {
  std::vector<IncumbentEvent> events;
  MipStatus status = MipStatus::kInfeasible;
  std::optional<Assignment> best;
  double dual_bound = -kInf;
  double elapsed = 0.0;
  int64_t nodes = 0;
  int64_t lp_iteration_limit_hits = 0;

  bool has_incumbent() const { return best.has_value(); }
  double best_objective() const { return events.back().objective; }
};

struct MipSolveOptions {
  Clock* clock = nullptr;  // defaults to a local WallClock
  double rel_gap = 1e-6;
  double int_tol = 1e-6;
  SimplexOptions lp;
};

namespace detail {

struct BbNode {
  double bound = 0.0;
  int64_t id = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> lp_solution;
};

struct BbNodeOrder {
  // Best bound first; insertion order breaks ties for determinism.
  bool operator()(const std::shared_ptr<BbNode>& a,
                  const std::shared_ptr<BbNode>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

inline int most_fractional_variable(const MipInstance& inst,
                                    const std::vector<double>& x,
                                    double int_tol) {
  int best = -1;
  double best_frac = int_tol;
  for (int j = 0; j < inst.num_vars; ++j) {
    if (!inst.integrality[j]) continue;
    const double f = std::fabs(x[j] - std::round(x[j]));
    if (f > best_frac) {
      best_frac = f;
      best = j;
    }
  }
  return best;
}

}  // namespace detail

// Branch and bound with best-bound node selection, most-fractional branching
// and one LP relaxation per node. Every incumbent improvement is recorded
// with a timestamp from the injected clock. In kFirstFeasible mode the
// search stops at the first incumbent. Optimality is declared when the
// global dual bound reaches the incumbent within the relative gap.
inline SolveTrace solve_mip(const MipInstance& inst, double budget_seconds,
                            SolveMode mode, const MipSolveOptions& opts = {}) {
  if (!(budget_seconds > 0.0))
    throw std::invalid_argument("solve_mip: budget must be positive");
  WallClock default_clock;
  Clock* clock = opts.clock ? opts.clock : &default_clock;
  const double start = clock->now();

  SolveTrace trace;
  double incumbent_obj = kInf;

  const auto gap_closed = [&](double dual) {
    if (!trace.best) return false;
    return dual >= incumbent_obj - opts.rel_gap * std::max(1.0, std::fabs(incumbent_obj));
  };

  std::priority_queue<std::shared_ptr<detail::BbNode>,
                      std::vector<std::shared_ptr<detail::BbNode>>,
                      detail::BbNodeOrder>
      open;
  int64_t next_id = 0;

  // Solves the node LP over the given bounds; returns true when the node
  // stays alive (pushed or turned into an incumbent).
  MipInstance work = inst;
  const auto expand = [&](std::vector<double> lo, std::vector<double> up) {
    work.lower = std::move(lo);
    work.upper = std::move(up);
    const LpResult lp = solve_lp(work, opts.lp);
    ++trace.nodes;
    if (lp.status == LpStatus::kIterationLimit) {
      ++trace.lp_iteration_limit_hits;
      return;
    }
    if (lp.status == LpStatus::kInfeasible) return;
    if (lp.status == LpStatus::kUnbounded)
      throw std::runtime_error("solve_mip: relaxation is unbounded");
    if (trace.best &&
        lp.objective >= incumbent_obj -
                            opts.rel_gap * std::max(1.0, std::fabs(incumbent_obj)))
      return;  // cannot improve
    const int frac = detail::most_fractional_variable(inst, lp.solution, opts.int_tol);
    if (frac < 0) {
      Assignment cand;
      cand.values = lp.solution;
      for (int j = 0; j < inst.num_vars; ++j)
        if (inst.integrality[j]) cand.values[j] = std::round(cand.values[j]);
      const double obj = objective_value(inst, cand);
      if (obj < incumbent_obj && check_feasible(inst, cand, 1e-6)) {
        incumbent_obj = obj;
        trace.best = std::move(cand);
        trace.events.push_back({clock->now() - start, obj});
      }
      return;
    }
    auto node = std::make_shared<detail::BbNode>();
    node->bound = lp.objective;
    node->id = next_id++;
    node->lower = work.lower;
    node->upper = work.upper;
    node->lp_solution = lp.solution;
    open.push(std::move(node));
  };

  expand(inst.lower, inst.upper);

  while (!open.empty()) {
    if (mode == SolveMode::kFirstFeasible && trace.best) break;
    const double dual = open.top()->bound;
    if (gap_closed(dual)) break;
    if (clock->now() - start >= budget_seconds) {
      trace.status = MipStatus::kTimeLimit;
      trace.dual_bound = dual;
      trace.elapsed = clock->now() - start;
      return trace;
    }
    auto node = open.top();
    open.pop();
    const int frac =
        detail::most_fractional_variable(inst, node->lp_solution, opts.int_tol);
    if (frac < 0) continue;  // stale safety; integral nodes never get pushed
    const double v = node->lp_solution[frac];
    std::vector<double> lo = node->lower;
    std::vector<double> up = node->upper;
    up[frac] = std::floor(v);
    expand(node->lower, std::move(up));
    lo[frac] = std::ceil(v);
    expand(std::move(lo), node->upper);
  }

  trace.elapsed = clock->now() - start;
  if (!trace.best) {
    trace.status = MipStatus::kInfeasible;
    trace.dual_bound = kInf;
    return trace;
  }
  if (open.empty() || gap_closed(open.top()->bound)) {
    trace.status = MipStatus::kOptimal;
    trace.dual_bound = incumbent_obj;
  } else {
    trace.status = MipStatus::kFeasible;
    trace.dual_bound = open.top()->bound;
  }
  return trace;
}

}  // namespace mipdive

#endif  // MIPDIVE_BRANCH_BOUND_HPP_
