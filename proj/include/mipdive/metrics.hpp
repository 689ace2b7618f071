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

#ifndef MIPDIVE_METRICS_HPP_
#define MIPDIVE_METRICS_HPP_

#include <cmath>
#include <optional>

#include "mipdive/branch_bound.hpp"

namespace mipdive {

// Primal bound as a function of time: the staircase of incumbent objectives,
// with `cap` before the first incumbent.
inline std::optional<double> primal_bound_at(const SolveTrace& trace, double t,
                                             std::optional<double> cap) {
  std::optional<double> bound = cap;
  for (const IncumbentEvent& e : trace.events) {
    if (e.time > t) break;
    bound = e.objective;
  }
  return bound;
}

// Area between the primal-bound staircase and the optimum over [0, T]:
// integral of the bound minus T times the optimal objective. Before the
// first incumbent the bound is the configured cap; without a cap the value
// is undefined unless an incumbent exists at time zero.
inline std::optional<double> primal_integral(const SolveTrace& trace, double T,
                                             double opt_obj,
                                             std::optional<double> cap = {}) {
  if (!(T > 0.0)) throw std::invalid_argument("primal_integral: T must be positive");
  double area = 0.0;
  double t = 0.0;
  std::optional<double> bound = cap;
  for (const IncumbentEvent& e : trace.events) {
    if (e.time >= T) break;
    if (e.time > t) {
      if (!bound) return std::nullopt;  // uncovered stretch, no cap
      area += *bound * (e.time - t);
      t = e.time;
    }
    bound = e.objective;
  }
  if (t < T) {
    if (!bound) return std::nullopt;
    area += *bound * (T - t);
  }
  return area - T * opt_obj;
}

// Percentage gap between a primal bound and the reference optimum. For a
// reference of zero magnitude the epsilon denominator applies and callers
// should flag the row.
inline double optimality_gap(double primal_bound, double opt_obj) {
  return 100.0 * std::fabs(primal_bound - opt_obj) /
         std::max(std::fabs(opt_obj), 1e-9);
}

enum class ReferenceKind { kProven, kBestKnown };

struct ReferenceOptimum {
  double objective = 0.0;
  ReferenceKind kind = ReferenceKind::kBestKnown;
};

// Long solve to produce the comparison baseline; flagged Proven only when
// the tree closed.
inline std::optional<ReferenceOptimum> reference_optimum(
    const MipInstance& inst, double long_budget, const MipSolveOptions& opts = {}) {
  const SolveTrace t = solve_mip(inst, long_budget, SolveMode::kOptimize, opts);
  if (!t.has_incumbent()) return std::nullopt;
  return ReferenceOptimum{t.best_objective(),
                          t.status == MipStatus::kOptimal
                              ? ReferenceKind::kProven
                              : ReferenceKind::kBestKnown};
}

}  // namespace mipdive

#endif  // MIPDIVE_METRICS_HPP_
