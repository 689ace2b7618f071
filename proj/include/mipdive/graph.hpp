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

#ifndef MIPDIVE_GRAPH_HPP_
#define MIPDIVE_GRAPH_HPP_

#include <array>
#include <cmath>
#include <vector>

#include "mipdive/mip.hpp"
#include "mipdive/simplex.hpp"

namespace mipdive {

inline constexpr int kVarFeatures = 6;
inline constexpr int kConsFeatures = 3;

// Variable-constraint bipartite encoding of an instance. Feature layout:
//   variable: [objective coeff, lower bound, upper bound, is-discrete,
//              LP value, LP fractionality]
//   constraint: [rhs, row nnz / n, row activity at the LP point]
// All magnitudes are normalized per instance by max(|max value|, 1) of the
// respective source array, so the encoding is invariant under variable
// permutations and insensitive to cost scaling.
struct BipartiteGraph {
  int num_vars = 0;
  int num_cons = 0;
  std::vector<std::array<double, kVarFeatures>> var_feat;
  std::vector<std::array<double, kConsFeatures>> cons_feat;
  struct Edge {
    int cons = 0;
    int var = 0;
    double coeff = 0.0;
  };
  std::vector<Edge> edges;
  std::vector<int> discrete;  // variable indices carrying a probability head
};

// `lp` is the relaxation result for the instance; when it is not optimal the
// LP-value feature falls back to the bound midpoint and fractionality to 0.5.
inline BipartiteGraph encode_graph(const MipInstance& inst, const LpResult& lp) {
  BipartiteGraph g;
  g.num_vars = inst.num_vars;
  g.num_cons = inst.num_cons;
  g.discrete = inst.discrete_indices();

  double c_scale = 1.0, b_scale = 1.0, a_scale = 1.0, bound_scale = 1.0;
  for (double v : inst.objective) c_scale = std::max(c_scale, std::fabs(v));
  for (double v : inst.rhs) b_scale = std::max(b_scale, std::fabs(v));
  for (const Triplet& t : inst.matrix) a_scale = std::max(a_scale, std::fabs(t.value));
  for (int j = 0; j < inst.num_vars; ++j) {
    if (std::isfinite(inst.lower[j]))
      bound_scale = std::max(bound_scale, std::fabs(inst.lower[j]));
    if (std::isfinite(inst.upper[j]))
      bound_scale = std::max(bound_scale, std::fabs(inst.upper[j]));
  }

  const bool have_lp = lp.status == LpStatus::kOptimal;
  std::vector<double> x(inst.num_vars, 0.0);
  for (int j = 0; j < inst.num_vars; ++j) {
    if (have_lp) {
      x[j] = lp.solution[j];
    } else if (std::isfinite(inst.lower[j]) && std::isfinite(inst.upper[j])) {
      x[j] = 0.5 * (inst.lower[j] + inst.upper[j]);
    }
  }

  g.var_feat.resize(inst.num_vars);
  for (int j = 0; j < inst.num_vars; ++j) {
    const double lb = std::isfinite(inst.lower[j])
                          ? inst.lower[j] / bound_scale
                          : -2.0;
    const double ub = std::isfinite(inst.upper[j])
                          ? inst.upper[j] / bound_scale
                          : 2.0;
    double frac = 0.5;
    if (have_lp)
      frac = inst.integrality[j] ? std::fabs(x[j] - std::round(x[j])) : 0.0;
    g.var_feat[j] = {inst.objective[j] / c_scale,
                     lb,
                     ub,
                     inst.integrality[j] ? 1.0 : 0.0,
                     x[j] / bound_scale,
                     frac};
  }

  std::vector<double> activity(inst.num_cons, 0.0);
  std::vector<int> nnz(inst.num_cons, 0);
  for (const Triplet& t : inst.matrix) {
    activity[t.row] += t.value * x[t.col];
    ++nnz[t.row];
  }
  g.cons_feat.resize(inst.num_cons);
  for (int i = 0; i < inst.num_cons; ++i)
    g.cons_feat[i] = {inst.rhs[i] / b_scale,
                      static_cast<double>(nnz[i]) / std::max(1, inst.num_vars),
                      activity[i] / b_scale};

  g.edges.reserve(inst.matrix.size());
  for (const Triplet& t : inst.matrix)
    g.edges.push_back({t.row, t.col, t.value / a_scale});
  return g;
}

}  // namespace mipdive

#endif  // MIPDIVE_GRAPH_HPP_
