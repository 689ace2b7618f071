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

#ifndef MIPDIVE_GENERATORS_HPP_
#define MIPDIVE_GENERATORS_HPP_

#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mipdive/mip.hpp"
#include "mipdive/rng.hpp"

namespace mipdive {

// Random set covering instance: min sum(cost_j x_j) subject to, per row i,
// sum over covering columns x_j >= 1, stored negated as <=. Column costs are
// uniform integers in [1, 100]. Coverage is repaired after Bernoulli
// sampling so that every column covers at least one row and every row is
// covered by at least two columns, which makes the all-ones assignment a
// feasible witness. The draw order is fixed (costs, then membership in
// row-major order, then column repair, then row repair) so a seed produces
// a bit-identical instance everywhere.
inline MipInstance gen_set_cover(int rows, int cols, double density,
                                 uint64_t seed) {
  if (rows < 1) throw std::invalid_argument("gen_set_cover: rows must be >= 1");
  if (cols < rows || cols < 2)
    throw std::invalid_argument("gen_set_cover: cols must be >= max(rows, 2)");
  if (!(density > 0.0 && density < 1.0))
    throw std::invalid_argument("gen_set_cover: density must be in (0, 1)");

  SplitMix64 rng(seed);
  std::vector<double> cost(cols);
  for (int j = 0; j < cols; ++j)
    cost[j] = 1.0 + static_cast<double>(rng.below(100));

  std::vector<std::set<int>> covers_of_col(cols);
  std::vector<int> row_count(rows, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rng.uniform01() < density) {
        covers_of_col[j].insert(i);
        ++row_count[i];
      }
  for (int j = 0; j < cols; ++j)
    if (covers_of_col[j].empty()) {
      const int i = static_cast<int>(rng.below(rows));
      covers_of_col[j].insert(i);
      ++row_count[i];
    }
  for (int i = 0; i < rows; ++i)
    while (row_count[i] < 2) {
      const int j = static_cast<int>(rng.below(cols));
      if (covers_of_col[j].insert(i).second) ++row_count[i];
    }

  std::vector<Triplet> tris;
  for (int j = 0; j < cols; ++j)
    for (int i : covers_of_col[j]) tris.push_back({i, j, -1.0});

  char buf[128];
  std::snprintf(buf, sizeof(buf), "setcover_r%d_c%d_d%g_s%llu", rows, cols,
                density, static_cast<unsigned long long>(seed));
  return make_instance(buf, cols, rows, std::move(cost), std::move(tris),
                       std::vector<double>(rows, -1.0),
                       std::vector<bool>(cols, true),
                       std::vector<double>(cols, 0.0),
                       std::vector<double>(cols, 1.0));
}

// Maximum independent set on a preferential-attachment graph:
// min -sum(x_v) subject to x_u + x_v <= 1 per edge. The graph starts from a
// clique on affinity+1 nodes; each later node attaches to `affinity`
// distinct existing nodes drawn proportionally to degree. The cited
// construction names Erdos-Renyi graphs but fixes an "affinity" parameter,
// which is a preferential-attachment notion; this generator implements the
// latter and keeps the name.
inline MipInstance gen_indep_set(int nodes, int affinity, uint64_t seed) {
  if (affinity < 1)
    throw std::invalid_argument("gen_indep_set: affinity must be >= 1");
  if (nodes < affinity + 1)
    throw std::invalid_argument("gen_indep_set: nodes must be >= affinity + 1");

  SplitMix64 rng(seed);
  std::set<std::pair<int, int>> edges;
  std::vector<int> degree_repeats;
  const int m0 = affinity + 1;
  for (int u = 0; u < m0; ++u)
    for (int v = u + 1; v < m0; ++v) {
      edges.insert({u, v});
      degree_repeats.push_back(u);
      degree_repeats.push_back(v);
    }
  for (int v = m0; v < nodes; ++v) {
    std::set<int> targets;
    while (static_cast<int>(targets.size()) < affinity) {
      const int t =
          degree_repeats[rng.below(degree_repeats.size())];
      targets.insert(t);
    }
    for (int t : targets) {
      edges.insert({t, v});
      degree_repeats.push_back(t);
      degree_repeats.push_back(v);
    }
  }

  std::vector<Triplet> tris;
  int row = 0;
  for (const auto& [u, v] : edges) {
    tris.push_back({row, u, 1.0});
    tris.push_back({row, v, 1.0});
    ++row;
  }

  char buf[128];
  std::snprintf(buf, sizeof(buf), "indepset_n%d_a%d_s%llu", nodes, affinity,
                static_cast<unsigned long long>(seed));
  return make_instance(buf, nodes, row, std::vector<double>(nodes, -1.0),
                       std::move(tris), std::vector<double>(row, 1.0),
                       std::vector<bool>(nodes, true),
                       std::vector<double>(nodes, 0.0),
                       std::vector<double>(nodes, 1.0));
}

}  // namespace mipdive

#endif  // MIPDIVE_GENERATORS_HPP_
