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

#ifndef MIPDIVE_MIP_HPP_
#define MIPDIVE_MIP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mipdive {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One nonzero of the constraint matrix.
struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet& a, const Triplet& b) {
    return a.row == b.row && a.col == b.col && a.value == b.value;
  }
};

// A minimization MIP: min c'x subject to Ax <= b, lb <= x <= ub, with
// integrality marks on a subset of the variables. Every constraint is stored
// as <=; >= rows are negated and == rows split at construction time by the
// parsers and generators. Instances are immutable after construction and
// safe to share across threads.
struct MipInstance {
  std::string name;
  int num_vars = 0;
  int num_cons = 0;
  std::vector<double> objective;
  std::vector<Triplet> matrix;  // sorted by (row, col), no duplicates
  std::vector<double> rhs;
  std::vector<bool> integrality;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_discrete() const {
    return static_cast<int>(
        std::count(integrality.begin(), integrality.end(), true));
  }

  std::vector<int> discrete_indices() const {
    std::vector<int> out;
    for (int j = 0; j < num_vars; ++j)
      if (integrality[j]) out.push_back(j);
    return out;
  }

  friend bool operator==(const MipInstance& a, const MipInstance& b) {
    return a.name == b.name && a.num_vars == b.num_vars &&
           a.num_cons == b.num_cons && a.objective == b.objective &&
           a.matrix == b.matrix && a.rhs == b.rhs &&
           a.integrality == b.integrality && a.lower == b.lower &&
           a.upper == b.upper;
  }
};

// A full vector of variable values.
struct Assignment {
  std::vector<double> values;
};

// A realized subset of discrete variables with fixed integer values:
// `indices` ascending, one value per index, coverage = |indices| / r.
struct PartialAssignment {
  std::vector<int> indices;
  std::vector<long long> values;
  double coverage = 0.0;
};

// Validates the structural invariants and returns the finished instance with
// its matrix triplets in canonical (row, col) order.
inline MipInstance make_instance(std::string name, int num_vars, int num_cons,
                                 std::vector<double> objective,
                                 std::vector<Triplet> matrix,
                                 std::vector<double> rhs,
                                 std::vector<bool> integrality,
                                 std::vector<double> lower,
                                 std::vector<double> upper) {
  if (num_vars < 0 || num_cons < 0)
    throw std::invalid_argument("make_instance: negative dimension");
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(integrality.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars ||
      static_cast<int>(upper.size()) != num_vars ||
      static_cast<int>(rhs.size()) != num_cons)
    throw std::invalid_argument("make_instance: vector length mismatch");
  std::sort(matrix.begin(), matrix.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (size_t k = 0; k < matrix.size(); ++k) {
    const Triplet& t = matrix[k];
    if (t.row < 0 || t.row >= num_cons || t.col < 0 || t.col >= num_vars)
      throw std::invalid_argument("make_instance: triplet index out of range");
    if (k > 0 && matrix[k - 1].row == t.row && matrix[k - 1].col == t.col)
      throw std::invalid_argument("make_instance: duplicate matrix entry at row " +
                                  std::to_string(t.row) + ", col " +
                                  std::to_string(t.col));
  }
  for (int j = 0; j < num_vars; ++j) {
    if (!(lower[j] <= upper[j]))
      throw std::invalid_argument("make_instance: lower > upper for variable " +
                                  std::to_string(j));
    if (integrality[j] && (!std::isfinite(lower[j]) || !std::isfinite(upper[j])))
      throw std::invalid_argument(
          "make_instance: discrete variable " + std::to_string(j) +
          " must have finite bounds");
  }
  MipInstance inst;
  inst.name = std::move(name);
  inst.num_vars = num_vars;
  inst.num_cons = num_cons;
  inst.objective = std::move(objective);
  inst.matrix = std::move(matrix);
  inst.rhs = std::move(rhs);
  inst.integrality = std::move(integrality);
  inst.lower = std::move(lower);
  inst.upper = std::move(upper);
  return inst;
}

// c'x.
inline double objective_value(const MipInstance& inst, const Assignment& x) {
  if (static_cast<int>(x.values.size()) != inst.num_vars)
    throw std::invalid_argument("objective_value: assignment length mismatch");
  double v = 0.0;
  for (int j = 0; j < inst.num_vars; ++j) v += inst.objective[j] * x.values[j];
  return v;
}

// True iff Ax <= b + tol componentwise, bounds hold within tol and every
// discrete coordinate is within tol of an integer.
inline bool check_feasible(const MipInstance& inst, const Assignment& x,
                           double tol) {
  if (static_cast<int>(x.values.size()) != inst.num_vars)
    throw std::invalid_argument("check_feasible: assignment length mismatch");
  for (int j = 0; j < inst.num_vars; ++j) {
    const double v = x.values[j];
    if (v < inst.lower[j] - tol || v > inst.upper[j] + tol) return false;
    if (inst.integrality[j] && std::fabs(v - std::round(v)) > tol) return false;
  }
  std::vector<double> row_activity(inst.num_cons, 0.0);
  for (const Triplet& t : inst.matrix)
    row_activity[t.row] += t.value * x.values[t.col];
  for (int i = 0; i < inst.num_cons; ++i)
    if (row_activity[i] > inst.rhs[i] + tol) return false;
  return true;
}

// Builds the partial assignment for `indices` (ascending after the call)
// taking values from a full assignment. Values are rounded to the nearest
// integer; the caller is responsible for x being near-integral there.
inline PartialAssignment partial_from_assignment(const MipInstance& inst,
                                                 std::vector<int> indices,
                                                 const Assignment& x) {
  std::sort(indices.begin(), indices.end());
  PartialAssignment pa;
  pa.indices = std::move(indices);
  pa.values.reserve(pa.indices.size());
  for (int idx : pa.indices)
    pa.values.push_back(static_cast<long long>(std::llround(x.values[idx])));
  const int r = inst.num_discrete();
  pa.coverage = r == 0 ? 0.0
                       : static_cast<double>(pa.indices.size()) /
                             static_cast<double>(r);
  return pa;
}

// Sub-MIP by bound tightening: each fixed variable gets bounds [v, v].
// Dimensions and objective are unchanged.
inline MipInstance fix_variables(const MipInstance& inst,
                                 const PartialAssignment& pa) {
  if (pa.indices.size() != pa.values.size())
    throw std::invalid_argument("fix_variables: index/value length mismatch");
  MipInstance sub = inst;
  for (size_t k = 0; k < pa.indices.size(); ++k) {
    const int j = pa.indices[k];
    if (j < 0 || j >= inst.num_vars)
      throw std::invalid_argument("fix_variables: index out of range");
    if (!inst.integrality[j])
      throw std::invalid_argument("fix_variables: variable " +
                                  std::to_string(j) + " is not discrete");
    const double v = static_cast<double>(pa.values[k]);
    if (v < inst.lower[j] || v > inst.upper[j])
      throw std::invalid_argument("fix_variables: value " + std::to_string(v) +
                                  " outside bounds of variable " +
                                  std::to_string(j));
    sub.lower[j] = v;
    sub.upper[j] = v;
  }
  return sub;
}

}  // namespace mipdive

#endif  // MIPDIVE_MIP_HPP_
