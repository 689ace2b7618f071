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

#ifndef MIPDIVE_MPS_HPP_
#define MIPDIVE_MPS_HPP_

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mipdive/mip.hpp"

namespace mipdive {

enum class MpsErrorKind {
  kUnknownSection,
  kDuplicateRow,
  kUnknownRowInColumns,
  kMissingEndata,
  kBadRecord,
  kUnsupported,
};

class MpsError : public std::runtime_error {
 public:
  MpsError(MpsErrorKind kind, int line, const std::string& what)
      : std::runtime_error("MPS line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}
  MpsErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  MpsErrorKind kind_;
  int line_;
};

namespace detail {

inline std::vector<std::string> mps_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

inline double mps_number(const std::string& tok, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw MpsError(MpsErrorKind::kBadRecord, line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw MpsError(MpsErrorKind::kBadRecord, line, "expected a number, got '" + tok + "'");
  return v;
}

}  // namespace detail

// Fixed-format MPS subset: sections NAME, ROWS, COLUMNS (with INTORG/INTEND
// markers), RHS, BOUNDS (UP/LO/BV/FX) and ENDATA; the single N row is the
// minimization objective. Section headers start in column one and data
// records are indented, per the fixed format. >= rows are negated in place;
// == rows keep their declared slot as <= and append the negated copy after
// all declared rows. Anything else (RANGES, SOS, free rows beyond the
// objective) is rejected with the offending line number.
inline MipInstance parse_mps(const std::string& text) {
  enum class Section { kNone, kName, kRows, kColumns, kRhs, kBounds, kDone };
  Section section = Section::kNone;

  struct RowInfo {
    char type = 'L';
    int index = -1;      // storage row of the <= form
    int eq_extra = -1;   // appended negated row for == rows
  };
  std::map<std::string, RowInfo> rows;
  std::string objective_row;
  std::string name;
  int num_declared = 0;
  std::vector<char> declared_types;

  std::map<std::string, int> col_index;
  std::vector<std::string> col_names;
  std::vector<bool> integrality;
  std::vector<double> objective;
  std::vector<Triplet> tris;
  std::vector<std::pair<std::string, double>> rhs_entries;
  struct BoundRec {
    std::string type;
    int col;
    double value;
    int line;
  };
  std::vector<BoundRec> bound_recs;
  bool in_integer_block = false;
  bool saw_endata = false;

  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    const bool is_header = line[0] != ' ' && line[0] != '\t';
    std::vector<std::string> tok = detail::mps_tokens(line);
    if (tok.empty()) continue;

    if (is_header) {
      const std::string& head = tok[0];
      if (head == "NAME") {
        if (tok.size() > 1) name = tok[1];
        section = Section::kName;
      } else if (head == "ROWS") {
        section = Section::kRows;
      } else if (head == "COLUMNS") {
        section = Section::kColumns;
      } else if (head == "RHS") {
        section = Section::kRhs;
      } else if (head == "BOUNDS") {
        section = Section::kBounds;
      } else if (head == "ENDATA") {
        saw_endata = true;
        section = Section::kDone;
        break;
      } else {
        throw MpsError(MpsErrorKind::kUnknownSection, line_no,
                       "unknown or unsupported section '" + head + "'");
      }
      continue;
    }

    switch (section) {
      case Section::kRows: {
        if (tok.size() != 2)
          throw MpsError(MpsErrorKind::kBadRecord, line_no, "expected 'type name'");
        const std::string& type = tok[0];
        const std::string& row = tok[1];
        if (type != "N" && type != "L" && type != "G" && type != "E")
          throw MpsError(MpsErrorKind::kBadRecord, line_no,
                         "unknown row type '" + type + "'");
        if (type == "N") {
          if (!objective_row.empty())
            throw MpsError(MpsErrorKind::kDuplicateRow, line_no,
                           "second objective row '" + row + "'");
          objective_row = row;
          continue;
        }
        if (rows.count(row) || row == objective_row)
          throw MpsError(MpsErrorKind::kDuplicateRow, line_no,
                         "duplicate row '" + row + "'");
        rows[row] = {type[0], num_declared++, -1};
        declared_types.push_back(type[0]);
        break;
      }
      case Section::kColumns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok.back() == "'INTORG'")
            in_integer_block = true;
          else if (tok.back() == "'INTEND'")
            in_integer_block = false;
          else
            throw MpsError(MpsErrorKind::kBadRecord, line_no, "bad marker record");
          continue;
        }
        if (tok.size() != 3 && tok.size() != 5)
          throw MpsError(MpsErrorKind::kBadRecord, line_no,
                         "expected 'column row value [row value]'");
        const std::string& col = tok[0];
        if (!col_index.count(col)) {
          col_index[col] = static_cast<int>(col_names.size());
          col_names.push_back(col);
          integrality.push_back(in_integer_block);
          objective.push_back(0.0);
        }
        const int c = col_index[col];
        for (size_t k = 1; k + 1 < tok.size(); k += 2) {
          const std::string& row = tok[k];
          const double v = detail::mps_number(tok[k + 1], line_no);
          if (row == objective_row) {
            objective[c] += v;
            continue;
          }
          auto it = rows.find(row);
          if (it == rows.end())
            throw MpsError(MpsErrorKind::kUnknownRowInColumns, line_no,
                           "unknown row '" + row + "' in COLUMNS");
          tris.push_back({it->second.index, c, v});
        }
        break;
      }
      case Section::kRhs: {
        if (tok.size() != 3 && tok.size() != 5)
          throw MpsError(MpsErrorKind::kBadRecord, line_no,
                         "expected 'set row value [row value]'");
        for (size_t k = 1; k + 1 < tok.size(); k += 2) {
          const std::string& row = tok[k];
          const double v = detail::mps_number(tok[k + 1], line_no);
          if (row == objective_row)
            throw MpsError(MpsErrorKind::kUnsupported, line_no,
                           "objective-row RHS (constant term) is unsupported");
          if (!rows.count(row))
            throw MpsError(MpsErrorKind::kUnknownRowInColumns, line_no,
                           "unknown row '" + row + "' in RHS");
          rhs_entries.push_back({row, v});
        }
        break;
      }
      case Section::kBounds: {
        const std::string& type = tok[0];
        if (type == "BV") {
          if (tok.size() != 3)
            throw MpsError(MpsErrorKind::kBadRecord, line_no, "expected 'BV set col'");
        } else if (type == "UP" || type == "LO" || type == "FX") {
          if (tok.size() != 4)
            throw MpsError(MpsErrorKind::kBadRecord, line_no,
                           "expected 'type set col value'");
        } else {
          throw MpsError(MpsErrorKind::kUnsupported, line_no,
                         "unsupported bound type '" + type + "'");
        }
        const std::string& col = tok[2];
        if (!col_index.count(col))
          throw MpsError(MpsErrorKind::kBadRecord, line_no,
                         "bound on unknown column '" + col + "'");
        const double v = tok.size() == 4 ? detail::mps_number(tok[3], line_no) : 0.0;
        bound_recs.push_back({type, col_index[col], v, line_no});
        break;
      }
      case Section::kName:
        break;  // tolerated continuation of the NAME record
      case Section::kNone:
        throw MpsError(MpsErrorKind::kBadRecord, line_no,
                       "data record before any section header");
      case Section::kDone:
        break;
    }
  }
  if (!saw_endata)
    throw MpsError(MpsErrorKind::kMissingEndata, line_no, "missing ENDATA");
  if (objective_row.empty())
    throw MpsError(MpsErrorKind::kBadRecord, line_no, "no objective (N) row");

  // Assign appended rows for == constraints, then build the <=-normalized
  // matrix and rhs.
  int num_rows = num_declared;
  for (auto& [rname, info] : rows)
    if (info.type == 'E') info.eq_extra = num_rows++;

  std::map<int, const RowInfo*> by_index;
  for (const auto& [rname, info] : rows) by_index[info.index] = &info;

  std::vector<Triplet> out_tris;
  for (const Triplet& t : tris) {
    const RowInfo& info = *by_index[t.row];
    const double v = info.type == 'G' ? -t.value : t.value;
    out_tris.push_back({t.row, t.col, v});
    if (info.type == 'E') out_tris.push_back({info.eq_extra, t.col, -t.value});
  }
  std::vector<double> b(num_rows, 0.0);
  for (const auto& [rname, v] : rhs_entries) {
    const RowInfo& info = rows[rname];
    b[info.index] = info.type == 'G' ? -v : v;
    if (info.type == 'E') b[info.eq_extra] = -v;
  }

  const int n = static_cast<int>(col_names.size());
  std::vector<double> lb(n, 0.0);
  std::vector<double> ub(n, kInf);
  for (const BoundRec& r : bound_recs) {
    if (r.type == "UP") {
      ub[r.col] = r.value;
    } else if (r.type == "LO") {
      lb[r.col] = r.value;
    } else if (r.type == "FX") {
      lb[r.col] = r.value;
      ub[r.col] = r.value;
    } else {  // BV
      lb[r.col] = 0.0;
      ub[r.col] = 1.0;
      integrality[r.col] = true;
    }
  }
  for (int jcol = 0; jcol < n; ++jcol)
    if (integrality[jcol] && !std::isfinite(ub[jcol]))
      throw MpsError(MpsErrorKind::kUnsupported, line_no,
                     "integer column '" + col_names[jcol] +
                         "' has no finite upper bound");

  try {
    return make_instance(name, n, num_rows, std::move(objective),
                         std::move(out_tris), std::move(b), std::move(integrality),
                         std::move(lb), std::move(ub));
  } catch (const std::invalid_argument& e) {
    throw MpsError(MpsErrorKind::kBadRecord, line_no, e.what());
  }
}

// Writer for the same subset; rows come out as R<i>, columns as X<j> and all
// bounds are written explicitly, so parse_mps(write_mps(inst)) reproduces
// the instance structurally.
inline std::string write_mps(const MipInstance& inst) {
  std::ostringstream out;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (int j = 0; j < inst.num_vars; ++j)
    if (!std::isfinite(inst.lower[j]))
      throw std::invalid_argument(
          "write_mps: free lower bounds are outside the supported subset");
  out << "NAME " << inst.name << "\n";
  out << "ROWS\n";
  out << " N OBJ\n";
  for (int i = 0; i < inst.num_cons; ++i) out << " L R" << i << "\n";
  out << "COLUMNS\n";
  std::vector<std::vector<std::pair<int, double>>> col_entries(inst.num_vars);
  for (const Triplet& t : inst.matrix) col_entries[t.col].push_back({t.row, t.value});
  bool integer_block = false;
  for (int j = 0; j < inst.num_vars; ++j) {
    if (inst.integrality[j] != integer_block) {
      integer_block = inst.integrality[j];
      out << "    MARK" << j << " 'MARKER' "
          << (integer_block ? "'INTORG'" : "'INTEND'") << "\n";
    }
    if (inst.objective[j] != 0.0)
      out << "    X" << j << " OBJ " << num(inst.objective[j]) << "\n";
    for (const auto& [row, v] : col_entries[j])
      out << "    X" << j << " R" << row << " " << num(v) << "\n";
    if (inst.objective[j] == 0.0 && col_entries[j].empty())
      out << "    X" << j << " OBJ 0\n";  // keep empty columns visible
  }
  if (integer_block) out << "    MARKEND 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  for (int i = 0; i < inst.num_cons; ++i)
    if (inst.rhs[i] != 0.0) out << "    RHS R" << i << " " << num(inst.rhs[i]) << "\n";
  out << "BOUNDS\n";
  for (int j = 0; j < inst.num_vars; ++j) {
    if (inst.integrality[j] && inst.lower[j] == 0.0 && inst.upper[j] == 1.0) {
      out << " BV BND X" << j << "\n";
      continue;
    }
    if (inst.lower[j] == inst.upper[j]) {
      out << " FX BND X" << j << " " << num(inst.lower[j]) << "\n";
      continue;
    }
    if (inst.lower[j] != 0.0 && std::isfinite(inst.lower[j]))
      out << " LO BND X" << j << " " << num(inst.lower[j]) << "\n";
    if (std::isfinite(inst.upper[j]))
      out << " UP BND X" << j << " " << num(inst.upper[j]) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

}  // namespace mipdive

#endif  // MIPDIVE_MPS_HPP_
