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

#ifndef MIPDIVE_JSON_IO_HPP_
#define MIPDIVE_JSON_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mipdive/mip.hpp"

namespace mipdive {

// Schema violation with the JSON-pointer-ish path of the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error("schema violation at " + path + ": " + what),
        path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

// Infinite bounds have no JSON number; they serialize as null.
inline nlohmann::ordered_json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

inline double bound_from_json(const nlohmann::json& j, double sign,
                              const std::string& path) {
  if (j.is_null()) return sign * kInf;
  if (!j.is_number()) throw SchemaError(path, "expected number or null");
  return j.get<double>();
}

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("/") + key, "missing field");
  return *it;
}

}  // namespace detail

// Canonical single-line JSON form, newline terminated:
// {name, n, m, c, A:[[row,col,val],...], b, integrality, lb, ub}
// Doubles use the shortest round-trip representation, so objective values
// and bounds survive a write/read cycle exactly.
inline std::string write_instance_json(const MipInstance& inst) {
  nlohmann::ordered_json j;
  j["name"] = inst.name;
  j["n"] = inst.num_vars;
  j["m"] = inst.num_cons;
  j["c"] = inst.objective;
  auto& a = j["A"] = nlohmann::ordered_json::array();
  for (const Triplet& t : inst.matrix)
    a.push_back(nlohmann::ordered_json::array({t.row, t.col, t.value}));
  j["b"] = inst.rhs;
  j["integrality"] = inst.integrality;
  auto& lb = j["lb"] = nlohmann::ordered_json::array();
  for (double v : inst.lower) lb.push_back(detail::bound_to_json(v));
  auto& ub = j["ub"] = nlohmann::ordered_json::array();
  for (double v : inst.upper) ub.push_back(detail::bound_to_json(v));
  return j.dump() + "\n";
}

inline MipInstance read_instance_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("/", e.what());
  }
  if (!j.is_object()) throw SchemaError("/", "expected object");

  const auto& name = detail::require_field(j, "name");
  if (!name.is_string()) throw SchemaError("/name", "expected string");
  const auto& n = detail::require_field(j, "n");
  const auto& m = detail::require_field(j, "m");
  if (!n.is_number_integer()) throw SchemaError("/n", "expected integer");
  if (!m.is_number_integer()) throw SchemaError("/m", "expected integer");

  const auto read_doubles = [&](const char* key) {
    const auto& arr = detail::require_field(j, key);
    if (!arr.is_array()) throw SchemaError(std::string("/") + key, "expected array");
    std::vector<double> out;
    for (size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number())
        throw SchemaError(std::string("/") + key + "/" + std::to_string(i),
                          "expected number");
      out.push_back(arr[i].get<double>());
    }
    return out;
  };

  std::vector<double> c = read_doubles("c");
  const auto& a = detail::require_field(j, "A");
  if (!a.is_array()) throw SchemaError("/A", "expected array");
  std::vector<Triplet> tris;
  for (size_t k = 0; k < a.size(); ++k) {
    const std::string path = "/A/" + std::to_string(k);
    if (!a[k].is_array() || a[k].size() != 3)
      throw SchemaError(path, "expected [row, col, value]");
    if (!a[k][0].is_number_integer() || !a[k][1].is_number_integer() ||
        !a[k][2].is_number())
      throw SchemaError(path, "expected [int, int, number]");
    tris.push_back({a[k][0].get<int>(), a[k][1].get<int>(), a[k][2].get<double>()});
  }
  std::vector<double> b = read_doubles("b");
  const auto& integ_j = detail::require_field(j, "integrality");
  if (!integ_j.is_array()) throw SchemaError("/integrality", "expected array");
  std::vector<bool> integ;
  for (size_t i = 0; i < integ_j.size(); ++i) {
    if (!integ_j[i].is_boolean())
      throw SchemaError("/integrality/" + std::to_string(i), "expected bool");
    integ.push_back(integ_j[i].get<bool>());
  }
  const auto read_bounds = [&](const char* key, double sign) {
    const auto& arr = detail::require_field(j, key);
    if (!arr.is_array()) throw SchemaError(std::string("/") + key, "expected array");
    std::vector<double> out;
    for (size_t i = 0; i < arr.size(); ++i)
      out.push_back(detail::bound_from_json(
          arr[i], sign, std::string("/") + key + "/" + std::to_string(i)));
    return out;
  };
  std::vector<double> lb = read_bounds("lb", -1.0);
  std::vector<double> ub = read_bounds("ub", 1.0);

  try {
    return make_instance(name.get<std::string>(), n.get<int>(), m.get<int>(),
                         std::move(c), std::move(tris), std::move(b),
                         std::move(integ), std::move(lb), std::move(ub));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/", e.what());
  }
}

inline void write_instance_file(const MipInstance& inst,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << write_instance_json(inst);
}

inline MipInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_instance_json(ss.str());
}

}  // namespace mipdive

#endif  // MIPDIVE_JSON_IO_HPP_
