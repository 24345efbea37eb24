#pragma once

// JSON encoding shared by scenarios and reports. +inf travels as the string
// "inf" in both directions; NaN is written as null.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "subschur/core.hpp"
#include "subschur/error.hpp"

namespace subschur::cli {

using json = nlohmann::ordered_json;

/// A scenario that cannot be turned into a problem; `where` is a JSON pointer.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

inline json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline json numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json indices(const Subset& s) {
  json a = json::array();
  for (std::size_t i : s) a.push_back(i);
  return a;
}

/// A measure as {"weights": [...], "support": [...]}.
inline json measure(const Measure& m) {
  return json{{"weights", numbers(m.weights())}, {"support", indices(m.support())}};
}

// Reading

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline double read_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
  }
  throw ScenarioError(path, "expected a number or \"inf\"");
}

inline std::vector<double> read_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], child(path, i)));
  return out;
}

inline std::vector<std::vector<double>> read_matrix(const json& j, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(read_numbers(j[i], child(path, i)));
  return rows;
}

inline std::size_t read_index(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
  throw ScenarioError(path, "expected a non-negative integer");
}

inline Subset read_subset(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of point indices");
  Subset s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::size_t x = read_index(j[i], child(path, i));
    if (x >= n) throw ScenarioError(child(path, i), "point index out of range");
    s.push_back(x);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ScenarioError(path, "missing field '" + key + "'");
  return obj.at(key);
}

inline std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ScenarioError(path, "expected a string");
  return j.get<std::string>();
}

template <class T>
T value_or(const json& obj, const std::string& key, T fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, double>) {
    return read_number(v, child(path, key));
  } else if constexpr (std::is_same_v<T, std::string>) {
    return read_string(v, child(path, key));
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ScenarioError(child(path, key), "expected a boolean");
    return v.get<bool>();
  } else {
    return static_cast<T>(read_index(v, child(path, key)));
  }
}

// CSV

/// Shortest round-trip decimal form; "inf" for +inf, empty for NaN.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_number(r[i]);
      out += '\n';
    }
    return out;
  }

  json to_json() const {
    json rs = json::array();
    for (const auto& r : rows) rs.push_back(numbers(r));
    return json{{"name", name}, {"columns", columns}, {"rows", rs}};
  }
};

}  // namespace subschur::cli
