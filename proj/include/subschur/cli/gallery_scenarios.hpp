#pragma once

// Canned scenarios behind `gallery <name> [key=value ...]`.

#include <map>
#include <string>
#include <vector>

#include "subschur/cli/json_io.hpp"
#include "subschur/cli/runner.hpp"

namespace subschur::cli {

struct GalleryEntry {
  std::string description;
  std::map<std::string, std::string> defaults;
  json (*build)(const std::map<std::string, double>& num, const std::map<std::string, std::string>& str);
};

namespace detail {

inline json block_kernel(const std::map<std::string, double>& num, const std::map<std::string, std::string>& str) {
  json rule;
  if (str.at("rule") == "geometric") rule = json{{"type", "geometric"}, {"a", num.at("a")}, {"b", num.at("b")}};
  else if (str.at("rule") == "harmonic") rule = json{{"type", "harmonic"}};
  else throw ParseError("rule: expected geometric or harmonic");
  return json{{"type", "block"},
              {"n_blocks", static_cast<std::uint64_t>(num.at("n_blocks"))},
              {"sigma_rule", rule},
              {"variant", str.at("variant")}};
}

inline json block_scenario(const std::map<std::string, double>& num, const std::map<std::string, std::string>& str) {
  json tasks = json::array({"solve", "strong_constant", json{{"name", "divergence_sweep"}}, "energy_sweep",
                            "singleton_capacities"});
  if (num.at("n_blocks") <= 4) tasks.push_back("theorem_report");
  return json{{"name", "block"}, {"q", num.at("q")}, {"seed", static_cast<std::uint64_t>(num.at("seed"))},
              {"kernel", block_kernel(num, str)}, {"tasks", tasks}};
}

inline json geometric_scenario(const std::map<std::string, double>& num, const std::map<std::string, std::string>& str) {
  json j = block_scenario(num, str);
  j["name"] = str.at("variant") == "zero_diagonal" ? "geometric" : "geometric_positive";
  j["tasks"] = json::array({"solve", json{{"name", "divergence_sweep"}}, "singleton_capacities"});
  return j;
}

inline json harmonic_scenario(const std::map<std::string, double>& num, const std::map<std::string, std::string>& str) {
  json j = block_scenario(num, str);
  j["name"] = "harmonic";
  j["tasks"] = json::array({"solve", json{{"name", "divergence_sweep"}},
                            json{{"name", "harmonic_sums"}, {"n", json::array({10, 100, 1000, 10000})}, {"bounds", json::array({10, 100})}},
                            json{{"name", "energy_sweep"}, {"exponents", json::array({0.5, 1.0, 1.5, 1.75, 2.0, 3.0})}}});
  return j;
}

inline json riesz_scenario(const std::map<std::string, double>& num, const std::map<std::string, std::string>&) {
  const auto n = static_cast<std::size_t>(num.at("n_points"));
  json pts = json::array(), w = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(json::array({static_cast<double>(i) / static_cast<double>(n)}));
    w.push_back(1.0 / static_cast<double>(n));
  }
  return json{{"name", "riesz"},
              {"q", num.at("q")},
              {"seed", static_cast<std::uint64_t>(num.at("seed"))},
              {"kernel", json{{"type", "sampled"}, {"family", "riesz"}, {"alpha", num.at("alpha")}, {"dim", 1},
                              {"points", pts}, {"weights", w}}},
              {"tasks", json::array({"hypotheses", "quasimetric", "wmp", "singleton_capacities", "weak_constant",
                                     "testing_condition", "operator_norm", "theorem_report"})}};
}

inline json green_scenario(const std::map<std::string, double>& num, const std::map<std::string, std::string>&) {
  const auto n = static_cast<std::size_t>(num.at("n_points"));
  json pts = json::array(), w = json::array();
  for (std::size_t i = 1; i <= n; ++i) {
    pts.push_back(json::array({static_cast<double>(i) / static_cast<double>(n + 1)}));
    w.push_back(1.0 / static_cast<double>(n + 1));
  }
  return json{{"name", "interval_green"},
              {"q", num.at("q")},
              {"seed", static_cast<std::uint64_t>(num.at("seed"))},
              {"kernel", json{{"type", "sampled"}, {"family", "interval_green"}, {"points", pts}, {"weights", w}}},
              {"tasks", json::array({"wmp", "quasimetric", "strong_constant", "solve", "energy", "weak_constant",
                                     "singleton_capacities", "theorem_report"})}};
}

}  // namespace detail

inline const std::map<std::string, GalleryEntry>& gallery_entries() {
  static const std::map<std::string, GalleryEntry> g{
      {"block", {"zero-diagonal block kernel with the harmonic measure",
                 {{"q", "0.5"}, {"n_blocks", "4"}, {"rule", "harmonic"}, {"variant", "zero_diagonal"}, {"a", "1.1"}, {"b", "1.5"}, {"seed", "0"}},
                 detail::block_scenario}},
      {"geometric", {"geometric measure: finite-energy solution, divergent strong constant",
                    {{"q", "0.5"}, {"n_blocks", "40"}, {"rule", "geometric"}, {"variant", "zero_diagonal"}, {"a", "1.1"}, {"b", "1.5"}, {"seed", "0"}},
                    detail::geometric_scenario}},
      {"geometric_positive", {"strictly positive blocks with the geometric measure",
                    {{"q", "0.5"}, {"n_blocks", "40"}, {"rule", "geometric"}, {"variant", "strictly_positive"}, {"a", "1.1"}, {"b", "1.5"}, {"seed", "0"}},
                    detail::geometric_scenario}},
      {"harmonic", {"harmonic measure above the golden threshold",
                    {{"q", "0.75"}, {"n_blocks", "50"}, {"rule", "harmonic"}, {"variant", "zero_diagonal"}, {"a", "1.1"}, {"b", "1.5"}, {"seed", "0"}},
                    detail::harmonic_scenario}},
      {"riesz", {"sampled one-dimensional Riesz kernel",
                 {{"q", "0.5"}, {"alpha", "0.5"}, {"n_points", "8"}, {"seed", "0"}},
                 detail::riesz_scenario}},
      {"interval_green", {"Green kernel of the unit interval on a uniform grid",
                          {{"q", "0.5"}, {"n_points", "12"}, {"seed", "0"}},
                          detail::green_scenario}},
  };
  return g;
}

/// Scenario JSON for a gallery entry with `key=value` overrides.
inline json gallery_scenario(const std::string& name, const std::vector<std::string>& params) {
  const auto& entries = gallery_entries();
  const auto it = entries.find(name);
  if (it == entries.end()) throw ParseError("unknown gallery example '" + name + "'");
  auto values = it->second.defaults;
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("parameter '" + kv + "' is not key=value");
    const std::string key = kv.substr(0, eq);
    if (!values.count(key)) throw ParseError("gallery '" + name + "' has no parameter '" + key + "'");
    values[key] = kv.substr(eq + 1);
  }
  std::map<std::string, double> num;
  std::map<std::string, std::string> str;
  for (const auto& [k, v] : values) {
    str[k] = v;
    if (k == "rule" || k == "variant") continue;
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty()) throw ParseError("parameter '" + k + "' expects a number, got '" + v + "'");
    num[k] = d;
  }
  return it->second.build(num, str);
}

}  // namespace subschur::cli
