#pragma once

// Scenario files: a kernel description, a measure, the exponent q and an
// ordered task list.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subschur/cli/json_io.hpp"
#include "subschur/core.hpp"
#include "subschur/gallery.hpp"
#include "subschur/principles.hpp"

namespace subschur::cli {

struct Tolerances {
  double lp = 1e-9;
  double iteration = 1e-12;
  double verdict = 1e-8;
  std::uint64_t budget = std::uint64_t{1} << 18;
};

struct TaskRequest {
  std::string name;
  json params = json::object();
  std::string path;  ///< JSON pointer of the request in the scenario
};

struct Scenario {
  std::string name;
  json kernel;                 ///< validated kernel description
  std::optional<json> sigma;   ///< absent: builder measure or counting measure
  double q = 0.5;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::vector<TaskRequest> tasks;
};

/// The problem a scenario describes, built from its kernel and measure fields.
struct Instance {
  Kernel kernel;
  Measure sigma;
  double q;
  std::string kind;                         ///< matrix | block | sampled | modified
  std::optional<BlockSpec> block;
  std::optional<BlockExample> block_example;
  std::optional<ModifiedKernel> modified;   ///< retained/excluded refer to the base space
  std::vector<double> modifier;             ///< g on the base space when modified
};

namespace detail {

inline const std::vector<std::string>& kernel_types() {
  static const std::vector<std::string> t{"matrix", "block", "sampled", "modified"};
  return t;
}

inline BlockSpec read_block_spec(const json& k, const std::string& path) {
  BlockSpec spec;
  spec.n_blocks = read_index(require(k, "n_blocks", path), child(path, "n_blocks"));
  const std::string rp = child(path, "sigma_rule");
  const json& rule = require(k, "sigma_rule", path);
  const std::string type = read_string(require(rule, "type", rp), child(rp, "type"));
  if (type == "geometric") {
    spec.sigma_rule = GeometricRule{read_number(require(rule, "a", rp), child(rp, "a")),
                                    read_number(require(rule, "b", rp), child(rp, "b"))};
  } else if (type == "harmonic") {
    spec.sigma_rule = HarmonicRule{};
  } else if (type == "custom") {
    spec.sigma_rule = CustomRule{read_numbers(require(rule, "weights", rp), child(rp, "weights"))};
  } else {
    throw ScenarioError(child(rp, "type"), "unknown sigma rule '" + type + "'");
  }
  const std::string variant = value_or<std::string>(k, "variant", "zero_diagonal", path);
  if (variant == "zero_diagonal") spec.variant = BlockVariant::ZeroDiagonal;
  else if (variant == "strictly_positive") spec.variant = BlockVariant::StrictlyPositive;
  else throw ScenarioError(child(path, "variant"), "unknown variant '" + variant + "'");
  return spec;
}

inline SampledKernelSpec read_sampled_spec(const json& k, const std::string& path) {
  SampledKernelSpec spec;
  const std::string family = read_string(require(k, "family", path), child(path, "family"));
  if (family == "riesz") {
    spec.family = RieszFamily{read_number(require(k, "alpha", path), child(path, "alpha")),
                              read_index(require(k, "dim", path), child(path, "dim"))};
  } else if (family == "interval_green") {
    spec.family = IntervalGreenFamily{};
  } else {
    throw ScenarioError(child(path, "family"), "unknown sampled family '" + family + "'");
  }
  spec.points = read_matrix(require(k, "points", path), child(path, "points"));
  spec.weights = read_numbers(require(k, "weights", path), child(path, "weights"));
  return spec;
}

/// Kernel plus the measure the description carries (block and sampled kernels).
struct Built {
  Kernel kernel;
  std::optional<Measure> sigma;
  std::string kind;
  std::optional<BlockSpec> block;
  std::optional<BlockExample> block_example;
};

inline Built build_kernel(const json& k, double q, const std::string& path) {
  const std::string type = read_string(require(k, "type", path), child(path, "type"));
  try {
    if (type == "matrix") {
      const std::string rp = child(path, "rows");
      const auto rows = read_matrix(require(k, "rows", path), rp);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw ScenarioError(rp, "kernel matrix must be square");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          if (!(rows[i][j] >= 0.0)) throw ScenarioError(child(child(rp, i), j), "kernel entries must be nonnegative");
      }
      SpacePtr space;
      if (k.contains("points")) {
        std::vector<std::string> ids;
        const json& pts = k.at("points");
        if (!pts.is_array()) throw ScenarioError(child(path, "points"), "expected an array of identifiers");
        for (std::size_t i = 0; i < pts.size(); ++i) ids.push_back(read_string(pts[i], child(child(path, "points"), i)));
        space = std::make_shared<const Space>(std::move(ids));
      } else {
        space = Space::indexed(rows.size());
      }
      return {Kernel::from_rows(space, rows), std::nullopt, "matrix", std::nullopt, std::nullopt};
    }
    if (type == "block") {
      const auto spec = read_block_spec(k, path);
      auto ex = build_block(spec, q);
      return {ex.kernel, ex.sigma, "block", spec, ex};
    }
    if (type == "sampled") {
      auto ex = build_sampled(read_sampled_spec(k, path));
      return {ex.kernel, ex.sigma, "sampled", std::nullopt, std::nullopt};
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(path, e.what());
  }
  if (type == "modified") throw ScenarioError(path, "modified kernels cannot be nested");
  throw ScenarioError(child(path, "type"), "unknown kernel type '" + type + "'");
}

inline Measure read_sigma(const json& s, const SpacePtr& space, const std::string& path) {
  try {
    if (s.is_array()) return Measure(space, read_numbers(s, path));
    const std::string rule = read_string(require(s, "rule", path), child(path, "rule"));
    if (rule == "counting") return Measure(space, std::vector<double>(space->size(), 1.0));
    if (rule == "uniform") {
      const double v = read_number(require(s, "value", path), child(path, "value"));
      return Measure(space, std::vector<double>(space->size(), v));
    }
    throw ScenarioError(child(path, "rule"), "unknown measure rule '" + rule + "'");
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(path, e.what());
  }
}

}  // namespace detail

/// Structural parse; task names are checked against `known_task`.
inline Scenario parse_scenario(const json& j, const std::function<bool(const std::string&)>& known_task) {
  if (!j.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  Scenario s;
  s.name = value_or<std::string>(j, "name", "scenario", "");
  s.q = read_number(require(j, "q", ""), "/q");
  if (!(s.q > 0.0) || std::isinf(s.q)) throw ScenarioError("/q", "q must be positive and finite");
  s.seed = value_or<std::uint64_t>(j, "seed", 0, "");
  s.kernel = require(j, "kernel", "");
  if (!s.kernel.is_object()) throw ScenarioError("/kernel", "expected an object");
  if (j.contains("sigma")) s.sigma = j.at("sigma");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ScenarioError("/tolerances", "expected an object");
    s.tolerances.lp = value_or<double>(t, "lp", s.tolerances.lp, "/tolerances");
    s.tolerances.iteration = value_or<double>(t, "iteration", s.tolerances.iteration, "/tolerances");
    s.tolerances.verdict = value_or<double>(t, "verdict", s.tolerances.verdict, "/tolerances");
    s.tolerances.budget = value_or<std::uint64_t>(t, "budget", s.tolerances.budget, "/tolerances");
  }
  if (j.contains("tasks")) {
    const json& ts = j.at("tasks");
    if (!ts.is_array()) throw ScenarioError("/tasks", "expected an array");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string path = child("/tasks", i);
      TaskRequest r;
      r.path = path;
      if (ts[i].is_string()) {
        r.name = ts[i].get<std::string>();
      } else if (ts[i].is_object()) {
        r.name = read_string(require(ts[i], "name", path), child(path, "name"));
        for (const auto& [k, v] : ts[i].items())
          if (k != "name") r.params[k] = v;
      } else {
        throw ScenarioError(path, "a task is a name or an object with a name");
      }
      if (!known_task(r.name)) throw ScenarioError(path, "unknown task '" + r.name + "'");
      s.tasks.push_back(std::move(r));
    }
  }
  return s;
}

/// Builds kernel and measure. A modified kernel carries the measure g^{1+q} sigma
/// on the retained points, so a solution v maps back to u = g v.
inline Instance build_instance(const Scenario& s) {
  const std::string type = read_string(require(s.kernel, "type", "/kernel"), "/kernel/type");
  const bool modified = type == "modified";
  const std::string base_path = modified ? "/kernel/base" : "/kernel";
  const json& base = modified ? require(s.kernel, "base", "/kernel") : s.kernel;
  auto b = detail::build_kernel(base, s.q, base_path);

  Measure sigma = s.sigma ? detail::read_sigma(*s.sigma, b.kernel.space_ptr(), "/sigma")
                  : b.sigma ? *b.sigma
                            : Measure(b.kernel.space_ptr(), std::vector<double>(b.kernel.size(), 1.0));
  if (!modified) return {b.kernel, sigma, s.q, b.kind, b.block, b.block_example, std::nullopt, {}};

  const std::size_t x0 = read_index(require(s.kernel, "x0", "/kernel"), "/kernel/x0");
  if (x0 >= b.kernel.size()) throw ScenarioError("/kernel/x0", "pole outside the space");
  auto g = modifier(b.kernel, x0);
  ModifiedKernel mk = [&] {
    try {
      return modify_kernel(b.kernel, g);
    } catch (const Error& e) {
      throw ScenarioError("/kernel", e.what());
    }
  }();
  std::vector<double> w;
  for (std::size_t x : mk.retained) w.push_back(std::pow(g[x], 1.0 + s.q) * sigma[x]);
  Measure omega(mk.kernel.space_ptr(), std::move(w));
  Kernel k = mk.kernel;
  return {std::move(k), std::move(omega), s.q, "modified", std::nullopt, std::nullopt, std::move(mk), std::move(g)};
}

}  // namespace subschur::cli
