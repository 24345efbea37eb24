#pragma once

// Scenario execution and report emission. The report body is deterministic
// for a fixed seed; wall-clock timings live in a separate section.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subschur/cli/json_io.hpp"
#include "subschur/cli/scenario.hpp"
#include "subschur/cli/tasks.hpp"

namespace subschur::cli {

enum ExitCode : int { kExitOk = 0, kExitTaskError = 1, kExitParseError = 2 };

/// Scenario text that is not valid JSON, or a scenario that does not describe a problem.
class ParseError : public Error {
 public:
  using Error::Error;
};

struct Report {
  json body;     ///< deterministic part
  json timings;  ///< wall-clock, excluded from comparisons
  std::vector<Table> tables;
  bool task_error = false;

  /// The file layout: {"report": body, "timings": timings}.
  json document() const { return json{{"report", body}, {"timings", timings}}; }
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<double> tolerance;
};

/// Parses scenario text; syntax errors report line and column.
inline Scenario parse_scenario_text(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
  try {
    return parse_scenario(j, is_known_task);
  } catch (const ScenarioError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError(p.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Report run_scenario(const Scenario& s, const Overrides& ov = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  RunOptions opt;
  opt.seed = ov.seed.value_or(s.seed);
  opt.tolerances = s.tolerances;
  if (ov.budget) opt.tolerances.budget = *ov.budget;
  if (ov.tolerance) opt.tolerances.verdict = *ov.tolerance;

  const Instance inst = [&] {
    try {
      return build_instance(s);
    } catch (const ScenarioError& e) {
      throw ParseError(e.what());
    }
  }();
  Context ctx{inst, opt, {}, {}, {}, {}};

  Report rep;
  json instance{{"kind", inst.kind},
                {"size", inst.kernel.size()},
                {"points", inst.kernel.space().points()},
                {"sigma", numbers(inst.sigma.weights())},
                {"truncation", inst.block ? json(inst.block->n_blocks) : json(nullptr)}};
  if (inst.block_example) {
    instance["variant"] = to_string(inst.block->variant);
    instance["a_min"] = number(inst.block_example->a_min);
    instance["a_max"] = number(inst.block_example->a_max);
    instance["closed_form"] = numbers(inst.block_example->u);
  }
  if (inst.modified) {
    instance["retained"] = indices(inst.modified->retained);
    instance["excluded"] = indices(inst.modified->excluded);
    instance["modifier"] = numbers(inst.modifier);
  }

  json tasks = json::array(), task_times = json::array();
  for (const auto& t : s.tasks) {
    const auto t0 = clock::now();
    json entry{{"name", t.name}};
    try {
      TaskOutput out = task_registry().at(t.name)(ctx, t.params, t.path);
      entry["status"] = "ok";
      entry["mode"] = out.mode;
      entry["result"] = std::move(out.result);
      for (auto& tab : out.tables) {
        // Table names double as file names, so repeats get a numeric suffix.
        const std::string base = tab.name;
        for (int k = 2; std::any_of(rep.tables.begin(), rep.tables.end(), [&](const Table& x) { return x.name == tab.name; }); ++k)
          tab.name = base + "_" + std::to_string(k);
        entry["tables"].push_back(tab.name);
        rep.tables.push_back(std::move(tab));
      }
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["error"] = e.what();
      rep.task_error = true;
    }
    tasks.push_back(std::move(entry));
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    task_times.push_back(json{{"name", t.name}, {"ms", ms}});
  }

  rep.body = json{{"scenario", s.name},
                  {"q", number(s.q)},
                  {"seed", opt.seed},
                  {"tolerances", json{{"lp", number(opt.tolerances.lp)},
                                      {"iteration", number(opt.tolerances.iteration)},
                                      {"verdict", number(opt.tolerances.verdict)},
                                      {"budget", opt.tolerances.budget}}},
                  {"instance", instance},
                  {"tasks", tasks},
                  {"verdicts", ctx.verdicts ? *ctx.verdicts : json::array()}};
  json tables = json::array();
  for (const auto& tab : rep.tables) tables.push_back(tab.to_json());
  rep.body["tables"] = tables;
  const double total = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  rep.timings = json{{"total_ms", total}, {"tasks", task_times}};
  return rep;
}

/// Writes <dir>/<stem>.json and one <dir>/<stem>.<table>.csv per table.
inline void write_report(const Report& rep, const std::filesystem::path& dir, const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto put = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw Error(p.string() + ": cannot write");
  };
  put(dir / (stem + ".json"), rep.document().dump(2) + "\n");
  for (const auto& t : rep.tables) put(dir / (stem + "." + t.name + ".csv"), t.csv());
}

}  // namespace subschur::cli
