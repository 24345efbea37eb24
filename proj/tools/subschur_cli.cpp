// subschur: scenario-driven batch runner.
//
//   subschur analyze <scenario.json>... [--out DIR] [--seed N] [--budget N] [--tol X] [--jobs N]
//   subschur gallery <name> [key=value ...] [--out DIR] ...
//   subschur schema
//
// Exit codes: 0 every task succeeded, 1 a task failed or output could not be
// written, 2 a scenario did not parse or named an unknown task.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "subschur/cli/gallery_scenarios.hpp"
#include "subschur/cli/runner.hpp"
#include "subschur/schema_text.hpp"

namespace fs = std::filesystem;
using namespace subschur::cli;

namespace {

struct Common {
  std::string out = "reports";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<double> tol;
  unsigned jobs = 1;

  Overrides overrides() const { return {seed, budget, tol}; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory for reports and CSV tables");
  app->add_option("--seed", c.seed, "Seed for randomized searches (overrides the scenario)");
  app->add_option("--budget", c.budget, "Exact-enumeration budget (overrides the scenario)");
  app->add_option("--tol", c.tol, "Verdict and certificate tolerance (overrides the scenario)");
}

/// Runs one scenario and writes its outputs; returns the exit code.
int run_one(const Scenario& s, const std::string& stem, const Common& c, std::mutex& log) {
  try {
    const Report rep = run_scenario(s, c.overrides());
    write_report(rep, c.out, stem);
    std::lock_guard lock(log);
    std::cout << stem << ": " << rep.body["tasks"].size() << " tasks" << (rep.task_error ? ", with errors" : "")
              << " -> " << (fs::path(c.out) / (stem + ".json")).string() << "\n";
    return rep.task_error ? kExitTaskError : kExitOk;
  } catch (const ParseError& e) {
    std::lock_guard lock(log);
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::lock_guard lock(log);
    std::cerr << "error: " << stem << ": " << e.what() << "\n";
    return kExitTaskError;
  }
}

int analyze(const std::vector<std::string>& files, const Common& c) {
  std::mutex log;
  std::vector<int> codes(files.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      try {
        const Scenario s = parse_scenario_text(read_file(files[i]), files[i]);
        codes[i] = run_one(s, fs::path(files[i]).stem().string(), c, log);
      } catch (const ParseError& e) {
        std::lock_guard lock(log);
        std::cerr << "error: " << e.what() << "\n";
        codes[i] = kExitParseError;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(c.jobs, static_cast<unsigned>(files.size())));
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  return *std::max_element(codes.begin(), codes.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear kernel equations on finite spaces: scenario runner"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> files;
  auto* an = app.add_subcommand("analyze", "Run scenario files");
  an->add_option("scenarios", files, "Scenario JSON files")->required();
  an->add_option("--jobs", common.jobs, "Worker threads across scenario files")->check(CLI::PositiveNumber);
  add_common(an, common);

  std::string name;
  std::vector<std::string> params;
  auto* ga = app.add_subcommand("gallery", "Run a canned example");
  ga->add_option("name", name, "Example name")->required();
  ga->add_option("params", params, "key=value overrides");
  add_common(ga, common);
  ga->footer([] {
    std::string s = "Examples:\n";
    for (const auto& [k, e] : gallery_entries()) s += "  " + k + ": " + e.description + "\n";
    return s;
  }());

  auto* sc = app.add_subcommand("schema", "Print the scenario JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParseError;
  }

  if (sc->parsed()) {
    std::cout << subschur::kScenarioSchema;
    return kExitOk;
  }
  if (an->parsed()) return analyze(files, common);

  std::mutex log;
  try {
    const Scenario s = parse_scenario(gallery_scenario(name, params), is_known_task);
    return run_one(s, "gallery_" + name, common, log);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}
