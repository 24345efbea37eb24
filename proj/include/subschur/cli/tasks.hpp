#pragma once

// Task registry. Each task reads the instance and earlier results from the
// context and returns a JSON result, a mode tag and optional tables.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subschur/capacity.hpp"
#include "subschur/cli/json_io.hpp"
#include "subschur/cli/scenario.hpp"
#include "subschur/gallery.hpp"
#include "subschur/principles.hpp"
#include "subschur/sublinear.hpp"
#include "subschur/theorem_report.hpp"
#include "subschur/weak_type.hpp"

namespace subschur::cli {

struct RunOptions {
  std::uint64_t seed = 0;
  Tolerances tolerances;
};

struct Context {
  const Instance& instance;
  RunOptions options;
  std::optional<StrongConstant> strong;
  std::optional<SolveResult> supersolution;
  std::optional<SolveResult> solution;
  std::optional<json> verdicts;

  SublinearProblem problem() const { return SublinearProblem(instance.kernel, instance.sigma, instance.q); }

  SearchOptions search() const {
    SearchOptions s;
    s.budget = options.tolerances.budget;
    s.seed = options.seed;
    s.lp.tolerance = options.tolerances.lp;
    return s;
  }
  SubsetSearchOptions subsets() const {
    SubsetSearchOptions s;
    s.budget = options.tolerances.budget;
    s.seed = options.seed;
    s.lp.tolerance = options.tolerances.lp;
    return s;
  }
  StrongOptions strong_options() const {
    StrongOptions o;
    o.seed = options.seed;
    o.wmp = search();
    o.iteration.tolerance = options.tolerances.iteration;
    o.gagliardo.iteration.tolerance = options.tolerances.iteration;
    return o;
  }
};

struct TaskOutput {
  json result = json::object();
  std::string mode = "exact";  ///< exact | randomized | heuristic
  std::vector<Table> tables;
};

using TaskFn = std::function<TaskOutput(Context&, const json& params, const std::string& path)>;

namespace detail {

inline const char* mode_name(SearchMode m) { return m == SearchMode::Exact ? "exact" : "randomized"; }

inline json wmp_json(const WmpReport& r) {
  json j{{"holds", r.holds}, {"h", number(r.constant_h)}, {"programs_solved", r.programs_solved}};
  if (r.witness) {
    j["witness"] = json{{"support", indices(r.witness->support)},
                        {"point", r.witness->point},
                        {"nu", numbers(r.witness->nu)},
                        {"value", number(r.witness->value)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json solve_json(const SolveResult& r) {
  return json{{"status", to_string(r.status)},   {"u", numbers(r.u)},
              {"residual", number(r.residual)},  {"iterations", r.iterations},
              {"lq_norm", number(r.lq_norm)},    {"l1_bound", number(r.l1_bound)},
              {"vanishing", indices(r.vanishing)}};
}

inline json capacity_json(const CapacityResult& c) {
  json j{{"value", number(c.value)}, {"method", c.method}, {"heuristic", c.heuristic},
         {"dual_value", number(c.dual_value)}, {"kkt_verified", c.kkt_verified}};
  j["extremal"] = c.extremal ? measure(*c.extremal) : json(nullptr);
  if (c.certificates) {
    const auto& e = *c.certificates;
    j["certificates"] = json{{"passed", e.passed()},
                             {"upper_on_support", number(e.upper_on_support)},
                             {"below_one", indices(e.below_one)},
                             {"below_one_capacity", number(e.below_one_capacity)},
                             {"off_level_mass", number(e.off_level_mass)},
                             {"tolerance", number(e.tolerance)}};
  }
  return j;
}

inline json estimate_json(const ConstantEstimate& e) {
  json j{{"lower", number(e.lower)}, {"upper", number(e.upper)}, {"method", e.method}, {"mode", mode_name(e.mode)}};
  j["witness"] = e.witness ? measure(*e.witness) : json(nullptr);
  j["witness_set"] = indices(e.witness_set);
  return j;
}

inline json strong_json(const StrongConstant& s) {
  json j = estimate_json(s);
  j["gap_upper"] = number(s.gap_upper);
  j["supersolution_upper"] = number(s.supersolution_upper);
  j["wmp_h"] = number(s.wmp_h);
  return j;
}

inline json weak_json(const WeakConstant& w) {
  json j = estimate_json(w);
  j["capacity_route"] = number(w.capacity_route);
  j["point_mass_route"] = number(w.point_mass_route);
  j["testing_route"] = number(w.testing_route);
  j["cap1_route"] = number(w.cap1_route);
  j["subsets_examined"] = w.subsets_examined;
  return j;
}

inline json energy_json(const EnergyReport& e) {
  json j{{"q", number(e.q)},
         {"quasi_symmetry", number(e.quasi_symmetry)},
         {"s_critical", number(e.s_critical)},
         {"energy_critical", number(e.energy_critical)},
         {"energy_one_plus_q", number(e.energy_one_plus_q)},
         {"lp_norm_critical", number(e.lp_norm_critical)},
         {"lorentz_norm", number(e.lorentz_norm)},
         {"weak_norm", number(e.weak_norm)},
         {"below_threshold", e.below_threshold}};
  if (e.supersolution_estimate) {
    const auto& s = *e.supersolution_estimate;
    j["supersolution_estimate"] = json{{"lhs", number(s.lhs)}, {"rhs", number(s.rhs)},
                                       {"constant", number(s.constant)}, {"holds", s.holds}};
  } else {
    j["supersolution_estimate"] = nullptr;
  }
  return j;
}

inline std::vector<double> param_numbers(const json& p, const std::string& key, std::vector<double> fallback,
                                         const std::string& path) {
  if (!p.contains(key)) return fallback;
  return read_numbers(p.at(key), child(path, key));
}

inline Subset param_set(const json& p, const Context& c, const std::string& path) {
  if (!p.contains("set")) return whole(c.instance.kernel.size());
  return read_subset(p.at("set"), child(path, "set"), c.instance.kernel.size());
}

inline const StrongConstant& ensure_strong(Context& c) {
  if (!c.strong) {
    c.strong = strong_type_constant(c.problem(), c.strong_options());
    if (c.strong->supersolution) c.supersolution = c.strong->supersolution;
    if (c.strong->solution) c.solution = c.strong->solution;
  }
  return *c.strong;
}

inline std::string solve_mode(const Context& c) {
  return c.strong && c.strong->mode == SearchMode::Randomized ? "randomized" : "exact";
}

// Tasks

inline TaskOutput task_hypotheses(Context& c, const json&, const std::string&) {
  const auto& g = c.instance.kernel;
  const auto nd = check_nondegenerate(g, c.instance.sigma);
  TaskOutput o;
  o.result = json{{"symmetric", g.is_symmetric()},
                  {"quasi_symmetry", number(check_quasisymmetric(g))},
                  {"nondegenerate", nd.nondegenerate},
                  {"vanishing_columns", indices(nd.witness)}};
  return o;
}

inline TaskOutput task_wmp(Context& c, const json&, const std::string&) {
  const auto r = wmp_constant(c.instance.kernel, c.search());
  return {wmp_json(r), mode_name(r.mode), {}};
}

inline TaskOutput task_complete_mp(Context& c, const json&, const std::string&) {
  const auto r = complete_mp_constant(c.instance.kernel, c.search());
  return {wmp_json(r), mode_name(r.mode), {}};
}

inline TaskOutput task_quasimetric(Context& c, const json& p, const std::string& path) {
  const std::size_t limit = value_or<std::size_t>(p, "ptolemy_limit", 40, path);
  const auto r = quasimetric_constant(c.instance.kernel, limit);
  TaskOutput o;
  o.result = json{{"is_quasimetric", r.is_quasimetric}, {"symmetric", r.symmetric}, {"kappa", number(r.kappa)},
                  {"ptolemy_holds", r.ptolemy_holds}};
  if (r.violating_triple) {
    const auto& t = *r.violating_triple;
    o.result["violating_triple"] = json::array({t[0], t[1], t[2]});
  } else {
    o.result["violating_triple"] = nullptr;
  }
  return o;
}

inline TaskOutput task_capacity(Context& c, const json& p, const std::string& path) {
  const std::string kind = value_or<std::string>(p, "kind", "cap1", path);
  const Subset k = param_set(p, c, path);
  LpOptions lp;
  lp.tolerance = c.options.tolerances.lp;
  CapacityResult r;
  if (kind == "cap0") r = cap0(c.instance.kernel, k, lp);
  else if (kind == "content") r = content(c.instance.kernel, k, lp);
  else if (kind == "cap1") {
    Cap1Options o;
    o.certificate_tolerance = c.options.tolerances.verdict;
    r = wiener_cap1(c.instance.kernel, k, o);
  } else {
    throw ScenarioError(child(path, "kind"), "unknown capacity '" + kind + "'");
  }
  TaskOutput o;
  o.result = capacity_json(r);
  o.result["kind"] = kind;
  o.result["set"] = indices(k);
  o.mode = r.heuristic ? "heuristic" : "exact";
  return o;
}

inline TaskOutput task_singleton_capacities(Context& c, const json&, const std::string&) {
  const auto& g = c.instance.kernel;
  TaskOutput o;
  json vals = json::array();
  bool exact = true;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double v = wiener_cap1(g, {x}).value;
    const double expected = g(x, x) == 0.0 ? kInf : 1.0 / g(x, x);
    exact = exact && v == expected;
    vals.push_back(number(v));
  }
  o.result = json{{"cap1", vals}, {"matches_reciprocal_diagonal", exact}};
  return o;
}

inline TaskOutput task_strong(Context& c, const json&, const std::string&) {
  c.strong.reset();
  const auto& s = ensure_strong(c);
  return {strong_json(s), mode_name(s.mode), {}};
}

inline TaskOutput task_supersolution(Context& c, const json& p, const std::string& path) {
  const auto prob = c.problem();
  GagliardoOptions g;
  g.lambda_relax = value_or<double>(p, "lambda", g.lambda_relax, path);
  g.psi_scale = value_or<double>(p, "psi_scale", g.psi_scale, path);
  g.iteration.tolerance = c.options.tolerances.iteration;
  double kappa;
  if (p.contains("kappa")) {
    kappa = read_number(p.at("kappa"), child(path, "kappa"));
  } else {
    StrongOptions so = c.strong_options();
    so.certify = false;
    kappa = c.strong ? c.strong->lower : strong_type_constant(prob, so).lower;
  }
  c.supersolution = gagliardo_supersolution(prob, kappa, g);
  TaskOutput o;
  o.result = solve_json(*c.supersolution);
  o.result["kappa"] = number(kappa);
  return o;
}

inline TaskOutput task_solve(Context& c, const json&, const std::string&) {
  const auto prob = c.problem();
  if (!c.supersolution) {
    StrongOptions so = c.strong_options();
    so.certify = false;
    const double kappa = c.strong ? c.strong->lower : strong_type_constant(prob, so).lower;
    GagliardoOptions g;
    g.iteration.tolerance = c.options.tolerances.iteration;
    c.supersolution = gagliardo_supersolution(prob, kappa, g);
  }
  TaskOutput o;
  if (c.supersolution->status != SolveStatus::Supersolution) {
    o.result = solve_json(*c.supersolution);
    return o;
  }
  IterationOptions it;
  it.tolerance = c.options.tolerances.iteration;
  c.solution = monotone_solution(prob, c.supersolution->u, it);
  o.result = solve_json(*c.solution);
  if (c.instance.block_example) {
    const auto& cf = c.instance.block_example->u;
    double dev = 0.0;
    for (std::size_t x = 0; x < cf.size(); ++x) dev = std::max(dev, std::abs(c.solution->u[x] - cf[x]) / cf[x]);
    o.result["closed_form"] = numbers(cf);
    o.result["closed_form_residual"] = number(fixed_point_residual(prob, cf));
    o.result["closed_form_deviation"] = number(dev);
  }
  if (c.instance.modified) {
    const auto& m = *c.instance.modified;
    std::vector<double> u(c.instance.modifier.size(), 0.0);
    for (std::size_t i = 0; i < m.retained.size(); ++i) u[m.retained[i]] = c.instance.modifier[m.retained[i]] * c.solution->u[i];
    o.result["base_solution"] = numbers(u);
    o.result["retained"] = indices(m.retained);
    o.result["excluded"] = indices(m.excluded);
  }
  return o;
}

inline TaskOutput task_energy(Context& c, const json&, const std::string&) {
  const auto prob = c.problem();
  const SolveResult* u = c.solution && c.solution->status == SolveStatus::Solution ? &*c.solution
                         : c.supersolution && c.supersolution->status == SolveStatus::Supersolution ? &*c.supersolution
                                                                                                    : nullptr;
  const auto e = u ? energy_criteria(prob, std::span<const double>(u->u)) : energy_criteria(prob);
  TaskOutput o;
  o.result = energy_json(e);
  o.result["supersolution_source"] = !u ? "none" : u == &*c.supersolution ? "supersolution" : "solution";
  return o;
}

inline TaskOutput task_energy_sweep(Context& c, const json& p, const std::string& path) {
  const auto s = param_numbers(p, "exponents", {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}, path);
  const auto pts = energy_sweep(c.instance.kernel, c.instance.sigma, s);
  TaskOutput o;
  Table t{"energy_vs_s", {"s", "energy"}, {}};
  json arr = json::array();
  for (const auto& e : pts) {
    t.rows.push_back({e.s, e.value});
    arr.push_back(json{{"s", number(e.s)}, {"energy", number(e.value)}});
  }
  o.result = json{{"points", arr}};
  o.tables.push_back(std::move(t));
  return o;
}

inline TaskOutput task_maurey(Context& c, const json&, const std::string&) {
  const auto& s = ensure_strong(c);
  TaskOutput o;
  o.mode = solve_mode(c);
  if (!s.witness || !std::isfinite(s.lower)) {
    o.result = json{{"available", false}, {"reason", "strong constant is infinite"}};
    return o;
  }
  const auto prob = c.problem();
  const auto f = maurey_from_maximizer(prob, *s.witness);
  for (std::size_t x : prob.sigma.support()) {
    if (f[x] == 0.0) {
      o.result = json{{"available", false}, {"reason", "maximizer potential vanishes on supp(sigma)"}};
      return o;
    }
  }
  const auto ch = maurey_energy_chain(prob, f);
  o.result = json{{"available", true}, {"F", numbers(f)}, {"dual_value", number(ch.dual_value)},
                  {"f_mass", number(ch.f_mass)}, {"lhs", number(ch.lhs)}, {"rhs", number(ch.rhs)}, {"holds", ch.holds}};
  return o;
}

inline TaskOutput task_weak(Context& c, const json& p, const std::string& path) {
  WeakOptions w;
  w.search = c.subsets();
  w.with_cap1 = value_or<bool>(p, "with_cap1", false, path);
  const double q = value_or<double>(p, "q", c.instance.q, path);
  const auto r = weak_type_constant(SublinearProblem(c.instance.kernel, c.instance.sigma, q), w);
  TaskOutput o;
  o.result = weak_json(r);
  o.result["q"] = number(q);
  o.mode = mode_name(r.mode);
  return o;
}

inline TaskOutput task_weak_quotient(Context& c, const json& p, const std::string& path) {
  const auto& g = c.instance.kernel;
  const Measure omega = p.contains("omega") ? Measure(g.space_ptr(), read_numbers(p.at("omega"), child(path, "omega"))) : c.instance.sigma;
  const Measure nu = p.contains("nu") ? Measure(g.space_ptr(), read_numbers(p.at("nu"), child(path, "nu"))) : c.instance.sigma;
  const auto r = weak_quotient_bound(g, omega, nu, std::nullopt, c.search());
  TaskOutput o;
  o.result = json{{"value", number(r.value)}, {"bound", number(r.bound)}, {"h", number(r.h)}, {"symmetric", r.symmetric},
                  {"holds", r.value <= r.bound * (1.0 + c.options.tolerances.verdict)}};
  o.mode = subschur::detail::exact_enumeration_fits(g.size(), c.options.tolerances.budget) ? "exact" : "randomized";
  return o;
}

inline TaskOutput task_testing(Context& c, const json&, const std::string&) {
  const auto r = testing_condition_11(c.instance.kernel, c.instance.sigma, c.subsets());
  TaskOutput o;
  o.result = estimate_json(r);
  o.result["ball_constant"] = r.ball_constant ? number(*r.ball_constant) : json(nullptr);
  o.result["ball_witness"] = indices(r.ball_witness);
  o.result["balls"] = r.balls;
  o.mode = mode_name(r.mode);
  return o;
}

inline TaskOutput task_operator_norm(Context& c, const json& p, const std::string& path) {
  const auto ps = param_numbers(p, "p", {1.5, 2.0, 3.0}, path);
  TaskOutput o;
  json arr = json::array();
  for (double e : ps) {
    if (!(e > 1.0) || std::isinf(e)) throw ScenarioError(child(path, "p"), "operator norm needs 1 < p < inf");
    const auto r = pp_operator_norm(c.instance.kernel, c.instance.sigma, e);
    arr.push_back(json{{"p", number(e)}, {"value", number(r.value)}, {"iterations", r.iterations}, {"converged", r.converged}});
  }
  o.result = json{{"norms", arr}};
  return o;
}

inline TaskOutput task_divergence_sweep(Context& c, const json& p, const std::string& path) {
  if (!c.instance.block) throw ScenarioError(path, "divergence_sweep needs a block kernel");
  const BlockSpec& spec = *c.instance.block;
  const double q = c.instance.q;
  const std::size_t n_max = value_or<std::size_t>(p, "n_max", spec.n_blocks, path);
  if (n_max == 0) throw ScenarioError(child(path, "n_max"), "n_max must be positive");
  Table t{"constants_vs_truncation", {"n", "witness_ratio", "solution_mass", "critical_energy"}, {}};
  json arr = json::array();
  bool increasing = true;
  double prev = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    BlockSpec s = spec;
    s.n_blocks = n;
    if (auto* cr = std::get_if<CustomRule>(&s.sigma_rule)) {
      if (cr->weights.size() < 2 * n) throw ScenarioError(child(path, "n_max"), "custom weights shorter than 2 n_max");
      cr->weights.resize(2 * n);
    }
    const auto w = divergence_witness(s, q, n);
    const auto ex = build_block(s, q);
    double mass = 0.0;
    for (std::size_t x = 0; x < ex.u.size(); ++x) mass += std::pow(ex.u[x], q) * ex.sigma[x];
    const double energy = power_integral(potential(ex.kernel, ex.sigma), ex.sigma, q / (1.0 - q));
    increasing = increasing && w.ratio > prev;
    prev = w.ratio;
    t.rows.push_back({static_cast<double>(n), w.ratio, mass, energy});
    arr.push_back(json{{"n", n}, {"witness_ratio", number(w.ratio)}, {"solution_mass", number(mass)},
                       {"critical_energy", number(energy)}});
  }
  TaskOutput o;
  o.result = json{{"rows", arr}, {"witness_increasing", increasing}, {"truncation", n_max}};
  o.tables.push_back(std::move(t));
  return o;
}

inline TaskOutput task_harmonic_sums(Context& c, const json& p, const std::string& path) {
  const double q = value_or<double>(p, "q", c.instance.q, path);
  const auto ns = param_numbers(p, "n", {10, 100, 1000, 10000}, path);
  const auto bounds = param_numbers(p, "bounds", {10, 100}, path);
  Table t{"harmonic_partial_sums", {"n", "solution_mass", "critical_energy"}, {}};
  json rows = json::array();
  for (double n : ns) {
    const double a = harmonic_solution_partial(q, n), b = harmonic_energy_partial(q, n);
    t.rows.push_back({n, a, b});
    rows.push_back(json{{"n", number(n)}, {"solution_mass", number(a)}, {"critical_energy", number(b)}});
  }
  json need = json::array();
  for (double m : bounds) need.push_back(json{{"bound", number(m)}, {"blocks", number(harmonic_blocks_to_exceed(q, m))}});
  TaskOutput o;
  o.result = json{{"q", number(q)}, {"above_threshold", q > kGoldenThreshold}, {"partial_sums", rows}, {"blocks_to_exceed", need}};
  o.tables.push_back(std::move(t));
  return o;
}

inline TaskOutput task_theorem_report(Context& c, const json& p, const std::string& path) {
  ReportOptions r;
  r.search = c.search();
  r.strong = c.strong_options();
  r.weak.search = c.subsets();
  r.subsets = c.subsets();
  r.tolerance = c.options.tolerances.verdict;
  r.pole = value_or<std::size_t>(p, "x0", 0, path);
  r.complete_mp_limit = value_or<std::size_t>(p, "complete_mp_limit", r.complete_mp_limit, path);
  const auto rep = theorem_report(c.problem(), r);
  json rows = json::array();
  for (const auto& v : rep.rows)
    rows.push_back(json{{"id", v.id}, {"statement", v.statement}, {"verdict", to_string(v.verdict)}, {"detail", v.detail}});
  TaskOutput o;
  o.result = json{{"q", number(rep.q)},
                  {"symmetric", rep.symmetric},
                  {"quasi_symmetry", number(rep.quasi_symmetry)},
                  {"wmp", wmp_json(rep.wmp)},
                  {"complete_mp", rep.complete_mp ? wmp_json(*rep.complete_mp) : json(nullptr)},
                  {"quasimetric_kappa", number(rep.quasimetric.kappa)},
                  {"nondegenerate", rep.nondegeneracy.nondegenerate},
                  {"strong", rep.strong ? strong_json(*rep.strong) : json(nullptr)},
                  {"energy", rep.energy ? energy_json(*rep.energy) : json(nullptr)},
                  {"weak", weak_json(rep.weak)},
                  {"weak_11", rep.weak11 ? weak_json(*rep.weak11) : json(nullptr)},
                  {"verdicts", rows}};
  if (rep.strong && rep.strong->solution) o.result["solution"] = solve_json(*rep.strong->solution);
  o.mode = mode_name(rep.wmp.mode);
  c.verdicts = rows;
  return o;
}

}  // namespace detail

/// Name -> task, in the order listed by the schema.
inline const std::map<std::string, TaskFn>& task_registry() {
  static const std::map<std::string, TaskFn> r{
      {"hypotheses", detail::task_hypotheses},
      {"wmp", detail::task_wmp},
      {"complete_mp", detail::task_complete_mp},
      {"quasimetric", detail::task_quasimetric},
      {"capacity", detail::task_capacity},
      {"singleton_capacities", detail::task_singleton_capacities},
      {"strong_constant", detail::task_strong},
      {"supersolution", detail::task_supersolution},
      {"solve", detail::task_solve},
      {"energy", detail::task_energy},
      {"energy_sweep", detail::task_energy_sweep},
      {"maurey", detail::task_maurey},
      {"weak_constant", detail::task_weak},
      {"weak_quotient", detail::task_weak_quotient},
      {"testing_condition", detail::task_testing},
      {"operator_norm", detail::task_operator_norm},
      {"divergence_sweep", detail::task_divergence_sweep},
      {"harmonic_sums", detail::task_harmonic_sums},
      {"theorem_report", detail::task_theorem_report},
  };
  return r;
}

inline bool is_known_task(const std::string& name) { return task_registry().count(name) != 0; }

}  // namespace subschur::cli
