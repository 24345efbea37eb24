#pragma once

// Full pipeline over (G, sigma, q): hypothesis checks, constants,
// supersolution, solution, energy estimates, weak-type analysis and the
// modified-kernel route, summarized as a table of implication verdicts.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subschur/capacity.hpp"
#include "subschur/principles.hpp"
#include "subschur/sublinear.hpp"
#include "subschur/weak_type.hpp"

namespace subschur {

struct VerdictRow {
  std::string id;
  std::string statement;
  Verdict verdict = Verdict::NotApplicable;
  std::string detail;
};

struct ModifiedRoute {
  std::size_t pole = 0;
  Subset retained;
  Subset excluded;
  double excluded_mass = 0.0;       ///< sigma-mass on points with G(x, x0) = 0
  bool complete_mp = false;         ///< hypothesis (A): finite complete MP constant of G
  bool quasimetric = false;         ///< hypothesis (B): modified kernel is quasimetric
  double modified_kappa = kInf;
  std::optional<SolveResult> solution;  ///< v on the modified problem
  std::vector<double> u;            ///< g v on the retained points, 0 elsewhere
  double residual = kInf;           ///< of u for G restricted to the retained points
};

struct TheoremReport {
  double q = 0.0;
  bool symmetric = false;
  double quasi_symmetry = kInf;
  WmpReport wmp;
  std::optional<WmpReport> complete_mp;
  QuasimetricReport quasimetric;
  NondegeneracyReport nondegeneracy;

  std::optional<StrongConstant> strong;
  std::optional<EnergyReport> energy;
  std::optional<MaureyChain> maurey;
  WeakConstant weak;
  std::optional<WeakConstant> weak11;
  std::optional<TestingConstant> testing;
  std::vector<std::pair<double, OperatorNorm>> operator_norms;
  std::optional<ModifiedRoute> modified;

  std::vector<VerdictRow> rows;

  const VerdictRow* row(const std::string& id) const {
    for (const auto& r : rows)
      if (r.id == id) return &r;
    return nullptr;
  }
};

struct ReportOptions {
  SearchOptions search{};
  StrongOptions strong{};
  WeakOptions weak{};
  SubsetSearchOptions subsets{};
  std::size_t pole = 0;
  /// The complete MP search runs only up to this many points.
  std::size_t complete_mp_limit = 10;
  std::vector<double> pp_exponents{1.5, 2.0, 3.0};
  double tolerance = 1e-8;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

inline void push(TheoremReport& rep, std::string id, std::string statement, Verdict v, std::string detail) {
  rep.rows.push_back({std::move(id), std::move(statement), v, std::move(detail)});
}

inline Verdict holds(bool ok) { return ok ? Verdict::Confirmed : Verdict::Violated; }

inline void strong_rows(TheoremReport& rep, const SublinearProblem& p, const ReportOptions& opt) {
  const double q = p.q;
  const double tol = opt.tolerance;
  const bool qs = std::isfinite(rep.quasi_symmetry);
  const bool wmp = rep.wmp.holds;
  const bool hyp = qs && wmp;
  const std::string unmet = !qs ? "kernel is not quasi-symmetric" : "weak maximum principle fails";

  rep.strong = strong_type_constant(p, opt.strong);
  const StrongConstant& s = *rep.strong;
  const bool finite = std::isfinite(s.lower);
  const SolveResult* sup = s.supersolution ? &*s.supersolution : nullptr;
  const SolveResult* sol = s.solution ? &*s.solution : nullptr;
  const bool has_sup = sup && sup->status == SolveStatus::Supersolution;
  const bool has_sol = sol && sol->status == SolveStatus::Solution;

  if (!hyp) {
    push(rep, "strong_implies_supersolution", "finite strong constant gives a supersolution in L^q", Verdict::NotApplicable, unmet);
  } else {
    push(rep, "strong_implies_supersolution", "finite strong constant gives a supersolution in L^q",
         finite ? holds(has_sup) : Verdict::NotApplicable,
         "kappa >= " + fmt(s.lower) + (has_sup ? ", supersolution certified" : ", no supersolution"));
  }

  const bool nondeg = rep.nondegeneracy.nondegenerate;
  if (!hyp || !nondeg || !has_sup) {
    push(rep, "supersolution_implies_solution", "a supersolution yields a positive solution", Verdict::NotApplicable,
         !hyp ? unmet : !nondeg ? "kernel is degenerate" : "no supersolution");
  } else {
    push(rep, "supersolution_implies_solution", "a supersolution yields a positive solution", holds(has_sol),
         std::string("status ") + to_string(sol->status) + ", residual " + fmt(sol->residual));
  }

  if (!hyp || !rep.symmetric || rep.wmp.mode != SearchMode::Exact || !has_sup) {
    push(rep, "supersolution_bounds_constant", "a supersolution bounds the strong constant", Verdict::NotApplicable,
         !hyp ? unmet : !rep.symmetric ? "bound implemented for symmetric kernels" :
         rep.wmp.mode != SearchMode::Exact ? "WMP constant not exact" : "no supersolution");
  } else {
    push(rep, "supersolution_bounds_constant", "a supersolution bounds the strong constant",
         holds(s.upper >= s.lower * (1.0 - tol)), "lower " + fmt(s.lower) + " <= upper " + fmt(s.upper));
  }

  if (!has_sol) {
    push(rep, "solution_norm_bound", "||u||_{L^q} <= kappa^{1/(1-q)}", Verdict::NotApplicable, "no solution");
  } else {
    const double bound = std::pow(s.gap_upper, 1.0 / (1.0 - q));
    push(rep, "solution_norm_bound", "||u||_{L^q} <= kappa^{1/(1-q)}", holds(sol->lq_norm <= bound * (1.0 + tol)),
         fmt(sol->lq_norm) + " <= " + fmt(bound));
  }

  const SolveResult* best = has_sol ? sol : has_sup ? sup : nullptr;
  if (!qs || !best) {
    rep.energy = energy_criteria(p);
    push(rep, "energy_estimate", "supersolution controls the energy of G sigma", Verdict::NotApplicable,
         !qs ? "kernel is not quasi-symmetric" : "no supersolution");
  } else {
    rep.energy = energy_criteria(p, std::span<const double>(best->u), 1e-10);
    const auto& e = *rep.energy->supersolution_estimate;
    push(rep, "energy_estimate", "supersolution controls the energy of G sigma", holds(e.holds),
         std::string(rep.energy->below_threshold ? "s = q/(1-q): " : "s = 1+q: ") + fmt(e.lhs) + " <= " + fmt(e.rhs));
  }

  bool f_positive = finite && s.witness.has_value();
  std::vector<double> f;
  if (f_positive) {
    f = maurey_from_maximizer(p, *s.witness);
    for (std::size_t x : p.sigma.support()) f_positive = f_positive && f[x] > 0.0;
  }
  if (!qs || !f_positive) {
    push(rep, "maurey_energy_chain", "a Maurey function bounds the critical energy", Verdict::NotApplicable,
         !qs ? "kernel is not quasi-symmetric" : "maximizer potential vanishes on supp(sigma)");
  } else {
    rep.maurey = maurey_energy_chain(p, f, 1e-10);
    push(rep, "maurey_energy_chain", "a Maurey function bounds the critical energy", holds(rep.maurey->holds),
         fmt(rep.maurey->lhs) + " <= " + fmt(rep.maurey->rhs) + ", dual value " + fmt(rep.maurey->dual_value));
  }

  if (!hyp || !nondeg) {
    push(rep, "lorentz_sufficiency", "G sigma in the Lorentz space gives the strong inequality", Verdict::NotApplicable,
         !hyp ? unmet : "kernel is degenerate");
  } else {
    const double lor = rep.energy->lorentz_norm;
    push(rep, "lorentz_sufficiency", "G sigma in the Lorentz space gives the strong inequality",
         std::isfinite(lor) ? holds(finite) : Verdict::NotApplicable, "Lorentz norm " + fmt(lor) + ", kappa >= " + fmt(s.lower));
  }

  if (!qs) {
    push(rep, "degenerate_dichotomy", "positive solutions exist exactly for non-degenerate kernels", Verdict::NotApplicable,
         "kernel is not quasi-symmetric");
  } else if (!nondeg) {
    const bool positive = has_sol;
    push(rep, "degenerate_dichotomy", "positive solutions exist exactly for non-degenerate kernels", holds(!positive),
         sol ? std::string("degenerate kernel, no positive solution; status ") + to_string(sol->status)
             : std::string("degenerate kernel, no positive solution"));
  } else if (has_sup) {
    push(rep, "degenerate_dichotomy", "positive solutions exist exactly for non-degenerate kernels", holds(has_sol),
         std::string("non-degenerate kernel, status ") + (sol ? to_string(sol->status) : "none"));
  } else {
    push(rep, "degenerate_dichotomy", "positive solutions exist exactly for non-degenerate kernels", Verdict::NotApplicable,
         "no supersolution");
  }
}

inline void weak_rows(TheoremReport& rep, const SublinearProblem& p, const ReportOptions& opt) {
  const double tol = opt.tolerance;
  WeakOptions wopt = opt.weak;
  wopt.with_cap1 = p.q <= 1.0 && rep.symmetric && rep.wmp.holds;
  rep.weak = weak_type_constant(p, wopt);
  const WeakConstant& w = rep.weak;

  if (w.witness && std::isfinite(w.capacity_route) && p.q <= 1.0) {
    const double attained = norm(potential(p.kernel, *w.witness), p.sigma, NormSpec::weak(p.q));
    push(rep, "weak_capacity_characterization", "the capacity route constant is attained by a measure",
         holds(attained >= w.capacity_route * (1.0 - tol)), fmt(attained) + " vs " + fmt(w.capacity_route));
  } else {
    push(rep, "weak_capacity_characterization", "the capacity route constant is attained by a measure",
         Verdict::NotApplicable, p.q > 1.0 ? "checked through the point-mass route" : "infinite constant");
  }

  if (p.q > 1.0) {
    push(rep, "point_mass_route", "point masses bound the weak constant from below",
         holds(w.point_mass_route <= w.capacity_route * (1.0 + tol)),
         fmt(w.point_mass_route) + " <= " + fmt(w.capacity_route) + ", testing route " + fmt(w.testing_route));
  }

  if (!wopt.with_cap1) {
    push(rep, "weak_cap1_equivalence", "cap0 and cap1 routes agree within h", Verdict::NotApplicable,
         p.q > 1.0 ? "q > 1" : !rep.symmetric ? "kernel is not symmetric" : "weak maximum principle fails");
  } else {
    const double h = rep.wmp.constant_h;
    const bool ok = w.cap1_route <= w.capacity_route * (1.0 + tol) && w.capacity_route <= h * w.cap1_route * (1.0 + tol);
    push(rep, "weak_cap1_equivalence", "cap0 and cap1 routes agree within h", holds(ok),
         "cap0 route " + fmt(w.capacity_route) + ", cap1 route " + fmt(w.cap1_route) + ", h " + fmt(h));
  }

  if (p.q < 1.0 && rep.energy) {
    const double wn = rep.energy->weak_norm;
    push(rep, "weak_energy", "weak inequality and G sigma in the weak Lorentz space",
         rep.symmetric && rep.wmp.holds ? holds(std::isfinite(wn) == std::isfinite(w.capacity_route)) : Verdict::NotApplicable,
         "weak norm of G sigma " + fmt(wn) + ", weak constant " + fmt(w.capacity_route));
  }
}

inline void unit_rows(TheoremReport& rep, const SublinearProblem& p, const ReportOptions& opt) {
  const double tol = opt.tolerance;
  rep.weak11 = weak_type_constant(SublinearProblem(p.kernel, p.sigma, 1.0), opt.weak);
  rep.testing = testing_condition_11(p.kernel, p.sigma, opt.subsets);
  for (double e : opt.pp_exponents) rep.operator_norms.emplace_back(e, pp_operator_norm(p.kernel, p.sigma, e));

  if (!rep.symmetric || !rep.wmp.holds) {
    push(rep, "weak_11_equivalence", "weak (1,1), (p,p) and testing constants are comparable", Verdict::NotApplicable,
         !rep.symmetric ? "kernel is not symmetric" : "weak maximum principle fails");
    return;
  }
  const double h = rep.wmp.constant_h;
  const double c11 = rep.weak11->capacity_route, ct = rep.testing->lower;
  double t2 = kInf;
  bool ok = true;
  std::string detail = "C11 " + fmt(c11) + ", testing " + fmt(ct);
  for (const auto& [e, on] : rep.operator_norms) {
    if (e == 2.0) t2 = on.value;
    ok = ok && ct <= on.value * (1.0 + 1e-9);  // testing constant is below every (p,p) norm
    detail += ", p=" + fmt(e) + ": " + fmt(on.value);
  }
  ok = ok && c11 <= h * ct * (1.0 + tol);
  const bool finite_together = std::isfinite(c11) == std::isfinite(ct) && std::isfinite(ct) == std::isfinite(t2);
  const double factor = 8.0 * std::pow(h, 4);
  auto within = [&](double a, double b) { return a == b || (a <= factor * b * (1 + tol) && b <= factor * a * (1 + tol)); };
  ok = ok && finite_together && within(c11, t2) && within(c11, ct) && within(t2, ct);
  if (rep.testing->ball_constant) {
    ok = ok && *rep.testing->ball_constant <= ct * (1.0 + tol);
    detail += ", balls " + fmt(*rep.testing->ball_constant);
  }
  push(rep, "weak_11_equivalence", "weak (1,1), (p,p) and testing constants are comparable", holds(ok), detail);
}

inline void modified_rows(TheoremReport& rep, const SublinearProblem& p, const ReportOptions& opt) {
  const std::size_t n = p.size();
  if (n == 0 || opt.pole >= n || p.q >= 1.0) return;
  ModifiedRoute m;
  m.pole = opt.pole;
  m.complete_mp = rep.complete_mp && rep.complete_mp->holds;
  const auto g = modifier(p.kernel, opt.pole);
  ModifiedKernel mk = [&] {
    try {
      return modify_kernel(p.kernel, g);
    } catch (const DomainError&) {
      return ModifiedKernel{p.kernel, {}, whole(n)};
    }
  }();
  m.retained = mk.retained;
  m.excluded = mk.excluded;
  m.excluded_mass = p.sigma.mass_of(m.excluded);
  const std::string id = "modified_kernel_solution", statement = "the modified problem has a solution mapping back to u = g v";
  if (m.retained.empty()) {
    rep.modified = m;
    push(rep, id, statement, Verdict::NotApplicable, "modifier excludes every point");
    return;
  }
  const auto qm = quasimetric_constant(mk.kernel, 0);
  m.quasimetric = qm.is_quasimetric;
  m.modified_kappa = qm.kappa;
  if (!std::isfinite(rep.quasi_symmetry) || !rep.nondegeneracy.nondegenerate || (!m.complete_mp && !m.quasimetric)) {
    rep.modified = m;
    push(rep, id, statement, Verdict::NotApplicable,
         !std::isfinite(rep.quasi_symmetry) ? "kernel is not quasi-symmetric"
         : !rep.nondegeneracy.nondegenerate ? "kernel is degenerate"
                                            : "neither complete MP nor quasimetric modification");
    return;
  }

  std::vector<double> w;
  for (std::size_t x : m.retained) w.push_back(std::pow(g[x], 1.0 + p.q) * p.sigma[x]);
  const SublinearProblem mp(mk.kernel, Measure(mk.kernel.space_ptr(), std::move(w)), p.q);
  StrongOptions so = opt.strong;
  so.certify = false;
  const auto kappa = strong_type_constant(mp, so);
  Verdict v = Verdict::Violated;
  std::string detail;
  if (mp.sigma.is_zero() || !std::isfinite(kappa.lower) || kappa.lower == 0.0) {
    v = Verdict::NotApplicable;
    detail = "modified strong constant is " + fmt(kappa.lower);
  } else {
    const auto sup = gagliardo_supersolution(mp, kappa.lower, opt.strong.gagliardo);
    if (sup.status == SolveStatus::Supersolution) {
      m.solution = monotone_solution(mp, sup.u, opt.strong.iteration);
      m.u.assign(n, 0.0);
      for (std::size_t i = 0; i < m.retained.size(); ++i) m.u[m.retained[i]] = g[m.retained[i]] * m.solution->u[i];
      const SublinearProblem back(p.kernel.restricted(m.retained), p.sigma.on_subspace(mk.kernel.space_ptr(), m.retained), p.q);
      std::vector<double> ur;
      for (std::size_t x : m.retained) ur.push_back(m.u[x]);
      m.residual = fixed_point_residual(back, ur);
      const bool ok = m.solution->status == SolveStatus::Solution && m.residual <= 1e-9;
      v = holds(ok);
      detail = std::string("status ") + to_string(m.solution->status) + ", residual of g v " + fmt(m.residual);
    } else {
      detail = "no supersolution on the modified problem";
    }
  }
  if (m.excluded_mass > 0.0) detail += ", sigma-mass " + fmt(m.excluded_mass) + " on excluded points";
  rep.modified = m;
  push(rep, id, statement, v, detail);
}

}  // namespace detail

/// Runs the whole pipeline on (G, sigma, q) and records one verdict per implication.
inline TheoremReport theorem_report(const SublinearProblem& p, const ReportOptions& opt = {}) {
  TheoremReport rep;
  rep.q = p.q;
  rep.symmetric = p.kernel.is_symmetric();
  rep.quasi_symmetry = check_quasisymmetric(p.kernel);
  rep.wmp = wmp_constant(p.kernel, opt.search);
  if (p.size() <= opt.complete_mp_limit) rep.complete_mp = complete_mp_constant(p.kernel, opt.search);
  rep.quasimetric = quasimetric_constant(p.kernel);
  rep.nondegeneracy = check_nondegenerate(p.kernel, p.sigma);

  using detail::push;
  push(rep, "hypothesis_quasi_symmetric", "G is quasi-symmetric", detail::holds(std::isfinite(rep.quasi_symmetry)),
       "a = " + detail::fmt(rep.quasi_symmetry));
  push(rep, "hypothesis_weak_maximum_principle", "G satisfies the weak maximum principle", detail::holds(rep.wmp.holds),
       "h = " + detail::fmt(rep.wmp.constant_h) + " (" + to_string(rep.wmp.mode) + ")");
  push(rep, "hypothesis_non_degenerate", "G is non-degenerate with respect to sigma",
       detail::holds(rep.nondegeneracy.nondegenerate), std::to_string(rep.nondegeneracy.witness.size()) + " vanishing columns");

  if (p.q < 1.0) {
    detail::strong_rows(rep, p, opt);
  } else {
    for (const char* id : {"strong_implies_supersolution", "supersolution_implies_solution", "supersolution_bounds_constant",
                           "solution_norm_bound", "energy_estimate", "maurey_energy_chain", "lorentz_sufficiency",
                           "degenerate_dichotomy"})
      push(rep, id, "sublinear statement", Verdict::NotApplicable, "q >= 1");
  }
  detail::weak_rows(rep, p, opt);
  detail::unit_rows(rep, p, opt);
  detail::modified_rows(rep, p, opt);
  return rep;
}

}  // namespace subschur
