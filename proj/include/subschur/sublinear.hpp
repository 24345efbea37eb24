#pragma once

// The sublinear equation u = G(u^q sigma): supersolutions by the Gagliardo
// iteration, solutions by monotone iteration, the strong-type (1, q)
// constant, energy estimates and the Maurey dual condition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "subschur/core.hpp"
#include "subschur/norms.hpp"
#include "subschur/principles.hpp"

namespace subschur {

/// The conjugate golden ratio (sqrt 5 - 1) / 2.
inline const double kGoldenThreshold = (std::sqrt(5.0) - 1.0) / 2.0;

struct SublinearProblem {
  Kernel kernel;
  Measure sigma;
  double q;

  SublinearProblem(Kernel g, Measure s, double exponent) : kernel(std::move(g)), sigma(std::move(s)), q(exponent) {
    detail::require_same_space(kernel.space_ptr(), sigma.space_ptr());
    if (!(q > 0.0) || std::isinf(q)) throw DomainError("q must be positive and finite");
  }

  std::size_t size() const noexcept { return kernel.size(); }
};

enum class SolveStatus { Solution, Supersolution, Degenerate, Diverged };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solution: return "solution";
    case SolveStatus::Supersolution: return "supersolution";
    case SolveStatus::Degenerate: return "degenerate";
    case SolveStatus::Diverged: return "diverged";
  }
  return "?";
}

struct SolveResult {
  std::vector<double> u;
  SolveStatus status = SolveStatus::Diverged;
  /// sup over supp(sigma) of |u - G(u^q sigma)| / max(u, G(u^q sigma)).
  double residual = kInf;
  std::size_t iterations = 0;
  double lq_norm = 0.0;
  /// Gagliardo: L1(sigma) norm of each renormalized iterate. Monotone: relative step size.
  std::vector<double> history;
  /// Gagliardo only: the a-priori L1(sigma) bound (1+lambda)^{1/(1-q)} kappa^{q/(1-q)}.
  double l1_bound = kInf;
  /// Points of supp(sigma) where the limit vanishes.
  Subset vanishing;
};

struct IterationOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
};

struct GagliardoOptions {
  double lambda_relax = 0.1;
  /// psi is the constant with L1(sigma) norm psi_scale * lambda/(1+lambda).
  double psi_scale = 1.0;
  IterationOptions iteration{};
};

namespace detail {

inline void require_sublinear(const SublinearProblem& p) {
  if (!(p.q < 1.0)) throw DomainError("this path needs 0 < q < 1");
}

/// G(u^q sigma), with inf^q = inf and 0 * inf = 0.
inline std::vector<double> sublinear_image(const SublinearProblem& p, std::span<const double> u) {
  const std::size_t n = p.size();
  std::vector<double> w(n);
  for (std::size_t y = 0; y < n; ++y) w[y] = p.sigma[y] == 0.0 ? 0.0 : ext_mul(std::pow(u[y], p.q), p.sigma[y]);
  return subschur::detail::apply(p.kernel, w);
}

inline double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return 1.0;
  return std::abs(a - b) / std::max(a, b);
}

}  // namespace detail

/// Relative sup-norm residual of u = G(u^q sigma) over supp(sigma).
inline double fixed_point_residual(const SublinearProblem& p, std::span<const double> u) {
  if (u.size() != p.size()) throw StructuralError("iterate length differs from space size");
  const auto t = detail::sublinear_image(p, u);
  double r = 0.0;
  for (std::size_t x : p.sigma.support()) r = std::max(r, detail::relative_gap(u[x], t[x]));
  return r;
}

/// max over supp(sigma) of (G(u^q sigma) - u)_+ / u; zero for a supersolution.
inline double supersolution_defect(const SublinearProblem& p, std::span<const double> u) {
  const auto t = detail::sublinear_image(p, u);
  double r = 0.0;
  for (std::size_t x : p.sigma.support()) {
    if (t[x] <= u[x]) continue;
    r = std::max(r, u[x] == 0.0 || std::isinf(t[x]) ? kInf : (t[x] - u[x]) / u[x]);
  }
  return r;
}

/// Positive supersolution from a strong-type constant kappa.
///
/// Iterates phi <- psi + S(phi)/(1+lambda), S(phi) = kappa^{-q} [G(phi sigma)]^q,
/// from phi = psi. Once an increment is at most psi, the previous iterate
/// satisfies (1+lambda) kappa^q phi >= [G(phi sigma)]^q exactly, and
/// u = (a phi)^{1/q} with a = ((1+lambda) kappa^q)^{1/(1-q)} is a supersolution.
inline SolveResult gagliardo_supersolution(const SublinearProblem& p, double kappa, const GagliardoOptions& opt = {}) {
  detail::require_sublinear(p);
  if (!(kappa > 0.0) || std::isinf(kappa)) throw DomainError("kappa must be positive and finite");
  if (!(opt.lambda_relax > 0.0) || !(opt.psi_scale > 0.0)) throw DomainError("lambda_relax and psi_scale must be positive");
  const double mass = p.sigma.total();
  if (mass == 0.0) throw DomainError("sigma is the zero measure");

  const std::size_t n = p.size();
  const double q = p.q, lam = opt.lambda_relax;
  const double psi = opt.psi_scale * lam / (1.0 + lam) / mass;
  const double coef = 1.0 / ((1.0 + lam) * std::pow(kappa, q));
  const double scale = std::pow((1.0 + lam) * std::pow(kappa, q), 1.0 / (1.0 - q));
  SolveResult r;
  r.l1_bound = scale;
  std::vector<double> phi(n, psi), next(n), w(n);
  bool certified = false;
  for (std::size_t it = 0; it < opt.iteration.max_iterations; ++it) {
    for (std::size_t y = 0; y < n; ++y) w[y] = phi[y] * p.sigma[y];
    detail::apply(p.kernel, w, next);
    double change = 0.0, increment = 0.0, l1 = 0.0;
    bool blew_up = false;
    for (std::size_t x = 0; x < n; ++x) {
      next[x] = std::max(phi[x], psi + coef * std::pow(next[x], q));  // nondecreasing up to rounding
      if (std::isinf(next[x])) {
        if (p.sigma[x] > 0.0) blew_up = true;
        continue;
      }
      increment = std::max(increment, next[x] - phi[x]);
      if (p.sigma[x] > 0.0) change = std::max(change, (next[x] - phi[x]) / next[x]);
      l1 += next[x] * p.sigma[x];
    }
    r.iterations = it + 1;
    if (blew_up) {
      r.u = std::vector<double>(n, kInf);
      r.status = SolveStatus::Diverged;
      return r;
    }
    r.history.push_back(scale * l1);
    if (change <= opt.iteration.tolerance && increment <= psi) {
      certified = true;
      break;
    }
    phi.swap(next);
  }

  r.u.resize(n);
  for (std::size_t x = 0; x < n; ++x) r.u[x] = std::pow(scale * phi[x], 1.0 / q);
  r.residual = fixed_point_residual(p, r.u);
  r.lq_norm = norm(r.u, p.sigma, NormSpec::lp(q));
  r.status = certified ? SolveStatus::Supersolution : SolveStatus::Diverged;
  return r;
}

/// Decreasing iteration u <- G(u^q sigma) from a supersolution u0.
inline SolveResult monotone_solution(const SublinearProblem& p, std::span<const double> u0, const IterationOptions& opt = {}) {
  detail::require_sublinear(p);
  const std::size_t n = p.size();
  if (u0.size() != n) throw StructuralError("initial iterate length differs from space size");
  const Subset supp = p.sigma.support();
  for (double v : u0) detail::check_extended_nonnegative(v, "initial iterate");
  for (std::size_t x : supp)
    if (std::isinf(u0[x])) throw DomainError("initial iterate is infinite on supp(sigma)");
  {
    const auto t = detail::sublinear_image(p, u0);
    for (std::size_t x : supp)
      if (t[x] > u0[x] * (1.0 + 1e-12)) throw PreconditionError("initial iterate is not a supersolution");
  }

  SolveResult r;
  std::vector<double> u(u0.begin(), u0.end());
  bool converged = false;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    auto next = detail::sublinear_image(p, u);
    double change = 0.0;
    for (std::size_t x : supp) {
      if (next[x] > u[x] * (1.0 + 1e-10)) throw SolverError("monotone iteration increased an iterate");
      next[x] = std::min(next[x], u[x]);
      if (u[x] > 0.0) change = std::max(change, (u[x] - next[x]) / u[x]);
    }
    u.swap(next);
    r.iterations = it + 1;
    r.history.push_back(change);
    if (change <= opt.tolerance) {
      converged = true;
      break;
    }
  }

  r.u = std::move(u);
  r.residual = fixed_point_residual(p, r.u);
  r.lq_norm = norm(r.u, p.sigma, NormSpec::lp(p.q));
  for (std::size_t x : supp)
    if (r.u[x] == 0.0) r.vanishing.push_back(x);
  if (!converged) r.status = SolveStatus::Diverged;
  else r.status = r.vanishing.empty() ? SolveStatus::Solution : SolveStatus::Degenerate;
  return r;
}

/// Upper bound kappa <= h / (1-q)^{1/q} * ||u||_{L^q(sigma)}^{1-q}
/// from a positive supersolution u of a symmetric kernel with WMP constant h.
inline double supersolution_kappa_bound(const SublinearProblem& p, std::span<const double> u, double h) {
  detail::require_sublinear(p);
  if (std::isinf(h)) return kInf;
  const double lq = norm(u, p.sigma, NormSpec::lp(p.q));
  return h / std::pow(1.0 - p.q, 1.0 / p.q) * std::pow(lq, 1.0 - p.q);
}

struct ConstantEstimate {
  double lower = 0.0;  ///< attained by `witness`
  double upper = kInf; ///< certified bound, +inf when none applies
  std::optional<Measure> witness;
  Subset witness_set;
  std::string method;
  SearchMode mode = SearchMode::Exact;
};

struct StrongConstant : ConstantEstimate {
  /// Concave-duality bound (F(nu) + Frank-Wolfe gap)^{1/q}.
  double gap_upper = kInf;
  /// Supersolution bound before certification; equals `upper` when certified.
  double supersolution_upper = kInf;
  double wmp_h = kInf;
  std::optional<SolveResult> supersolution;
  std::optional<SolveResult> solution;
};

struct StrongOptions {
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 3000;
  double gap_tolerance = 1e-13;
  /// Run WMP, supersolution and solution to obtain the certified upper bound.
  bool certify = true;
  SearchOptions wmp{};
  GagliardoOptions gagliardo{};
  IterationOptions iteration{};
};

namespace detail {

/// Euclidean projection onto the probability simplex.
inline void project_simplex(std::vector<double>& v) {
  std::vector<double> s(v);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

/// F(nu) = sum_x sigma_x (G nu)(x)^q on the finite part of the problem.
class SimplexObjective {
 public:
  SimplexObjective(const SublinearProblem& p) : p_(p), rows_(p.sigma.support()) {}

  double value(std::span<const double> nu) const {
    double f = 0.0;
    for (std::size_t x : rows_) f += p_.sigma[x] * std::pow(dot_row(x, nu), p_.q);
    return f;
  }

  /// Gradient; (G nu)(x) = 0 is floored so the gradient stays finite.
  std::vector<double> gradient(std::span<const double> nu, bool& singular) const {
    const std::size_t n = p_.size();
    std::vector<double> g(n, 0.0);
    singular = false;
    for (std::size_t x : rows_) {
      double t = dot_row(x, nu);
      if (t == 0.0) {
        singular = true;
        t = 1e-300;
      }
      const double c = p_.q * p_.sigma[x] * std::pow(t, p_.q - 1.0);
      const auto r = p_.kernel.row(x);
      for (std::size_t y = 0; y < n; ++y) g[y] += c * r[y];
    }
    return g;
  }

 private:
  double dot_row(std::size_t x, std::span<const double> nu) const {
    const auto r = p_.kernel.row(x);
    double s = 0.0;
    for (std::size_t y = 0; y < r.size(); ++y) s += r[y] * nu[y];
    return s;
  }

  const SublinearProblem& p_;
  Subset rows_;
};

/// Frank-Wolfe gap max_j grad_j - <grad, nu>; infinite at singular points.
inline double frank_wolfe_gap(const SimplexObjective& f, std::span<const double> nu) {
  bool singular = false;
  const auto g = f.gradient(nu, singular);
  double best = *std::max_element(g.begin(), g.end());
  double inner = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) inner += g[j] * nu[j];
  if (singular && best > inner) return kInf;
  return std::max(0.0, best - inner);
}

/// Projected gradient ascent with Armijo backtracking, interleaved with the
/// multiplicative update nu_j <- nu_j grad_j / <grad, nu> when it improves.
inline double ascend(const SimplexObjective& f, std::vector<double>& nu, std::size_t iterations, double tol) {
  double value = f.value(nu);
  double step = 1.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    bool singular = false;
    const auto g = f.gradient(nu, singular);
    double inner = 0.0, gmax = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      inner += g[j] * nu[j];
      gmax = std::max(gmax, g[j]);
    }
    if (!singular && gmax - inner <= tol * std::max(value, 1e-300)) break;

    bool moved = false;
    if (inner > 0.0) {
      std::vector<double> m(nu.size());
      for (std::size_t j = 0; j < m.size(); ++j) m[j] = nu[j] * g[j] / inner;
      const double fm = f.value(m);
      if (fm > value) {
        nu.swap(m);
        value = fm;
        moved = true;
      }
    }

    const double base = step / std::max(gmax, 1e-300);
    double s = base;
    for (int k = 0; k < 60; ++k, s *= 0.5) {
      std::vector<double> trial(nu.size());
      for (std::size_t j = 0; j < nu.size(); ++j) trial[j] = nu[j] + s * g[j];
      project_simplex(trial);
      double dir = 0.0;
      for (std::size_t j = 0; j < nu.size(); ++j) dir += g[j] * (trial[j] - nu[j]);
      if (dir <= 0.0) break;
      const double ft = f.value(trial);
      // The floored gradient overstates the slope at a singular face, so there
      // plain increase is accepted.
      if (singular ? ft > value : ft >= value + 1e-4 * dir) {
        nu.swap(trial);
        value = ft;
        moved = true;
        break;
      }
    }
    step = (s == base) ? std::min(step * 2.0, 1e12) : std::max(step * 0.5, 1e-12);
    if (!moved) break;
  }
  return value;
}

}  // namespace detail

/// Best constant of ||G nu||_{L^q(sigma)} <= kappa ||nu|| for 0 < q < 1.
///
/// Lower bound: max of the concave function F(nu) = sum sigma (G nu)^q over
/// the simplex, kappa = F^{1/q}. Upper bound: from a supersolution when G is
/// symmetric and its WMP constant is exact.
inline StrongConstant strong_type_constant(const SublinearProblem& p, const StrongOptions& opt = {}) {
  detail::require_sublinear(p);
  const std::size_t n = p.size();
  const Measure& sigma = p.sigma;
  StrongConstant r;
  r.method = "simplex-ascent";
  if (sigma.is_zero() || n == 0) {
    r.lower = r.upper = r.gap_upper = 0.0;
    r.witness = Measure::dirac(p.kernel.space_ptr(), 0);
    r.method = "zero-measure";
    return r;
  }
  for (std::size_t x : sigma.support()) {
    for (std::size_t y = 0; y < n; ++y) {
      if (std::isinf(p.kernel(x, y))) {
        r.lower = r.upper = r.gap_upper = kInf;
        r.witness = Measure::dirac(p.kernel.space_ptr(), y);
        r.method = "infinite-column";
        return r;
      }
    }
  }

  const detail::SimplexObjective f(p);
  std::vector<double> best_nu;
  double best = -1.0;
  auto consider = [&](std::vector<double> nu, bool run) {
    const double v = run ? detail::ascend(f, nu, opt.max_iterations, opt.gap_tolerance) : f.value(nu);
    if (v > best) {
      best = v;
      best_nu = std::move(nu);
    }
  };

  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> e(n, 0.0);
    e[y] = 1.0;
    consider(std::move(e), false);
  }
  consider(std::vector<double>(n, 1.0 / static_cast<double>(n)), true);
  {
    std::vector<double> v(n);
    detail::apply_adjoint(p.kernel, sigma.weights(), v);
    for (double& x : v) x = std::pow(x, 1.0 / (1.0 - p.q));
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    if (s > 0.0 && std::isfinite(s)) {
      for (double& x : v) x /= s;
      consider(std::move(v), true);
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::exponential_distribution<double> expo(1.0);
  for (std::size_t k = 0; k < opt.restarts; ++k) {
    std::vector<double> v(n);
    for (double& x : v) x = expo(rng);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    consider(std::move(v), true);
  }

  auto finish = [&] {
    r.lower = std::pow(best, 1.0 / p.q);
    r.gap_upper = std::pow(best + detail::frank_wolfe_gap(f, best_nu), 1.0 / p.q);
    r.witness = Measure(p.kernel.space_ptr(), best_nu);
  };
  finish();
  if (!opt.certify) return r;

  const WmpReport wmp = wmp_constant(p.kernel, opt.wmp);
  r.wmp_h = wmp.constant_h;
  r.mode = wmp.mode;
  auto sup = gagliardo_supersolution(p, r.lower, opt.gagliardo);
  if (sup.status != SolveStatus::Supersolution) return r;
  const auto sol = monotone_solution(p, sup.u, opt.iteration);
  r.supersolution = std::move(sup);
  r.solution = sol;

  // u^q sigma is one more start for the ascent.
  if (sol.status == SolveStatus::Solution) {
    std::vector<double> v(n, 0.0);
    double s = 0.0;
    for (std::size_t x : sigma.support()) s += v[x] = std::pow(sol.u[x], p.q) * sigma[x];
    if (s > 0.0) {
      for (double& x : v) x /= s;
      consider(std::move(v), true);
      finish();
    }
  }

  const std::vector<double>& u = sol.status == SolveStatus::Solution ? sol.u : r.supersolution->u;
  r.supersolution_upper = supersolution_kappa_bound(p, u, wmp.constant_h);
  if (p.kernel.is_symmetric() && wmp.mode == SearchMode::Exact) {
    r.upper = r.supersolution_upper;
    r.method = "simplex-ascent+supersolution-bound";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Energy estimates

struct EnergyInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  bool holds = false;
};

struct EnergyReport {
  double q = 0.0;
  double quasi_symmetry = 1.0;
  double s_critical = 0.0;        ///< q / (1 - q)
  double energy_critical = 0.0;   ///< int (G sigma)^{q/(1-q)} dsigma
  double energy_one_plus_q = 0.0; ///< int (G sigma)^{1+q} dsigma
  double lp_norm_critical = 0.0;  ///< ||G sigma||_{L^{q/(1-q)}(sigma)}
  double lorentz_norm = 0.0;      ///< ||G sigma||_{L^{q/(1-q), q}(sigma)}
  double weak_norm = 0.0;         ///< ||G sigma||_{L^{q/(1-q), inf}(sigma)}
  /// Present when a supersolution was supplied: the critical-energy bound for
  /// q <= q0, the bound at s = 1 + q otherwise.
  std::optional<EnergyInequality> supersolution_estimate;
  bool below_threshold = true;  ///< q <= q0
};

/// Energy norms of G sigma and the supersolution energy estimate.
inline EnergyReport energy_criteria(const SublinearProblem& p, std::optional<std::span<const double>> u = std::nullopt,
                                    double tolerance = 1e-10) {
  detail::require_sublinear(p);
  const double q = p.q;
  EnergyReport r;
  r.q = q;
  r.quasi_symmetry = check_quasisymmetric(p.kernel);
  r.s_critical = q / (1.0 - q);
  r.below_threshold = q <= kGoldenThreshold;
  const auto gs = potential(p.kernel, p.sigma);
  r.energy_critical = power_integral(gs, p.sigma, r.s_critical);
  r.energy_one_plus_q = power_integral(gs, p.sigma, 1.0 + q);
  r.lp_norm_critical = norm(gs, p.sigma, NormSpec::lp(r.s_critical));
  r.lorentz_norm = norm(gs, p.sigma, NormSpec::lorentz(r.s_critical, q));
  r.weak_norm = norm(gs, p.sigma, NormSpec::weak(r.s_critical));
  if (!u) return r;

  const double a = r.quasi_symmetry;
  const double uq = power_integral(*u, p.sigma, q);
  EnergyInequality e;
  if (r.below_threshold) {
    e.constant = std::pow(a, q * q / (1.0 - q));
    e.lhs = r.energy_critical;
    e.rhs = e.constant * uq;
  } else {
    const double s = 1.0 + q;
    const double k = s * (1.0 - q) / q;
    e.constant = std::pow(a, s / (1.0 + q));
    e.lhs = r.energy_one_plus_q;
    e.rhs = e.constant * std::pow(uq, k) * std::pow(p.sigma.total(), 1.0 - k);
  }
  e.holds = e.lhs <= e.rhs * (1.0 + tolerance);
  r.supersolution_estimate = e;
  return r;
}

struct EnergyPoint {
  double s;
  double value;  ///< int (G sigma)^s dsigma
};

inline std::vector<EnergyPoint> energy_sweep(const Kernel& g, const Measure& sigma, std::span<const double> exponents) {
  const auto gs = potential(g, sigma);
  std::vector<EnergyPoint> out;
  for (double s : exponents) {
    if (!(s > 0.0)) throw DomainError("energy exponent must be positive");
    out.push_back({s, power_integral(gs, sigma, s)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maurey dual condition

/// sup_y sum_x G(x,y) F(x)^{1-1/q} sigma(x).
inline double maurey_verify(const SublinearProblem& p, std::span<const double> f) {
  detail::require_sublinear(p);
  if (f.size() != p.size()) throw StructuralError("F length differs from space size");
  const std::size_t n = p.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t x : p.sigma.support()) {
    detail::check_extended_nonnegative(f[x], "F");
    if (f[x] == 0.0) throw DomainError("F vanishes on supp(sigma)");
    if (std::isinf(f[x])) throw DomainError("F must be finite");
    w[x] = std::pow(f[x], 1.0 - 1.0 / p.q) * p.sigma[x];
  }
  std::vector<double> out(n);
  detail::apply_adjoint(p.kernel, w, out);
  return *std::max_element(out.begin(), out.end());
}

/// Maurey function from a simplex maximizer nu of sum sigma (G nu)^q:
/// F = k (G nu)^q with k = F(nu)^{q/(1-q)}, so the dual value is about 1 and
/// ||F||_{L1(sigma)} = kappa^{q/(1-q)}.
inline std::vector<double> maurey_from_maximizer(const SublinearProblem& p, const Measure& nu) {
  detail::require_sublinear(p);
  const auto t = potential(p.kernel, nu);
  double fval = 0.0;
  for (std::size_t x : p.sigma.support()) fval += p.sigma[x] * std::pow(t[x], p.q);
  const double k = std::pow(fval, p.q / (1.0 - p.q));
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t x = 0; x < p.size(); ++x) out[x] = k * std::pow(t[x], p.q);
  return out;
}

struct MaureyChain {
  double dual_value = kInf;  ///< M = maurey_verify(F)
  double f_mass = 0.0;       ///< ||F||_{L1(sigma)}
  double lhs = 0.0;          ///< int (G sigma)^{q/(1-q)} dsigma
  double rhs = kInf;         ///< a^{q^2/(1-q)} M^{q/(1-q)} ||F||
  bool holds = false;
};

/// The energy bound implied by a Maurey function F through Hoelder's inequality.
inline MaureyChain maurey_energy_chain(const SublinearProblem& p, std::span<const double> f, double tolerance = 1e-10) {
  MaureyChain c;
  c.dual_value = maurey_verify(p, f);
  c.f_mass = power_integral(f, p.sigma, 1.0);
  const double q = p.q;
  const double a = check_quasisymmetric(p.kernel);
  c.lhs = power_integral(potential(p.kernel, p.sigma), p.sigma, q / (1.0 - q));
  c.rhs = std::pow(a, q * q / (1.0 - q)) * std::pow(c.dual_value, q / (1.0 - q)) * c.f_mass;
  c.holds = c.lhs <= c.rhs * (1.0 + tolerance);
  return c;
}

}  // namespace subschur
