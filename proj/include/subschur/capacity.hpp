#pragma once

// Capacities of a set K: cap0 and its dual content as linear programs, and
// the Wiener capacity cap1 as the concave program max 2 lambda(K) - E(lambda)
// with equilibrium-measure certificates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subschur/core.hpp"
#include "subschur/lp.hpp"

namespace subschur {

struct EquilibriumCertificates {
  double upper_on_support = 0.0;   ///< max of G lambda over S_lambda
  Subset below_one;                ///< {x in K : G lambda(x) < 1 - tol}
  double below_one_capacity = 0.0; ///< cap1 of that exceptional set
  double off_level_mass = 0.0;     ///< lambda-mass of {|G lambda - 1| > tol}
  double tolerance = 1e-8;

  bool passed() const {
    return upper_on_support <= 1.0 + tolerance && off_level_mass <= tolerance && below_one_capacity <= 1e-6;
  }
};

struct CapacityResult {
  double value = 0.0;
  std::optional<Measure> extremal;  ///< absent when the value is infinite
  double dual_value = 0.0;          ///< LP dual objective, or 2 lambda(K) - E(lambda) for cap1
  std::optional<EquilibriumCertificates> certificates;
  std::string method;               ///< "lp", "qp", "enumeration", "heuristic", "closed_form"
  bool heuristic = false;           ///< attainment not certified
  bool kkt_verified = false;
};

namespace detail {

inline void require_subset(const Subset& k, std::size_t n) {
  if (k.empty()) throw DomainError("capacity of the empty set");
  for (std::size_t x : k)
    if (x >= n) throw StructuralError("set index out of range");
}

inline Subset normalized(Subset k) {
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

}  // namespace detail

/// cap0(K) = max mu(K) over mu >= 0 on K with G* mu <= 1 on all of Omega.
/// A point x in K with some G(x, y) = inf must carry no mass.
inline CapacityResult cap0(const Kernel& g, Subset k, const LpOptions& opt = {}) {
  const std::size_t n = g.size();
  k = detail::normalized(std::move(k));
  detail::require_subset(k, n);
  std::vector<std::size_t> vars;
  for (std::size_t x : k) {
    const auto r = g.row(x);
    if (std::none_of(r.begin(), r.end(), [](double v) { return std::isinf(v); })) vars.push_back(x);
  }
  CapacityResult res;
  res.method = "lp";
  if (vars.empty()) {
    res.extremal = Measure::zero(g.space_ptr());
    return res;
  }
  LpProblem lp;
  lp.objective.assign(vars.size(), 1.0);
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> row(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) row[j] = g(vars[j], y);
    lp.add_row(std::move(row), Sense::Le, 1.0);
  }
  const auto sol = solve_lp(lp, opt);
  if (sol.status == LpStatus::Unbounded) {
    res.value = res.dual_value = kInf;
    return res;
  }
  std::vector<double> mu(n, 0.0);
  for (std::size_t j = 0; j < vars.size(); ++j) mu[vars[j]] = sol.primal[j];
  res.value = sol.value;
  res.dual_value = dual_objective(lp, sol.dual);
  res.extremal = Measure(g.space_ptr(), std::move(mu));
  res.kkt_verified = true;
  return res;
}

/// cont(K) = min lambda(Omega) over lambda >= 0 with G lambda >= 1 on K. A row
/// containing inf is satisfied by arbitrarily small mass and is dropped; the
/// infimum is then not attained.
inline CapacityResult content(const Kernel& g, Subset k, const LpOptions& opt = {}) {
  const std::size_t n = g.size();
  k = detail::normalized(std::move(k));
  detail::require_subset(k, n);
  CapacityResult res;
  res.method = "lp";
  LpProblem lp;
  lp.objective.assign(n, -1.0);
  for (std::size_t x : k) {
    const auto r = g.row(x);
    if (std::any_of(r.begin(), r.end(), [](double v) { return std::isinf(v); })) continue;
    if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) {
      res.value = res.dual_value = kInf;
      return res;
    }
    lp.add_row(std::vector<double>(r.begin(), r.end()), Sense::Ge, 1.0);
  }
  if (lp.num_rows() == 0) {
    res.extremal = Measure::zero(g.space_ptr());
    return res;
  }
  const auto sol = solve_lp(lp, opt);
  if (sol.status == LpStatus::Infeasible) {
    res.value = res.dual_value = kInf;
    return res;
  }
  res.value = -sol.value;
  res.dual_value = -dual_objective(lp, sol.dual);
  res.extremal = Measure(g.space_ptr(), sol.primal);
  res.kkt_verified = true;
  return res;
}

struct Cap1Options {
  double psd_floor = -1e-10;          ///< smallest eigenvalue still treated as PSD
  std::size_t enumeration_limit = 12; ///< largest |K| for support enumeration
  std::size_t gradient_iterations = 500;
  double certificate_tolerance = 1e-8;
  bool with_certificates = true;
};

namespace detail {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline bool is_psd(const Mat& a, double floor) {
  if (a.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= floor;
}

/// Projected gradient ascent for max 2 1^T l - l^T A l, l >= 0, with exact
/// line search along the free directions. Returns the last iterate.
inline Vec projected_gradient(const Mat& a, std::size_t iterations) {
  const Eigen::Index m = a.rows();
  Vec l = Vec::Zero(m);
  for (std::size_t it = 0; it < iterations; ++it) {
    const Vec g = Vec::Ones(m) - a * l;
    Vec d = Vec::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i)
      if (l(i) > 0.0 || g(i) > 0.0) d(i) = g(i);
    const double gd = d.squaredNorm();
    if (gd <= 1e-30) break;
    const double dad = d.dot(a * d);
    double t = dad > 0.0 ? gd / dad : std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i)
      if (d(i) < 0.0) t = std::min(t, l(i) / -d(i));
    if (!std::isfinite(t)) break;
    l += t * d;
    l = l.cwiseMax(0.0);
  }
  return l;
}

/// Solves A_PP z = 1 and reports whether the system is consistent.
inline bool solve_on(const Mat& a, const std::vector<Eigen::Index>& p, Vec& z) {
  const Eigen::Index k = static_cast<Eigen::Index>(p.size());
  Mat sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = a(p[i], p[j]);
  const Vec ones = Vec::Ones(k);
  z = sub.completeOrthogonalDecomposition().solve(ones);
  return (sub * z - ones).lpNorm<Eigen::Infinity>() <= 1e-10;
}

/// Active-set finish for the concave QP (PSD A): keeps a passive set P with
/// l_P > 0 and A_PP l_P = 1, adding the most violated KKT index each round.
inline bool active_set_finish(const Mat& a, Vec& l, double tol) {
  const Eigen::Index m = a.rows();
  std::vector<bool> passive(m, false);
  const double top = l.size() ? l.maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    passive[i] = l(i) > 1e-9 * top;
    if (!passive[i]) l(i) = 0.0;
  }
  const std::size_t cap = 20 * static_cast<std::size_t>(m) + 20;
  for (std::size_t round = 0; round < cap; ++round) {
    std::vector<Eigen::Index> p;
    for (Eigen::Index i = 0; i < m; ++i)
      if (passive[i]) p.push_back(i);
    if (!p.empty()) {
      Vec z;
      if (!solve_on(a, p, z)) return false;
      if (z.minCoeff() > 0.0) {
        for (std::size_t j = 0; j < p.size(); ++j) l(p[j]) = z(static_cast<Eigen::Index>(j));
      } else {
        // step from l towards z until the first passive coordinate hits zero
        double alpha = 1.0;
        std::size_t blocking = 0;
        for (std::size_t j = 0; j < p.size(); ++j) {
          const double zj = z(static_cast<Eigen::Index>(j)), lj = l(p[j]);
          if (zj <= 0.0 && lj / (lj - zj) <= alpha) {
            alpha = lj / (lj - zj);
            blocking = j;
          }
        }
        const double scale = l.maxCoeff();
        for (std::size_t j = 0; j < p.size(); ++j) {
          l(p[j]) += alpha * (z(static_cast<Eigen::Index>(j)) - l(p[j]));
          if (j == blocking || l(p[j]) <= 1e-14 * scale) {
            l(p[j]) = 0.0;
            passive[p[j]] = false;
          }
        }
        continue;
      }
    }
    const Vec w = Vec::Ones(m) - a * l;
    Eigen::Index best = -1;
    double worst = tol;
    for (Eigen::Index i = 0; i < m; ++i)
      if (!passive[i] && w(i) > worst) {
        worst = w(i);
        best = i;
      }
    if (best < 0) return true;
    passive[best] = true;
  }
  return false;
}

struct Stationary {
  Vec lambda;
  double value = -1.0;
};

/// Best stationary point over supports T of the candidate set, solving
/// A_TT l = 1 with l > 0. `allowed(mask)` filters supports.
template <class Allowed>
inline Stationary enumerate_supports(const Mat& a, Allowed allowed) {
  const Eigen::Index m = a.rows();
  Stationary best;
  best.lambda = Vec::Zero(m);
  best.value = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    if (!allowed(mask)) continue;
    std::vector<Eigen::Index> t;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) t.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(t.size());
    Mat sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = a(t[i], t[j]);
    Eigen::FullPivLU<Mat> lu(sub);
    if (!lu.isInvertible()) continue;
    const Vec z = lu.solve(Vec::Ones(k));
    if (z.minCoeff() <= 0.0) continue;
    if ((sub * z - Vec::Ones(k)).lpNorm<Eigen::Infinity>() > 1e-9) continue;
    const double v = z.sum();
    if (v > best.value) {
      best.value = v;
      best.lambda.setZero();
      for (Eigen::Index i = 0; i < k; ++i) best.lambda(t[i]) = z(i);
    }
  }
  return best;
}

}  // namespace detail

/// Wiener capacity cap1(K) = max over lambda >= 0 on K of 2 lambda(K) - E(lambda).
/// Requires a symmetric kernel. The reported value is lambda(K) at the
/// extremal measure, which equals the maximum there.
inline CapacityResult wiener_cap1(const Kernel& g, Subset k, const Cap1Options& opt = {}) {
  const std::size_t n = g.size();
  k = detail::normalized(std::move(k));
  detail::require_subset(k, n);
  if (!g.is_symmetric()) throw DomainError("Wiener capacity needs a symmetric kernel; symmetrize first");

  CapacityResult res;
  // a point with zero self-energy makes the objective unbounded
  for (std::size_t x : k)
    if (g(x, x) == 0.0) {
      res.value = res.dual_value = kInf;
      res.method = "closed_form";
      return res;
    }
  // points with infinite self-energy carry no mass
  std::vector<std::size_t> free;
  for (std::size_t x : k)
    if (!std::isinf(g(x, x))) free.push_back(x);

  std::vector<double> lambda(n, 0.0);
  const Eigen::Index m = static_cast<Eigen::Index>(free.size());
  bool infinite_pair = false;
  detail::Mat a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      a(i, j) = g(free[i], free[j]);
      if (std::isinf(a(i, j))) infinite_pair = true;
    }

  if (m == 0) {
    res.method = "closed_form";
  } else if (m == 1) {
    res.method = "closed_form";
    lambda[free[0]] = 1.0 / a(0, 0);
    res.kkt_verified = true;
  } else if (!infinite_pair && detail::is_psd(a, opt.psd_floor)) {
    res.method = "qp";
    detail::Vec l = detail::projected_gradient(a, opt.gradient_iterations);
    detail::Vec finished = l;
    if (detail::active_set_finish(a, finished, 1e-13)) l = finished;
    for (Eigen::Index i = 0; i < m; ++i) lambda[free[i]] = l(i);
    // KKT: l >= 0, A l <= 1 + tol on supp l, A l >= 1 - tol elsewhere
    const detail::Vec w = a * l;
    bool ok = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (l(i) > 0.0 && std::abs(w(i) - 1.0) > 1e-10) ok = false;
      if (l(i) == 0.0 && w(i) < 1.0 - 1e-10) ok = false;
    }
    res.kkt_verified = ok;
    res.heuristic = !ok;
  } else if (static_cast<std::size_t>(m) <= opt.enumeration_limit) {
    res.method = "enumeration";
    std::vector<std::uint64_t> conflict(m, 0);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (std::isinf(a(i, j))) conflict[i] |= std::uint64_t{1} << j;
    auto allowed = [&](std::uint64_t mask) {
      for (Eigen::Index i = 0; i < m; ++i)
        if ((mask >> i & 1) && (conflict[i] & mask)) return false;
      return true;
    };
    const auto best = detail::enumerate_supports(a, allowed);
    for (Eigen::Index i = 0; i < m; ++i) lambda[free[i]] = best.lambda(i);
    res.kkt_verified = true;
  } else {
    // best over singletons, and a local ascent when all entries are finite
    res.method = "heuristic";
    res.heuristic = true;
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < m; ++i)
      if (a(i, i) < a(arg, arg)) arg = i;
    lambda[free[arg]] = 1.0 / a(arg, arg);
    if (!infinite_pair) {
      detail::Vec l = detail::projected_gradient(a, opt.gradient_iterations * 4);
      const double obj = 2.0 * l.sum() - l.dot(a * l);
      if (obj > 1.0 / a(arg, arg)) {
        std::fill(lambda.begin(), lambda.end(), 0.0);
        for (Eigen::Index i = 0; i < m; ++i) lambda[free[i]] = l(i);
      }
    }
  }

  Measure ext(g.space_ptr(), lambda);
  const double mass = ext.total();
  const double e = energy(g, ext);
  res.value = mass;
  res.dual_value = 2.0 * mass - e;
  if (opt.with_certificates) {
    EquilibriumCertificates c;
    c.tolerance = opt.certificate_tolerance;
    const auto pot = potential(g, ext);
    for (std::size_t x = 0; x < n; ++x) {
      if (lambda[x] > 0.0) {
        c.upper_on_support = std::max(c.upper_on_support, pot[x]);
        if (std::abs(pot[x] - 1.0) > c.tolerance) c.off_level_mass += lambda[x];
      }
    }
    for (std::size_t x : k)
      if (pot[x] < 1.0 - c.tolerance) c.below_one.push_back(x);
    if (!c.below_one.empty()) {
      Cap1Options inner = opt;
      inner.with_certificates = false;
      c.below_one_capacity = wiener_cap1(g, c.below_one, inner).value;
    }
    res.certificates = c;
  }
  res.extremal = std::move(ext);
  return res;
}

enum class Verdict { Confirmed, Violated, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "CONFIRMED";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::NotApplicable: return "NOT-APPLICABLE";
  }
  return "?";
}

struct NullCheck {
  Verdict verdict = Verdict::NotApplicable;
  double capacity = 0.0;
  Subset finite_points;  ///< points of supp(mu) where G* mu < inf
};

/// If cap1(K) = 0 and mu != 0 on K, G* mu must be infinite mu-a.e.
inline NullCheck capacity_null_check(const Kernel& g, const Subset& k, const Measure& mu) {
  NullCheck out;
  const auto cap = wiener_cap1(g, k, {.with_certificates = false});
  out.capacity = cap.value;
  const Measure on_k = mu.restricted_to(k);
  if (cap.value > 0.0 || on_k.is_zero()) return out;
  const auto adj = adjoint_potential(g, on_k);
  for (std::size_t x : on_k.support())
    if (!std::isinf(adj[x])) out.finite_points.push_back(x);
  out.verdict = out.finite_points.empty() ? Verdict::Confirmed : Verdict::Violated;
  return out;
}

}  // namespace subschur
