#pragma once

// Weak-type (1, q) constants, the weak quotient estimate, the testing
// condition on K x K and (p, p) operator norms of f -> G(f sigma).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "subschur/capacity.hpp"
#include "subschur/norms.hpp"
#include "subschur/principles.hpp"
#include "subschur/sublinear.hpp"

namespace subschur {

struct SubsetSearchOptions {
  std::uint64_t budget = std::uint64_t{1} << 16;  ///< exact when 2^|supp sigma| <= budget
  std::uint64_t seed = 0;
  LpOptions lp{};
};

namespace detail {

/// Nonempty subsets of `base`: every one in exact mode, otherwise singletons,
/// the whole base, the given extra sets and a seeded random prefix of size
/// max(10 m^2, budget / m).
inline std::vector<Subset> subset_family(const Subset& base, const SubsetSearchOptions& opt,
                                         const std::vector<Subset>& extra, SearchMode& mode) {
  const std::size_t m = base.size();
  std::vector<Subset> out;
  if (m == 0) return out;
  if (m < 40 && (std::uint64_t{1} << m) <= opt.budget) {
    mode = SearchMode::Exact;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      Subset s;
      for (std::size_t i = 0; i < m; ++i)
        if (mask & (std::uint64_t{1} << i)) s.push_back(base[i]);
      out.push_back(std::move(s));
    }
    return out;
  }
  mode = SearchMode::Randomized;
  std::set<Subset> seen;
  auto add = [&](Subset s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && seen.insert(s).second) out.push_back(std::move(s));
  };
  for (std::size_t v : base) add({v});
  add(base);
  for (const Subset& s : extra) add(s);
  const std::uint64_t samples = std::max<std::uint64_t>(10 * m * m, opt.budget / m);
  std::mt19937_64 rng(opt.seed);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t k = 0; k < samples; ++k) {
    Subset s;
    for (std::size_t v : base)
      if (coin(rng)) s.push_back(v);
    add(std::move(s));
  }
  return out;
}

/// Super-level sets {f >= t} of f on `base`, one per distinct value.
inline std::vector<Subset> level_sets(std::span<const double> f, const Subset& base) {
  Subset order(base);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
  std::vector<Subset> out;
  Subset cur;
  for (std::size_t k = 0; k < order.size(); ++k) {
    cur.push_back(order[k]);
    if (k + 1 == order.size() || f[order[k + 1]] != f[order[k]]) out.push_back(cur);
  }
  return out;
}

}  // namespace detail

struct WeakConstant : ConstantEstimate {
  /// max_K sigma(K)^{1/q} / cap0(K): the best constant for every q > 0.
  double capacity_route = 0.0;
  /// sup_y ||G(., y)||_{L^{q,inf}(sigma)}; q > 1 only, NaN otherwise.
  double point_mass_route = std::numeric_limits<double>::quiet_NaN();
  /// sup_y sup_E G* sigma_E(y) / sigma(E)^{1 - 1/q} over level sets of G(., y); q > 1 only.
  double testing_route = std::numeric_limits<double>::quiet_NaN();
  /// max_K sigma(K)^{1/q} / cap1(K) when requested; NaN otherwise.
  double cap1_route = std::numeric_limits<double>::quiet_NaN();
  std::size_t subsets_examined = 0;
};

struct WeakOptions {
  SubsetSearchOptions search{};
  bool with_cap1 = false;
};

/// Best constant in ||G nu||_{L^{q,inf}(sigma)} <= C ||nu||.
///
/// For q <= 1 the answer is the capacity route. For q > 1 the reported
/// lower bound is the point-mass route, attained at a Dirac mass; the
/// capacity route stays available as the exact value.
inline WeakConstant weak_type_constant(const SublinearProblem& p, const WeakOptions& opt = {}) {
  const Kernel& g = p.kernel;
  const Measure& sigma = p.sigma;
  const double q = p.q;
  const std::size_t n = g.size();
  const Subset supp = sigma.support();
  WeakConstant r;
  if (supp.empty()) {
    r.method = "zero-measure";
    r.upper = 0.0;
    return r;
  }

  const auto gs = potential(g, sigma);
  const auto family = detail::subset_family(supp, opt.search, detail::level_sets(gs, supp), r.mode);
  std::optional<Measure> cap_witness;
  for (const Subset& k : family) {
    const double mass = sigma.mass_of(k);
    const auto c = content(g, k, opt.search.lp);
    ++r.subsets_examined;
    const double ratio = c.value == 0.0 ? kInf : std::pow(mass, 1.0 / q) / c.value;
    if (ratio > r.capacity_route) {
      r.capacity_route = ratio;
      r.witness_set = k;
      cap_witness.reset();
      if (c.extremal && c.value > 0.0 && std::isfinite(c.value)) cap_witness = c.extremal->scaled(1.0 / c.value);
    }
    if (opt.with_cap1 && g.is_symmetric()) {
      const auto c1 = wiener_cap1(g, k);
      const double r1 = c1.value == 0.0 ? kInf : std::pow(mass, 1.0 / q) / c1.value;
      if (std::isnan(r.cap1_route) || r1 > r.cap1_route) r.cap1_route = r1;
    }
  }
  if (std::isinf(r.capacity_route)) {
    // some y with G(x, y) = inf on K
    for (std::size_t x : r.witness_set)
      for (std::size_t y = 0; y < n && !cap_witness; ++y)
        if (std::isinf(g(x, y))) cap_witness = Measure::dirac(g.space_ptr(), y);
  }

  if (q <= 1.0) {
    r.lower = r.capacity_route;
    r.upper = r.mode == SearchMode::Exact ? r.capacity_route : kInf;
    r.witness = cap_witness;
    r.method = "capacity";
    return r;
  }

  r.point_mass_route = 0.0;
  r.testing_route = 0.0;
  std::size_t best_y = 0;
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> col(n);
    for (std::size_t x = 0; x < n; ++x) col[x] = g(x, y);
    const double w = norm(col, sigma, NormSpec::weak(q));
    if (w > r.point_mass_route) {
      r.point_mass_route = w;
      best_y = y;
    }
    for (const Subset& e : detail::level_sets(col, supp)) {
      double integral = 0.0;
      for (std::size_t x : e) integral += ext_mul(col[x], sigma[x]);
      r.testing_route = std::max(r.testing_route, integral / std::pow(sigma.mass_of(e), 1.0 - 1.0 / q));
    }
  }
  r.lower = r.point_mass_route;
  r.upper = r.mode == SearchMode::Exact ? r.capacity_route : kInf;
  r.witness = Measure::dirac(g.space_ptr(), best_y);
  r.method = "point-mass";
  return r;
}

struct WeakQuotient {
  double value = 0.0;  ///< ||G nu / G omega||_{L^{1,inf}(omega)}, 0/0 = 0
  double bound = kInf; ///< h ||nu||
  double h = kInf;
  bool symmetric = false;
};

/// The weak quotient estimate for symmetric kernels with a weak maximum principle.
inline WeakQuotient weak_quotient_bound(const Kernel& g, const Measure& omega, const Measure& nu,
                                        std::optional<double> h = std::nullopt, const SearchOptions& opt = {}) {
  detail::require_same_space(g.space_ptr(), omega.space_ptr());
  detail::require_same_space(g.space_ptr(), nu.space_ptr());
  const auto gn = potential(g, nu), go = potential(g, omega);
  std::vector<double> ratio(g.size(), 0.0);
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (gn[x] == 0.0) continue;
    if (go[x] == 0.0 || std::isinf(gn[x])) ratio[x] = kInf;
    else if (std::isinf(go[x])) ratio[x] = 0.0;
    else ratio[x] = gn[x] / go[x];
  }
  WeakQuotient r;
  r.value = norm(ratio, omega, NormSpec::weak(1.0));
  r.h = h ? *h : wmp_constant(g, opt).constant_h;
  r.bound = ext_mul(r.h, nu.total());
  r.symmetric = g.is_symmetric();
  return r;
}

struct TestingConstant : ConstantEstimate {
  /// Restriction to quasimetric balls B(x, r) = {y : d(x, y) < r}; absent
  /// when G is not a quasimetric kernel.
  std::optional<double> ball_constant;
  Subset ball_witness;
  std::size_t balls = 0;
};

namespace detail {

/// sum_{x,y in K} G(x,y) sigma(x) sigma(y) / sigma(K).
inline double testing_ratio(const Kernel& g, const Measure& sigma, const Subset& k) {
  const double mass = sigma.mass_of(k);
  if (mass == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t x : k)
    for (std::size_t y : k) s += ext_mul(g(x, y), sigma[x] * sigma[y]);
  return s / mass;
}

}  // namespace detail

/// c = max_K sum_{K x K} G dsigma dsigma / sigma(K), and its ball-restricted version.
inline TestingConstant testing_condition_11(const Kernel& g, const Measure& sigma, const SubsetSearchOptions& opt = {}) {
  detail::require_same_space(g.space_ptr(), sigma.space_ptr());
  const Subset supp = sigma.support();
  TestingConstant r;
  r.method = "subsets";
  const auto gs = potential(g, sigma);
  for (const Subset& k : detail::subset_family(supp, opt, detail::level_sets(gs, supp), r.mode)) {
    const double c = detail::testing_ratio(g, sigma, k);
    if (c > r.lower) {
      r.lower = c;
      r.witness_set = k;
    }
  }
  r.upper = r.mode == SearchMode::Exact ? r.lower : kInf;
  r.witness = sigma.restricted_to(r.witness_set);

  if (!quasimetric_constant(g, 0).is_quasimetric) return r;
  const std::size_t n = g.size();
  const auto d = quasi_distance(g);
  double best = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> radii(d.begin() + static_cast<std::ptrdiff_t>(x * n), d.begin() + static_cast<std::ptrdiff_t>((x + 1) * n));
    radii.push_back(kInf);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double rad : radii) {
      Subset ball;
      for (std::size_t y = 0; y < n; ++y)
        if (d[x * n + y] < rad || (std::isinf(rad) && std::isfinite(d[x * n + y]))) ball.push_back(y);
      ++r.balls;
      const double c = detail::testing_ratio(g, sigma, ball);
      if (c > best) {
        best = c;
        r.ball_witness = ball;
      }
    }
  }
  r.ball_constant = best;
  return r;
}

struct OperatorNorm {
  double value = 0.0;  ///< ||B x||_p at the final unit vector: a lower bound
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> maximizer;  ///< f with ||f||_{L^p(sigma)} = 1
};

struct OperatorNormOptions {
  double tolerance = 1e-14;
  std::size_t max_iterations = 20000;
};

/// Norm of f -> G(f sigma) on L^p(sigma), p > 1, by Boyd's nonlinear power
/// method on B(x,y) = sigma(x)^{1/p} G(x,y) sigma(y)^{1/p'}. At p = 2 this is
/// power iteration on B^T B.
inline OperatorNorm pp_operator_norm(const Kernel& g, const Measure& sigma, double p, const OperatorNormOptions& opt = {}) {
  detail::require_same_space(g.space_ptr(), sigma.space_ptr());
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("p must lie in (1, inf)");
  const Subset supp = sigma.support();
  const std::size_t m = supp.size();
  OperatorNorm r;
  r.maximizer.assign(g.size(), 0.0);
  if (m == 0) {
    r.converged = true;
    return r;
  }
  const double pc = p / (p - 1.0);
  std::vector<double> b(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double v = g(supp[i], supp[j]);
      if (std::isinf(v)) {
        r.value = kInf;
        r.converged = true;
        return r;
      }
      b[i * m + j] = std::pow(sigma[supp[i]], 1.0 / p) * v * std::pow(sigma[supp[j]], 1.0 / pc);
    }

  auto pnorm = [](const std::vector<double>& v, double e) {
    double s = 0.0;
    for (double x : v) s += std::pow(x, e);
    return std::pow(s, 1.0 / e);
  };
  std::vector<double> x(m, 1.0), y(m), z(m);
  const double x0 = pnorm(x, p);
  for (double& v : x) v /= x0;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += b[i * m + j] * x[j];
      y[i] = s;
    }
    const double val = pnorm(y, p);
    r.iterations = it + 1;
    if (val == 0.0) {
      r.value = 0.0;
      r.converged = true;
      break;
    }
    const bool done = it > 0 && std::abs(val - r.value) <= opt.tolerance * val;
    r.value = std::max(r.value, val);
    if (done) {
      r.converged = true;
      break;
    }
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += b[i * m + j] * std::pow(y[i], p - 1.0);
      z[j] = std::pow(s, pc - 1.0);
    }
    const double zn = pnorm(z, p);
    if (zn == 0.0) break;
    for (std::size_t j = 0; j < m; ++j) x[j] = z[j] / zn;
  }
  for (std::size_t i = 0; i < m; ++i) r.maximizer[supp[i]] = x[i] / std::pow(sigma[supp[i]], 1.0 / p);
  return r;
}

}  // namespace subschur
