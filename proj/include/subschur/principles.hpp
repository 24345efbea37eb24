#pragma once

// Verifiers for kernel hypotheses: weak and complete maximum principles,
// quasimetric structure, and the modifier construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "subschur/core.hpp"
#include "subschur/lp.hpp"

namespace subschur {

enum class SearchMode { Exact, Randomized };

inline const char* to_string(SearchMode m) { return m == SearchMode::Exact ? "exact" : "randomized"; }

struct MaxPrincipleWitness {
  Subset support;            ///< S
  std::size_t point = 0;     ///< x outside S
  std::vector<double> nu;    ///< maximizing measure on S (empty when the LP is unbounded)
  double value = 0.0;        ///< ratio attained by this (S, x)
};

struct WmpReport {
  bool holds = true;
  double constant_h = 1.0;   ///< smallest certified h; a lower bound in randomized mode
  std::optional<MaxPrincipleWitness> witness;
  SearchMode mode = SearchMode::Exact;
  std::size_t programs_solved = 0;
};

struct SearchOptions {
  std::uint64_t budget = std::uint64_t{1} << 18;  ///< exact when 2^n * n <= budget
  std::uint64_t seed = 0;
  LpOptions lp{};
};

namespace detail {

inline bool exact_enumeration_fits(std::size_t n, std::uint64_t budget) {
  if (n >= 40) return false;
  return (std::uint64_t{1} << n) * n <= budget;
}

/// Candidate (S, x) families. Exact mode yields every nonempty proper S; the
/// randomized family always contains singletons and complements of singletons.
inline std::vector<Subset> support_family(std::size_t n, const SearchOptions& opt, SearchMode& mode) {
  std::vector<Subset> out;
  if (exact_enumeration_fits(n, opt.budget)) {
    mode = SearchMode::Exact;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) out.push_back(subset_from_mask(mask, n));
    return out;
  }
  mode = SearchMode::Randomized;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i});
  for (std::size_t i = 0; i < n; ++i) {
    Subset s;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s.push_back(j);
    out.push_back(std::move(s));
  }
  // A longer budget extends the same seeded stream, so samples only grow.
  const std::uint64_t samples = std::max<std::uint64_t>(10 * n * n, opt.budget / std::max<std::size_t>(n, 1));
  std::mt19937_64 rng(opt.seed);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t k = 0; k < samples; ++k) {
    Subset s;
    for (std::size_t j = 0; j < n; ++j)
      if (coin(rng)) s.push_back(j);
    if (s.empty() || s.size() == n) continue;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<std::size_t> complement(const Subset& s, std::size_t n) {
  std::vector<bool> in(n, false);
  for (std::size_t i : s) in[i] = true;
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) c.push_back(i);
  return c;
}

inline void record(WmpReport& rep, double value, const Subset& s, std::size_t x, std::vector<double> nu) {
  if (value > rep.constant_h) {
    rep.constant_h = value;
    rep.witness = MaxPrincipleWitness{s, x, std::move(nu), value};
  }
}

}  // namespace detail

/// Weak maximum principle constant: h = sup over nu of sup_Omega G nu when
/// G nu <= 1 on supp(nu). Each (S, x) pair is the LP
///   max G nu(x)  s.t.  G nu <= 1 on S,  nu >= 0 supported in S.
inline WmpReport wmp_constant(const Kernel& g, const SearchOptions& opt = {}) {
  const std::size_t n = g.size();
  WmpReport rep;
  if (n < 2) return rep;
  const auto family = detail::support_family(n, opt, rep.mode);

  for (const Subset& s : family) {
    // nu_s = 0 is forced when some row of S sees G(y, s) = inf.
    std::vector<std::size_t> free;
    for (std::size_t v : s) {
      const bool blocked = std::any_of(s.begin(), s.end(), [&](std::size_t y) { return std::isinf(g(y, v)); });
      if (!blocked) free.push_back(v);
    }
    LpProblem lp;
    lp.objective.assign(free.size(), 0.0);
    for (std::size_t y : s) {
      std::vector<double> row(free.size());
      for (std::size_t k = 0; k < free.size(); ++k) row[k] = g(y, free[k]);
      lp.add_row(std::move(row), Sense::Le, 1.0);
    }
    for (std::size_t x : detail::complement(s, n)) {
      bool any = false, infinite = false;
      for (std::size_t k = 0; k < free.size(); ++k) {
        lp.objective[k] = g(x, free[k]);
        if (lp.objective[k] > 0.0) any = true;
        if (std::isinf(lp.objective[k])) infinite = true;
      }
      if (!any) continue;
      if (infinite) {
        rep.holds = false;
        detail::record(rep, kInf, s, x, {});
        continue;
      }
      const LpSolution sol = solve_lp(lp, opt.lp);
      ++rep.programs_solved;
      if (sol.status == LpStatus::Unbounded) {
        detail::record(rep, kInf, s, x, {});
        continue;
      }
      std::vector<double> nu(n, 0.0);
      for (std::size_t k = 0; k < free.size(); ++k) nu[free[k]] = sol.primal[k];
      detail::record(rep, sol.value, s, x, std::move(nu));
    }
  }
  rep.holds = !std::isinf(rep.constant_h);
  return rep;
}

/// Complete maximum principle constant, read as: G mu <= G nu + c on S_mu
/// implies G mu <= h (G nu + c) on Omega. Each (S, x) pair is the LP
///   max G mu(x)  s.t.  G mu <= G nu + c on S,  G nu(x) + c = 1,
/// over mu on S with G mu finite on S, nu >= 0 on Omega and c >= 0.
inline WmpReport complete_mp_constant(const Kernel& g, const SearchOptions& opt = {}) {
  const std::size_t n = g.size();
  WmpReport rep;
  if (n < 2) return rep;
  const auto family = detail::support_family(n, opt, rep.mode);

  for (const Subset& s : family) {
    std::vector<std::size_t> mu_free;
    for (std::size_t v : s) {
      const bool blocked = std::any_of(s.begin(), s.end(), [&](std::size_t y) { return std::isinf(g(y, v)); });
      if (!blocked) mu_free.push_back(v);
    }
    for (std::size_t x : detail::complement(s, n)) {
      bool any = false, infinite = false;
      for (std::size_t v : mu_free) {
        if (g(x, v) > 0.0) any = true;
        if (std::isinf(g(x, v))) infinite = true;
      }
      if (!any) continue;
      if (infinite) {
        detail::record(rep, kInf, s, x, {});
        continue;
      }
      // nu_z = 0 when G(x, z) = inf; a row y is slack in the limit when some
      // admissible z has G(y, z) = inf.
      std::vector<std::size_t> nu_free;
      for (std::size_t z = 0; z < n; ++z)
        if (!std::isinf(g(x, z))) nu_free.push_back(z);
      const std::size_t nm = mu_free.size(), nn = nu_free.size();
      LpProblem lp;
      lp.objective.assign(nm + nn + 1, 0.0);
      for (std::size_t k = 0; k < nm; ++k) lp.objective[k] = g(x, mu_free[k]);
      for (std::size_t y : s) {
        const bool slack = std::any_of(nu_free.begin(), nu_free.end(), [&](std::size_t z) { return std::isinf(g(y, z)); });
        if (slack) continue;
        std::vector<double> row(nm + nn + 1);
        for (std::size_t k = 0; k < nm; ++k) row[k] = g(y, mu_free[k]);
        for (std::size_t k = 0; k < nn; ++k) row[nm + k] = -g(y, nu_free[k]);
        row[nm + nn] = -1.0;
        lp.add_row(std::move(row), Sense::Le, 0.0);
      }
      std::vector<double> norm(nm + nn + 1, 0.0);
      for (std::size_t k = 0; k < nn; ++k) norm[nm + k] = g(x, nu_free[k]);
      norm[nm + nn] = 1.0;
      lp.add_row(std::move(norm), Sense::Eq, 1.0);

      const LpSolution sol = solve_lp(lp, opt.lp);
      ++rep.programs_solved;
      if (sol.status == LpStatus::Unbounded) {
        detail::record(rep, kInf, s, x, {});
        continue;
      }
      std::vector<double> mu(n, 0.0);
      for (std::size_t k = 0; k < nm; ++k) mu[mu_free[k]] = sol.primal[k];
      detail::record(rep, sol.value, s, x, std::move(mu));
    }
  }
  rep.holds = !std::isinf(rep.constant_h);
  return rep;
}

struct QuasimetricReport {
  bool is_quasimetric = false;
  bool symmetric = false;
  double kappa = kInf;
  std::optional<std::array<std::size_t, 3>> violating_triple;  ///< (x, y, z) attaining kappa
  /// Largest d(x,z)d(y,w) / [d(x,y)d(z,w) + d(y,z)d(x,w)]; NaN when skipped.
  double ptolemy_ratio = std::numeric_limits<double>::quiet_NaN();
  bool ptolemy_holds = true;  ///< ratio <= 4 kappa^2 (vacuous when skipped)
};

/// d(x,y) = 1/G(x,y) with 1/0 = inf, 1/inf = 0.
inline std::vector<double> quasi_distance(const Kernel& g) {
  std::vector<double> d(g.entries().size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = ext_reciprocal(g.entries()[i]);
  return d;
}

namespace detail {

/// a / b in [0, inf] with 0/0 and inf/inf treated as 0 (no constraint).
inline double constraint_ratio(double a, double b) {
  if (a == 0.0) return 0.0;
  if (std::isinf(a)) return std::isinf(b) ? 0.0 : kInf;
  if (b == 0.0) return kInf;
  return a / b;
}

}  // namespace detail

/// Smallest kappa with d(x,y) <= kappa [d(x,z) + d(z,y)] for all triples.
/// `ptolemy_limit` bounds n for the O(n^4) cross-check.
inline QuasimetricReport quasimetric_constant(const Kernel& g, std::size_t ptolemy_limit = 40) {
  QuasimetricReport rep;
  const std::size_t n = g.size();
  rep.symmetric = g.is_symmetric();
  if (!rep.symmetric || n == 0) return rep;
  const auto d = quasi_distance(g);
  auto D = [&](std::size_t a, std::size_t b) { return d[a * n + b]; };
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) return rep;

  double kappa = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (D(x, y) == 0.0) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const double r = detail::constraint_ratio(D(x, y), D(x, z) + D(z, y));
        if (r > kappa) {
          kappa = r;
          rep.violating_triple = std::array<std::size_t, 3>{x, y, z};
        }
      }
    }
  rep.kappa = kappa;
  rep.is_quasimetric = !std::isinf(kappa);

  if (rep.is_quasimetric && n <= ptolemy_limit) {
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          for (std::size_t w = 0; w < n; ++w) {
            const double lhs = ext_mul(D(x, z), D(y, w));
            const double rhs = ext_mul(D(x, y), D(z, w)) + ext_mul(D(y, z), D(x, w));
            worst = std::max(worst, detail::constraint_ratio(lhs, rhs));
          }
    rep.ptolemy_ratio = worst;
    rep.ptolemy_holds = worst <= 4.0 * kappa * kappa * (1.0 + 1e-12);
  }
  return rep;
}

/// g(x) = min(1, G(x, x0)).
inline std::vector<double> modifier(const Kernel& g, std::size_t x0) {
  if (x0 >= g.size()) throw StructuralError("pole outside the space");
  std::vector<double> m(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) m[x] = std::min(1.0, g(x, x0));
  return m;
}

struct ModifiedKernel {
  Kernel kernel;
  Subset retained;  ///< indices into the original space
  Subset excluded;  ///< points with m = 0 or m = inf
};

/// K(x,y) = G(x,y) / (m(x) m(y)) on the points where 0 < m < inf.
inline ModifiedKernel modify_kernel(const Kernel& g, std::span<const double> m) {
  const std::size_t n = g.size();
  if (m.size() != n) throw StructuralError("modifier length differs from space size");
  Subset keep, drop;
  for (std::size_t x = 0; x < n; ++x) {
    detail::check_extended_nonnegative(m[x], "modifier");
    (m[x] > 0.0 && !std::isinf(m[x]) ? keep : drop).push_back(x);
  }
  if (keep.empty()) throw DomainError("modifier excludes every point");
  std::vector<double> e;
  e.reserve(keep.size() * keep.size());
  for (std::size_t x : keep)
    for (std::size_t y : keep) e.push_back(g(x, y) / (m[x] * m[y]));
  return {Kernel(g.space().subspace(keep), std::move(e)), std::move(keep), std::move(drop)};
}

}  // namespace subschur
