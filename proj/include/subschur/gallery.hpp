#pragma once

// Exact builders for the block counterexamples, the geometric and harmonic
// measures, and sampled continuum kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "subschur/core.hpp"
#include "subschur/error.hpp"

namespace subschur {

struct GeometricRule {
  double a = 1.1;
  double b = 1.5;
};
struct HarmonicRule {};  ///< sigma_{2k-1} = 1, sigma_{2k} = 1/k
struct CustomRule {
  std::vector<double> weights;  ///< length 2 n_blocks
};

using SigmaRule = std::variant<GeometricRule, HarmonicRule, CustomRule>;

enum class BlockVariant { ZeroDiagonal, StrictlyPositive };

inline const char* to_string(BlockVariant v) {
  return v == BlockVariant::ZeroDiagonal ? "zero_diagonal" : "strictly_positive";
}

struct BlockSpec {
  std::size_t n_blocks = 1;
  SigmaRule sigma_rule = HarmonicRule{};
  BlockVariant variant = BlockVariant::ZeroDiagonal;
};

struct BlockExample {
  Kernel kernel;
  Measure sigma;
  std::vector<double> u;      ///< closed-form solution of u = G(u^q sigma)
  double a_min = 1.0;         ///< range of the per-block anisotropy (1 for zero_diagonal)
  double a_max = 1.0;
  std::size_t truncation = 0; ///< number of blocks kept from the infinite family
};

namespace detail {

/// sigma_1 .. sigma_{2n}, validated against the rule's invariants.
inline std::vector<double> block_weights(const BlockSpec& spec, double q) {
  const std::size_t n = spec.n_blocks;
  if (n == 0) throw DomainError("n_blocks must be positive");
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("block examples need 0 < q < 1");
  std::vector<double> w(2 * n);
  if (const auto* g = std::get_if<GeometricRule>(&spec.sigma_rule)) {
    if (!(1.0 < g->a) || !(g->a < std::pow(g->b, q)))
      throw DomainError("geometric rule needs 1 < a < b^q");
    for (std::size_t k = 1; k <= n; ++k) {
      w[2 * k - 2] = std::pow(g->a, static_cast<double>(k));
      w[2 * k - 1] = std::pow(g->b, -static_cast<double>(k));
    }
  } else if (std::holds_alternative<HarmonicRule>(spec.sigma_rule)) {
    for (std::size_t k = 1; k <= n; ++k) {
      w[2 * k - 2] = 1.0;
      w[2 * k - 1] = 1.0 / static_cast<double>(k);
    }
  } else {
    const auto& c = std::get<CustomRule>(spec.sigma_rule).weights;
    if (c.size() != 2 * n) throw DomainError("custom weights must have length 2 n_blocks");
    for (double v : c)
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("custom block weights must be positive and finite");
    w = c;
  }
  return w;
}

}  // namespace detail

/// Block-diagonal kernel with its measure and the explicit solution.
/// Zero-diagonal blocks [[0,1],[1,0]] give
///   u_{2k-1} = (s_{2k-1}^q s_{2k})^{1/(1-q^2)},  u_{2k} = (s_{2k-1} s_{2k}^q)^{1/(1-q^2)}.
/// Strictly positive blocks [[a_k,1],[1,1/a_k]] with a_k = (s_{2k}/s_{2k-1})^{1/(1+q)}
/// have solution 2^{1/(1-q)} u.
inline BlockExample build_block(const BlockSpec& spec, double q) {
  const auto w = detail::block_weights(spec, q);
  const std::size_t m = w.size();
  const double e = 1.0 / (1.0 - q * q);
  std::vector<double> g(m * m, 0.0), u(m);
  double a_min = 1.0, a_max = 1.0;
  if (spec.variant == BlockVariant::StrictlyPositive) {
    a_min = std::numeric_limits<double>::infinity();
    a_max = 0.0;
  }
  for (std::size_t k = 0; k < m / 2; ++k) {
    const std::size_t i = 2 * k, j = 2 * k + 1;
    g[i * m + j] = g[j * m + i] = 1.0;
    // Written via logs so geometric weights a^k, b^-k stay accurate for large k.
    u[i] = std::exp(e * (q * std::log(w[i]) + std::log(w[j])));
    u[j] = std::exp(e * (std::log(w[i]) + q * std::log(w[j])));
    if (spec.variant == BlockVariant::StrictlyPositive) {
      const double ak = std::pow(w[j] / w[i], 1.0 / (1.0 + q));
      g[i * m + i] = ak;
      g[j * m + j] = 1.0 / ak;
      a_min = std::min(a_min, ak);
      a_max = std::max(a_max, ak);
    }
  }
  if (spec.variant == BlockVariant::StrictlyPositive) {
    const double s = std::pow(2.0, 1.0 / (1.0 - q));
    for (double& v : u) v *= s;
  }
  auto space = Space::indexed(m);
  return {Kernel(space, std::move(g)), Measure(space, w), std::move(u), a_min, a_max, spec.n_blocks};
}

struct DivergenceWitness {
  double ratio = 0.0;            ///< ||G nu||^q_{L^q(sigma)} / ||nu||^q
  std::vector<double> nu;        ///< nu_{2k-1} = s_{2k}^{1/(1-q)}, nu_{2k} = s_{2k-1}^{1/(1-q)}
  std::size_t truncation = 0;
};

/// Test measure for the first n blocks. For zero-diagonal blocks
/// the ratio is exactly (sum_{k <= 2n} s_k^{1/(1-q)})^{1-q}; for strictly
/// positive blocks it is evaluated on the actual kernel.
inline DivergenceWitness divergence_witness(const BlockSpec& spec, double q, std::size_t n) {
  BlockSpec s = spec;
  s.n_blocks = n;
  if (auto* c = std::get_if<CustomRule>(&s.sigma_rule)) {
    if (c->weights.size() < 2 * n) throw DomainError("custom weights shorter than 2 n");
    c->weights.resize(2 * n);
  }
  const auto w = detail::block_weights(s, q);
  const double p = 1.0 / (1.0 - q);
  DivergenceWitness out;
  out.truncation = n;
  out.nu.resize(w.size());
  for (std::size_t k = 0; k < n; ++k) {
    out.nu[2 * k] = std::pow(w[2 * k + 1], p);
    out.nu[2 * k + 1] = std::pow(w[2 * k], p);
  }
  const double mass = std::accumulate(out.nu.begin(), out.nu.end(), 0.0);
  if (spec.variant == BlockVariant::ZeroDiagonal) {
    out.ratio = std::pow(mass, 1.0 - q);
  } else {
    const auto ex = build_block(s, q);
    const auto gnu = detail::apply(ex.kernel, out.nu);
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) acc += std::pow(gnu[x], q) * w[x];
    out.ratio = acc / std::pow(mass, q);
  }
  return out;
}

// Partial sums for the harmonic rule. The solution norm
// sum_k (k^{-q/(1-q^2)} + k^{-1/(1-q^2)}) converges for q above the golden
// threshold while the critical energy sum_k (k^{-q/(1-q)} + k^{-1}) diverges.

namespace detail {

inline constexpr double kDirectSumLimit = 1e6;

/// sum_{k=1}^{m} k^{-s}, summed smallest-first.
inline double direct_power_sum(double s, double m) {
  double acc = 0.0;
  for (double k = m; k >= 1.0; k -= 1.0) acc += std::pow(k, -s);
  return acc;
}

/// head + sum_{a<k<=b} k^{-s} by Euler-Maclaurin, head = sum_{k<=a} k^{-s}.
inline double power_sum_tail(double s, double head, double a, double b) {
  auto f = [s](double x) { return std::pow(x, -s); };
  auto df = [s](double x) { return -s * std::pow(x, -s - 1.0); };
  auto d3f = [s](double x) { return -s * (s + 1.0) * (s + 2.0) * std::pow(x, -s - 3.0); };
  const double integral = s == 1.0 ? std::log(b / a) : (std::pow(b, 1.0 - s) - std::pow(a, 1.0 - s)) / (1.0 - s);
  return head + integral + (f(b) - f(a)) / 2.0 + (df(b) - df(a)) / 12.0 - (d3f(b) - d3f(a)) / 720.0;
}

/// sum_{k=1}^{n} k^{-s} for real n >= 1: direct up to 1e6, Euler-Maclaurin beyond.
inline double power_sum(double s, double n) {
  if (n < 1.0) return 0.0;
  const double m = std::floor(n);
  if (m <= kDirectSumLimit) return direct_power_sum(s, m);
  return power_sum_tail(s, direct_power_sum(s, kDirectSumLimit), kDirectSumLimit, m);
}

}  // namespace detail

/// ||u||^q_{L^q(sigma)} of the harmonic-rule block example truncated at n blocks.
inline double harmonic_solution_partial(double q, double n) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("need 0 < q < 1");
  return detail::power_sum(q / (1.0 - q * q), n) + detail::power_sum(1.0 / (1.0 - q * q), n);
}

/// int (G sigma)^{q/(1-q)} d sigma of the same example.
inline double harmonic_energy_partial(double q, double n) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("need 0 < q < 1");
  return detail::power_sum(q / (1.0 - q), n) + detail::power_sum(1.0, n);
}

/// Smallest number of blocks n with energy partial sum > M. Exact below 1e6,
/// otherwise located by bisection on the asymptotic sum (so returned as a real).
inline double harmonic_blocks_to_exceed(double q, double bound) {
  if (!(q > 0.0) || !(q < 1.0)) throw DomainError("need 0 < q < 1");
  const double s = q / (1.0 - q);
  double acc = 0.0;
  for (double k = 1.0; k <= detail::kDirectSumLimit; k += 1.0) {
    acc += std::pow(k, -s) + 1.0 / k;
    if (acc > bound) return k;
  }
  const double a = detail::kDirectSumLimit;
  const double h1 = detail::direct_power_sum(s, a), h2 = detail::direct_power_sum(1.0, a);
  auto partial = [&](double m) { return detail::power_sum_tail(s, h1, a, m) + detail::power_sum_tail(1.0, h2, a, m); };
  double lo = a, hi = 2.0 * a;
  while (partial(hi) <= bound) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return hi;
  }
  // Invariant: partial(lo) <= bound < partial(hi).
  while (hi - lo > 1.0 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
    const double mid = std::floor(lo + (hi - lo) / 2.0);
    (partial(mid) > bound ? hi : lo) = mid;
  }
  return hi;
}

// Sampled continuum kernels.

struct RieszFamily {
  double alpha = 0.5;
  std::size_t dim = 1;
};
struct IntervalGreenFamily {};

struct SampledKernelSpec {
  std::variant<RieszFamily, IntervalGreenFamily> family = IntervalGreenFamily{};
  std::vector<std::vector<double>> points;  ///< coordinates, one row per point
  std::vector<double> weights;              ///< quadrature weights, become sigma
};

struct SampledExample {
  Kernel kernel;
  Measure sigma;
};

/// Riesz: |x-y|^{alpha-d} with +inf diagonal. Interval Green: min(x,y)(1-max(x,y)).
inline SampledExample build_sampled(const SampledKernelSpec& spec) {
  const std::size_t n = spec.points.size();
  if (spec.weights.size() != n) throw StructuralError("one quadrature weight per sample point is required");
  std::vector<double> g(n * n);
  if (const auto* r = std::get_if<RieszFamily>(&spec.family)) {
    const double d = static_cast<double>(r->dim);
    if (!(r->alpha > 0.0) || !(r->alpha < d)) throw DomainError("riesz family needs 0 < alpha < dim");
    for (const auto& p : spec.points)
      if (p.size() != r->dim) throw StructuralError("sample point dimension differs from dim");
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) {
          g[x * n + y] = kInf;
          continue;
        }
        double r2 = 0.0;
        for (std::size_t i = 0; i < r->dim; ++i) {
          const double t = spec.points[x][i] - spec.points[y][i];
          r2 += t * t;
        }
        if (r2 == 0.0) throw DomainError("duplicate sample points in a riesz kernel");
        g[x * n + y] = std::pow(std::sqrt(r2), r->alpha - d);
      }
    }
  } else {
    std::vector<double> t(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (spec.points[x].size() != 1) throw StructuralError("interval green points are one-dimensional");
      t[x] = spec.points[x][0];
      if (!(t[x] > 0.0) || !(t[x] < 1.0)) throw DomainError("interval green points must lie in (0, 1)");
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) g[x * n + y] = std::min(t[x], t[y]) * (1.0 - std::max(t[x], t[y]));
  }
  auto space = std::make_shared<const Space>(Space::indexed(n)->points(), spec.points);
  return {Kernel(space, std::move(g)), Measure(space, spec.weights)};
}

/// n equally spaced interior points of (0, 1) with weights 1/(n+1).
inline SampledKernelSpec uniform_interval_grid(std::size_t n) {
  SampledKernelSpec s;
  s.family = IntervalGreenFamily{};
  for (std::size_t i = 1; i <= n; ++i) {
    s.points.push_back({static_cast<double>(i) / static_cast<double>(n + 1)});
    s.weights.push_back(1.0 / static_cast<double>(n + 1));
  }
  return s;
}

}  // namespace subschur
