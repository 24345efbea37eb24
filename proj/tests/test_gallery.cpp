#include <gtest/gtest.h>

#include <cmath>

#include "subschur/capacity.hpp"
#include "subschur/gallery.hpp"
#include "subschur/principles.hpp"
#include "subschur/sublinear.hpp"

using namespace subschur;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// sum_x u(x)^q sigma(x), straight from a built example.
double solution_mass(const BlockExample& ex, double q) {
  double s = 0.0;
  for (std::size_t x = 0; x < ex.u.size(); ++x) s += std::pow(ex.u[x], q) * ex.sigma[x];
  return s;
}

}  // namespace

TEST(Gallery, UnitBlockHasUnitSolution) {
  for (double q : {0.2, 0.5, 0.9}) {
    const auto ex = build_block({1, CustomRule{{1, 1}}, BlockVariant::ZeroDiagonal}, q);
    EXPECT_EQ(ex.u, (std::vector<double>{1, 1}));
    EXPECT_EQ(ex.kernel(0, 1), 1.0);
    EXPECT_EQ(ex.kernel(0, 0), 0.0);
    EXPECT_EQ(ex.truncation, 1u);
  }
}

TEST(Gallery, RejectsInvalidSpecs) {
  EXPECT_THROW(build_block({0, HarmonicRule{}, BlockVariant::ZeroDiagonal}, 0.5), DomainError);
  EXPECT_THROW(build_block({2, HarmonicRule{}, BlockVariant::ZeroDiagonal}, 1.0), DomainError);
  // b^q = 1.5^0.2 < 1.1
  EXPECT_THROW(build_block({2, GeometricRule{1.1, 1.5}, BlockVariant::ZeroDiagonal}, 0.2), DomainError);
  EXPECT_THROW(build_block({2, GeometricRule{0.9, 1.5}, BlockVariant::ZeroDiagonal}, 0.5), DomainError);
  EXPECT_THROW(build_block({2, CustomRule{{1, 1, 1}}, BlockVariant::ZeroDiagonal}, 0.5), DomainError);
  EXPECT_THROW(build_block({1, CustomRule{{1, 0}}, BlockVariant::ZeroDiagonal}, 0.5), DomainError);
}

TEST(Gallery, ClosedFormSolvesTheEquation) {
  for (double q : {0.3, 0.5, 0.75}) {
    for (std::size_t n : {1u, 5u, 50u}) {
      for (auto variant : {BlockVariant::ZeroDiagonal, BlockVariant::StrictlyPositive}) {
        for (SigmaRule rule : {SigmaRule{HarmonicRule{}}, SigmaRule{GeometricRule{1.05, 1.5}}}) {
          if (std::holds_alternative<GeometricRule>(rule) && !(1.05 < std::pow(1.5, q))) continue;
          const auto ex = build_block({n, rule, variant}, q);
          EXPECT_LT(fixed_point_residual(SublinearProblem(ex.kernel, ex.sigma, q), ex.u), 1e-12);
        }
      }
    }
  }
}

TEST(Gallery, GeometricSummandsMatchClosedForm) {
  const double q = 0.5, a = 1.1, b = 1.5;
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto ex = build_block({n, GeometricRule{a, b}, BlockVariant::ZeroDiagonal}, q);
    const std::size_t i = 2 * n - 2, j = 2 * n - 1;
    const double pair = std::pow(ex.u[i], q) * ex.sigma[i] + std::pow(ex.u[j], q) * ex.sigma[j];
    const double e = static_cast<double>(n) / (1.0 - q * q);
    EXPECT_LT(rel(pair, std::pow(a / std::pow(b, q), e) + std::pow(std::pow(a, q) / b, e)), 1e-12);
  }
}

TEST(Gallery, HarmonicNormMatchesSeries) {
  for (double q : {0.3, 0.75}) {
    for (std::size_t n : {1u, 7u, 40u}) {
      const auto ex = build_block({n, HarmonicRule{}, BlockVariant::ZeroDiagonal}, q);
      EXPECT_LT(rel(solution_mass(ex, q), harmonic_solution_partial(q, static_cast<double>(n))), 1e-12);
      const auto gs = potential(ex.kernel, ex.sigma);
      EXPECT_LT(rel(power_integral(gs, ex.sigma, q / (1.0 - q)), harmonic_energy_partial(q, static_cast<double>(n))), 1e-12);
    }
  }
}

TEST(Gallery, StrictlyPositiveVariantScalesTheSolution) {
  const double q = 0.5;
  const auto z = build_block({6, HarmonicRule{}, BlockVariant::ZeroDiagonal}, q);
  const auto p = build_block({6, HarmonicRule{}, BlockVariant::StrictlyPositive}, q);
  for (std::size_t x = 0; x < z.u.size(); ++x) EXPECT_LT(rel(p.u[x], 4.0 * z.u[x]), 1e-14);
  // a_k = (1/k)^{2/3}
  EXPECT_DOUBLE_EQ(p.a_max, 1.0);
  EXPECT_LT(rel(p.a_min, std::pow(6.0, -2.0 / 3.0)), 1e-14);
  for (std::size_t x = 0; x < z.u.size(); ++x)
    for (std::size_t y = 0; y < z.u.size(); ++y) EXPECT_GE(p.kernel(x, y), z.kernel(x, y));
}

TEST(Gallery, DivergenceWitness) {
  const BlockSpec unit{1, CustomRule{{1, 1}}, BlockVariant::ZeroDiagonal};
  EXPECT_LT(rel(divergence_witness(unit, 0.5, 1).ratio, std::sqrt(2.0)), 1e-15);

  const BlockSpec geo{1, GeometricRule{1.1, 1.5}, BlockVariant::ZeroDiagonal};
  const BlockSpec geo_pos{1, GeometricRule{1.1, 1.5}, BlockVariant::StrictlyPositive};
  double prev = 0.0;
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto w = divergence_witness(geo, 0.5, n);
    EXPECT_GT(w.ratio, prev);
    prev = w.ratio;
    // Direct evaluation of ||G nu||^q_q / ||nu||^q on the built kernel.
    const auto ex = build_block({n, GeometricRule{1.1, 1.5}, BlockVariant::ZeroDiagonal}, 0.5);
    const Measure nu(ex.kernel.space_ptr(), w.nu);
    const double direct = power_integral(potential(ex.kernel, nu), ex.sigma, 0.5) / std::sqrt(nu.total());
    EXPECT_LT(rel(w.ratio, direct), 1e-12);
    EXPECT_GE(divergence_witness(geo_pos, 0.5, n).ratio, w.ratio * (1 - 1e-12));
  }
}

TEST(Gallery, HarmonicBlocksToExceed) {
  const double q = 0.75;
  const double n10 = harmonic_blocks_to_exceed(q, 10.0);
  EXPECT_GT(harmonic_energy_partial(q, n10), 10.0);
  EXPECT_LE(harmonic_energy_partial(q, n10 - 1), 10.0);
  // Beyond direct summation: ln n + gamma + zeta(3) ~ 100.
  const double n100 = harmonic_blocks_to_exceed(q, 100.0);
  const double approx = std::exp(100.0 - 0.5772156649015329 - 1.2020569031595942);
  EXPECT_LT(rel(n100, approx), 1e-6);
}

TEST(Gallery, PowerSumAsymptoticsAgreeWithDirectSum) {
  for (double s : {0.5, 1.0, 1.5, 3.0}) {
    const double n = 3e6;
    double direct = 0.0;
    for (double k = n; k >= 1.0; k -= 1.0) direct += std::pow(k, -s);
    EXPECT_LT(rel(detail::power_sum(s, n), direct), 1e-12) << s;
  }
}

TEST(Gallery, SampledRiesz) {
  SampledKernelSpec s;
  s.family = RieszFamily{0.5, 1};
  s.points = {{0.0}, {1.0}};
  s.weights = {0.5, 0.5};
  const auto ex = build_sampled(s);
  EXPECT_EQ(ex.kernel(0, 1), 1.0);
  EXPECT_TRUE(std::isinf(ex.kernel(0, 0)));
  EXPECT_DOUBLE_EQ(ex.sigma[1], 0.5);

  s.points = {{0.0}, {0.0}};
  EXPECT_THROW(build_sampled(s), DomainError);
  s.points = {{0.0}, {1.0}};
  s.family = RieszFamily{1.0, 1};
  EXPECT_THROW(build_sampled(s), DomainError);
}

TEST(Gallery, SampledRieszIsSymmetricQuasimetric) {
  SampledKernelSpec s;
  // 1/G = |x-y|^{1/2} is itself a metric.
  s.family = RieszFamily{0.5, 1};
  for (int i = 0; i < 8; ++i) {
    s.points.push_back({std::pow(1.7, i)});
    s.weights.push_back(1.0);
  }
  const auto ex = build_sampled(s);
  EXPECT_TRUE(ex.kernel.is_symmetric());
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) {
      if (x != y) {
        EXPECT_GT(ex.kernel(x, y), 0.0);
      }
    }
  EXPECT_NEAR(quasimetric_constant(ex.kernel).kappa, 1.0, 1e-9);
}

TEST(Gallery, IntervalGreen) {
  SampledKernelSpec s;
  s.points = {{0.5}, {0.25}};
  s.weights = {1, 1};
  const auto ex = build_sampled(s);
  EXPECT_DOUBLE_EQ(ex.kernel(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(ex.kernel(0, 1), 0.25 * 0.5);
  s.points = {{0.0}, {0.5}};
  EXPECT_THROW(build_sampled(s), DomainError);
}

TEST(Gallery, IntervalGreenSatisfiesMaximumPrinciple) {
  const auto ex = build_sampled(uniform_interval_grid(50));
  const auto r = wmp_constant(ex.kernel);
  EXPECT_EQ(r.mode, SearchMode::Randomized);
  EXPECT_LE(r.constant_h, 1.0 + 1e-6);
}

TEST(Gallery, SingletonCapacityOnGalleryKernels) {
  std::vector<Kernel> kernels;
  kernels.push_back(build_block({5, HarmonicRule{}, BlockVariant::ZeroDiagonal}, 0.5).kernel);
  kernels.push_back(build_block({5, HarmonicRule{}, BlockVariant::StrictlyPositive}, 0.5).kernel);
  kernels.push_back(build_sampled(uniform_interval_grid(10)).kernel);
  SampledKernelSpec r;
  r.family = RieszFamily{0.5, 1};
  r.points = {{0.0}, {0.3}, {1.0}};
  r.weights = {1, 1, 1};
  kernels.push_back(build_sampled(r).kernel);
  for (const auto& g : kernels) {
    for (std::size_t x = 0; x < g.size(); ++x) {
      const double expected = g(x, x) == 0.0 ? kInf : 1.0 / g(x, x);
      EXPECT_EQ(wiener_cap1(g, {x}).value, expected);
    }
  }
}
