#include <gtest/gtest.h>

#include <cmath>

#include "subschur/principles.hpp"
#include "support/generators.hpp"

using namespace subschur;

namespace {

Kernel collinear(double power) {
  const std::vector<double> x{0, 1, 2};
  std::vector<std::vector<double>> rows(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows[i][j] = i == j ? kInf : 1.0 / std::pow(std::abs(x[i] - x[j]), power);
  return Kernel::from_rows(rows);
}

/// Sampled lower bound for the WMP ratio: random nu on random S, scaled so
/// that max_S G nu = 1, then the largest potential off S.
double sampled_wmp_ratio(const Kernel& g, gen::Rng& rng, int samples) {
  const std::size_t n = g.size();
  double best = 1.0;
  for (int k = 0; k < samples; ++k) {
    std::vector<double> nu(n, 0.0);
    std::vector<bool> in(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (gen::uniform(rng, 0, 1) < 0.5) {
        in[i] = true;
        nu[i] = gen::uniform(rng, 0, 1);
      }
    }
    const auto p = detail::apply(g, nu);
    double on_s = 0.0, off_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) (in[i] ? on_s : off_s) = std::max(in[i] ? on_s : off_s, p[i]);
    if (on_s > 0.0) best = std::max(best, off_s / on_s);
  }
  return best;
}

}  // namespace

TEST(Wmp, BlockKernelFailsUnboundedly) {
  const auto r = wmp_constant(Kernel::from_rows({{0, 1}, {1, 0}}));
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(std::isinf(r.constant_h));
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->support.size(), 1u);
  EXPECT_EQ(r.mode, SearchMode::Exact);
}

TEST(Wmp, IdentityHasUnitConstant) {
  const auto r = wmp_constant(Kernel::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.constant_h, 1.0);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Wmp, HandComputedTwoPointConstant) {
  // S={x1}: nu <= 1/G11, G nu(x2) = G21/G11; the worse of the two ratios wins.
  const auto r = wmp_constant(Kernel::from_rows({{1, 3}, {2, 1}}));
  EXPECT_NEAR(r.constant_h, 3.0, 1e-12);
}

TEST(Wmp, InfiniteDiagonalIsVacuous) {
  const auto r = wmp_constant(collinear(1));
  EXPECT_EQ(r.constant_h, 1.0);
}

TEST(Wmp, RandomizedModeIsFlaggedAndMonotoneInBudget) {
  gen::Rng rng(41);
  const auto g = gen::random_symmetric_kernel(rng, 9);
  SearchOptions small{.budget = 100, .seed = 5};
  SearchOptions large{.budget = 4000, .seed = 5};
  const auto a = wmp_constant(g, small), b = wmp_constant(g, large);
  EXPECT_EQ(a.mode, SearchMode::Randomized);
  EXPECT_EQ(b.mode, SearchMode::Randomized);
  EXPECT_LE(a.constant_h, b.constant_h);
  const auto exact = wmp_constant(g);
  EXPECT_EQ(exact.mode, SearchMode::Exact);
  EXPECT_LE(b.constant_h, exact.constant_h + 1e-12);
}

TEST(Wmp, SampledRatiosNeverExceedExactConstant) {
  gen::Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = gen::random_kernel(rng, gen::uniform_int(rng, 2, 5), 0.1);
    const auto r = wmp_constant(g);
    if (!r.holds) continue;
    EXPECT_LE(sampled_wmp_ratio(g, rng, 400), r.constant_h * (1 + 1e-9));
  }
}

TEST(CompleteMp, Examples) {
  EXPECT_EQ(complete_mp_constant(Kernel::from_rows({{1, 0}, {0, 1}})).constant_h, 1.0);
  EXPECT_TRUE(std::isinf(complete_mp_constant(Kernel::from_rows({{0, 1}, {1, 0}})).constant_h));
}

TEST(CompleteMp, DominatesWeakConstant) {
  gen::Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen::random_symmetric_kernel(rng, gen::uniform_int(rng, 2, 5));
    EXPECT_GE(complete_mp_constant(g).constant_h, wmp_constant(g).constant_h * (1 - 1e-9));
  }
}

TEST(Quasimetric, CollinearExamples) {
  auto r = quasimetric_constant(collinear(1));
  EXPECT_TRUE(r.is_quasimetric);
  EXPECT_DOUBLE_EQ(r.kappa, 1.0);
  r = quasimetric_constant(collinear(2));
  EXPECT_DOUBLE_EQ(r.kappa, 2.0);
  EXPECT_TRUE(r.ptolemy_holds);
}

TEST(Quasimetric, NonSymmetricAndZeroEntries) {
  EXPECT_FALSE(quasimetric_constant(Kernel::from_rows({{1, 2}, {1, 1}})).is_quasimetric);
  // d(x1,x2) = inf but d(x1,x3) + d(x3,x2) finite
  const auto r = quasimetric_constant(Kernel::from_rows({{kInf, 0, 1}, {0, kInf, 1}, {1, 1, kInf}}));
  EXPECT_FALSE(r.is_quasimetric);
  EXPECT_TRUE(std::isinf(r.kappa));
  EXPECT_FALSE(quasimetric_constant(Kernel::from_rows({{kInf, kInf}, {kInf, kInf}})).is_quasimetric);
}

TEST(Modifier, Examples) {
  const auto g = Kernel::from_rows({{2, 1}, {1, 2}});
  EXPECT_EQ(modifier(g, 0), (std::vector<double>{1, 1}));
  EXPECT_EQ(modifier(Kernel::from_rows({{2, 1}, {0.5, 2}}), 0)[1], 0.5);
  EXPECT_EQ(modifier(collinear(1), 0)[0], 1.0);
}

TEST(ModifyKernel, Examples) {
  const auto g = Kernel::from_rows({{2, 1}, {1, 2}});
  const std::vector<double> one{1, 1}, half{1, 0.5};
  auto k = modify_kernel(g, one).kernel;
  EXPECT_EQ(std::vector<double>(k.entries().begin(), k.entries().end()), (std::vector<double>{2, 1, 1, 2}));
  k = modify_kernel(g, half).kernel;
  EXPECT_EQ(std::vector<double>(k.entries().begin(), k.entries().end()), (std::vector<double>{2, 2, 2, 8}));
  const std::vector<double> partial{0, 2}, none{0, kInf};
  const auto m = modify_kernel(g, partial);
  EXPECT_EQ(m.retained, (Subset{1}));
  EXPECT_EQ(m.excluded, (Subset{0}));
  EXPECT_EQ(m.kernel.space().points().front(), "x2");
  EXPECT_THROW(modify_kernel(g, none), DomainError);
}

TEST(PrincipleProperties, QuasimetricKernelsSatisfyWmpWithTwiceKappa) {
  gen::Rng rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = gen::random_quasimetric_kernel(rng, gen::uniform_int(rng, 3, 7));
    const auto q = quasimetric_constant(g);
    ASSERT_TRUE(q.is_quasimetric);
    EXPECT_TRUE(q.ptolemy_holds) << q.ptolemy_ratio << " vs " << 4 * q.kappa * q.kappa;
    EXPECT_LE(wmp_constant(g).constant_h, 2 * q.kappa * (1 + 1e-9));
  }
}

TEST(PrincipleProperties, ModifiedQuasimetricConstantAtMostFourKappaSquared) {
  gen::Rng rng(45);
  for (int trial = 0; trial < 60; ++trial) {
    const bool riesz = trial % 2 == 0;
    const std::size_t n = gen::uniform_int(rng, 3, 8);
    const auto g = riesz ? gen::random_riesz_like_kernel(rng, n) : gen::random_quasimetric_kernel(rng, n);
    const double kappa = quasimetric_constant(g).kappa;
    const std::size_t x0 = gen::uniform_int(rng, 0, n - 1);
    auto m = modifier(g, x0);
    for (std::size_t x = 0; x < n; ++x)
      if (std::isinf(g(x, x0))) m[x] = kInf;
    const auto k = modify_kernel(g, m);
    EXPECT_LE(quasimetric_constant(k.kernel).kappa, 4 * kappa * kappa * (1 + 1e-12));
  }
}

TEST(PrincipleProperties, CompleteMaximumPrincipleTransfersToModifiedKernel) {
  gen::Rng rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen::uniform_int(rng, 2, 5);
    const auto g = gen::random_symmetric_kernel(rng, n, 0.1, 2.0);
    const double h = complete_mp_constant(g).constant_h;
    ASSERT_TRUE(std::isfinite(h));
    for (std::size_t x0 = 0; x0 < n; ++x0) {
      const auto k = modify_kernel(g, modifier(g, x0));
      EXPECT_LE(wmp_constant(k.kernel).constant_h, h * (1 + 1e-9));
    }
  }
}
