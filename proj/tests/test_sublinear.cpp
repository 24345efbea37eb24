#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "subschur/gallery.hpp"
#include "subschur/sublinear.hpp"
#include "subschur/theorem_report.hpp"
#include "subschur/weak_type.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace subschur;
using oracle::grid_strong;
using oracle::grid_weak;

namespace {

SublinearProblem problem(const std::vector<std::vector<double>>& rows, std::vector<double> sigma, double q) {
  auto g = Kernel::from_rows(rows);
  return SublinearProblem(g, Measure(g.space_ptr(), std::move(sigma)), q);
}

SolveResult solve(const SublinearProblem& p) {
  const auto k = strong_type_constant(p, {.certify = false});
  const auto sup = gagliardo_supersolution(p, k.lower);
  EXPECT_EQ(sup.status, SolveStatus::Supersolution);
  return monotone_solution(p, sup.u);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Sublinear, RejectsExponentsOutsideTheSublinearRange) {
  EXPECT_THROW(strong_type_constant(problem({{1}}, {1}, 1.0)), DomainError);
  EXPECT_THROW(problem({{1}}, {1}, 0.0), DomainError);
  EXPECT_THROW(gagliardo_supersolution(problem({{1}}, {0}, 0.5), 1.0), DomainError);
}

TEST(Sublinear, ScalarClosedForms) {
  for (double q : {0.2, 0.5, 0.8}) {
    for (double g : {0.5, 1.0, 3.0}) {
      for (double s : {0.25, 1.0, 2.0}) {
        const auto p = problem({{g}}, {s}, q);
        const auto k = strong_type_constant(p);
        EXPECT_LT(rel(k.lower, g * std::pow(s, 1.0 / q)), 1e-12);
        ASSERT_TRUE(k.solution);
        EXPECT_EQ(k.solution->status, SolveStatus::Solution);
        EXPECT_LT(rel(k.solution->u[0], std::pow(g * s, 1.0 / (1.0 - q))), 1e-10);
        EXPECT_GE(k.upper, k.lower * (1 - 1e-12));
      }
    }
  }
}

TEST(Sublinear, ResidualIsRelativeAndScaleFree) {
  const auto p = problem({{0, 1}, {1, 0}}, {1, 1}, 0.5);
  EXPECT_EQ(fixed_point_residual(p, std::vector<double>{1, 1}), 0.0);
  EXPECT_NEAR(fixed_point_residual(p, std::vector<double>{4, 1}), 0.75, 1e-15);
  EXPECT_EQ(supersolution_defect(p, std::vector<double>{4, 4}), 0.0);
}

TEST(Sublinear, BlockClosedFormIsRecoveredByIteration) {
  for (double q : {0.3, 0.5, 0.75}) {
    for (auto variant : {BlockVariant::ZeroDiagonal, BlockVariant::StrictlyPositive}) {
      const auto ex = build_block({4, HarmonicRule{}, variant}, q);
      const SublinearProblem p(ex.kernel, ex.sigma, q);
      EXPECT_LT(fixed_point_residual(p, ex.u), 1e-12);
      const auto sol = solve(p);
      ASSERT_EQ(sol.status, SolveStatus::Solution);
      for (std::size_t i = 0; i < ex.u.size(); ++i) EXPECT_LT(rel(sol.u[i], ex.u[i]), 1e-9) << i;
    }
  }
}

TEST(Sublinear, MonotoneIterationDecreasesFromASupersolution) {
  gen::Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), 0.5);
    const auto k = strong_type_constant(p, {.certify = false});
    const auto sup = gagliardo_supersolution(p, k.lower);
    ASSERT_EQ(sup.status, SolveStatus::Supersolution);
    EXPECT_LE(supersolution_defect(p, sup.u), 1e-12);
    const auto sol = monotone_solution(p, sup.u);
    ASSERT_EQ(sol.status, SolveStatus::Solution);
    for (std::size_t i = 1; i < sol.history.size(); ++i) EXPECT_LE(sol.history[i], sol.history[i - 1] * (1 + 1e-12));
    for (std::size_t x = 0; x < 5; ++x) EXPECT_LE(sol.u[x], sup.u[x] * (1 + 1e-12));
  }
}

TEST(Sublinear, MonotoneRejectsNonSupersolutionStart) {
  const auto p = problem({{1, 1}, {1, 1}}, {1, 1}, 0.5);
  EXPECT_THROW(monotone_solution(p, std::vector<double>{0.1, 0.1}), PreconditionError);
}

TEST(Sublinear, ScaledPsiStillGivesSupersolution) {
  gen::Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 4);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), std::array{0.3, 0.5, 0.7}[t % 3]);
    const double kappa = strong_type_constant(p, {.certify = false}).lower;
    GagliardoOptions scaled;
    scaled.psi_scale = 2.0;
    const auto a = gagliardo_supersolution(p, kappa);
    const auto b = gagliardo_supersolution(p, kappa, scaled);
    ASSERT_EQ(b.status, SolveStatus::Supersolution);
    EXPECT_LE(supersolution_defect(p, b.u), 1e-12);
    // both starts descend to the same solution
    const auto ua = monotone_solution(p, a.u).u, ub = monotone_solution(p, b.u).u;
    for (std::size_t x = 0; x < ua.size(); ++x) EXPECT_LT(rel(ua[x], ub[x]), 1e-8);
  }
}

TEST(Sublinear, ScalingLaws) {
  gen::Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const double q = 0.4;
    const auto g = gen::random_symmetric_kernel(rng, 4);
    const auto sigma = gen::random_measure(rng, g.space_ptr());
    const SublinearProblem p(g, sigma, q);
    const double c = 2.5;
    std::vector<double> scaled(g.entries().begin(), g.entries().end());
    for (double& v : scaled) v *= c;
    const SublinearProblem pg(Kernel(g.space_ptr(), scaled), sigma, q);
    const SublinearProblem ps(g, sigma.scaled(c), q);
    const auto k = strong_type_constant(p, {.certify = false});
    EXPECT_LT(rel(strong_type_constant(pg, {.certify = false}).lower, c * k.lower), 1e-9);
    EXPECT_LT(rel(strong_type_constant(ps, {.certify = false}).lower, std::pow(c, 1.0 / q) * k.lower), 1e-9);
    const auto u = solve(p).u, ug = solve(pg).u, us = solve(ps).u;
    for (std::size_t x = 0; x < 4; ++x) {
      EXPECT_LT(rel(ug[x], std::pow(c, 1.0 / (1.0 - q)) * u[x]), 1e-9);
      EXPECT_LT(rel(us[x], std::pow(c, 1.0 / (1.0 - q)) * u[x]), 1e-9);
    }
  }
}

TEST(Sublinear, StrongConstantDominatesSimplexGrid) {
  gen::Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto g = gen::random_kernel(rng, 3, 0.3);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), gen::uniform(rng, 0.2, 0.9));
    const auto k = strong_type_constant(p, {.certify = false});
    const double grid = grid_strong(p, 200);
    EXPECT_GE(k.lower, grid * (1 - 1e-12));
    EXPECT_LE(k.lower, grid * 1.01);
    EXPECT_GE(k.gap_upper, k.lower);
    ASSERT_TRUE(k.witness);
    EXPECT_LT(rel(norm(potential(g, *k.witness), p.sigma, NormSpec::lp(p.q)), k.lower), 1e-12);
  }
}

TEST(Sublinear, InfiniteEntryOnSupportGivesInfiniteConstant) {
  const auto p = problem({{kInf, 1}, {1, 1}}, {1, 0}, 0.5);
  const auto k = strong_type_constant(p);
  EXPECT_TRUE(std::isinf(k.lower));
  EXPECT_TRUE(std::isinf(k.upper));
  const auto off = problem({{1, 1}, {1, kInf}}, {1, 0}, 0.5);
  EXPECT_TRUE(std::isfinite(strong_type_constant(off).lower));
}

TEST(Sublinear, SupersolutionBoundAndNormBoundOnWmpKernels) {
  gen::Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 6);
    const double q = std::array{0.3, 0.5, 0.7}[t % 3];
    const auto g = gen::random_quasimetric_kernel(rng, n);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), q);
    const auto k = strong_type_constant(p);
    ASSERT_TRUE(std::isfinite(k.lower));
    ASSERT_TRUE(k.solution);
    ASSERT_EQ(k.solution->status, SolveStatus::Solution) << t;
    EXPECT_GE(k.upper, k.lower * (1 - 1e-10)) << t;
    EXPECT_LE(k.solution->lq_norm, std::pow(k.gap_upper, 1.0 / (1.0 - q)) * (1 + 1e-8)) << t;
  }
}

TEST(Sublinear, DegenerateKernelHasVanishingSolution) {
  const auto p = problem({{1, 0}, {0, 0}}, {1, 1}, 0.5);
  const auto k = strong_type_constant(p);
  ASSERT_TRUE(k.solution);
  EXPECT_EQ(k.solution->status, SolveStatus::Degenerate);
  EXPECT_EQ(k.solution->u[1], 0.0);
  EXPECT_EQ(k.solution->vanishing, Subset{1});
  const auto kept = problem({{1}}, {1}, 0.5);
  EXPECT_EQ(strong_type_constant(kept).solution->status, SolveStatus::Solution);
}

TEST(Sublinear, EnergyEstimatesOnSymmetricKernels) {
  gen::Rng rng(99);
  for (int t = 0; t < 60; ++t) {
    const double q = std::array{0.3, 0.5, 0.6, 0.7}[t % 4];
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), q);
    const auto sol = solve(p);
    const auto e = energy_criteria(p, std::span<const double>(sol.u));
    ASSERT_TRUE(e.supersolution_estimate);
    EXPECT_EQ(e.below_threshold, q <= kGoldenThreshold);
    EXPECT_EQ(e.supersolution_estimate->constant, 1.0);
    EXPECT_TRUE(e.supersolution_estimate->holds) << e.supersolution_estimate->lhs << " " << e.supersolution_estimate->rhs;
  }
}

TEST(Sublinear, EnergyReportNormsAgreeWithDirectComputation) {
  const auto p = problem({{0, 1}, {1, 0}}, {1, 4}, 0.5);
  const auto e = energy_criteria(p);
  // G sigma = (4, 1), s = 1: int = 4*1 + 1*4.
  EXPECT_DOUBLE_EQ(e.energy_critical, 8.0);
  EXPECT_DOUBLE_EQ(e.energy_one_plus_q, std::pow(4.0, 1.5) + 4.0);
  const std::vector<double> s{0.5, 1.0, 2.0};
  const auto sweep = energy_sweep(p.kernel, p.sigma, s);
  EXPECT_DOUBLE_EQ(sweep[2].value, 16.0 + 4.0);
}

TEST(Sublinear, MaureyFunctionFromMaximizer) {
  gen::Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const double q = std::array{0.3, 0.5, 0.7}[t % 3];
    const auto g = gen::random_symmetric_kernel(rng, 4);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), q);
    const auto k = strong_type_constant(p);
    const auto f = maurey_from_maximizer(p, *k.witness);
    const auto c = maurey_energy_chain(p, f);
    EXPECT_NEAR(c.dual_value, 1.0, 1e-6);
    EXPECT_LT(rel(c.f_mass, std::pow(k.lower, q / (1.0 - q))), 1e-8);
    EXPECT_TRUE(c.holds);
  }
}

TEST(Sublinear, MaureyRejectsVanishingFunction) {
  const auto p = problem({{1, 1}, {1, 1}}, {1, 1}, 0.5);
  EXPECT_THROW(maurey_verify(p, std::vector<double>{1, 0}), DomainError);
  EXPECT_DOUBLE_EQ(maurey_verify(p, std::vector<double>{1, 1}), 2.0);
}

TEST(WeakType, CapacityRouteDominatesSimplexGrid) {
  gen::Rng rng(41);
  for (int t = 0; t < 25; ++t) {
    const auto g = gen::random_symmetric_kernel(rng, 3);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), 0.5);
    const auto w = weak_type_constant(p);
    const double grid = grid_weak(p, 200);
    EXPECT_GE(w.capacity_route, grid * (1 - 1e-9));
    EXPECT_LE(w.capacity_route, grid * 1.05);
    EXPECT_EQ(w.lower, w.capacity_route);
  }
}

TEST(WeakType, PointMassRouteIsOnlyALowerBoundAboveOne) {
  const auto p = problem({{1, 0.7}, {0.7, 1}}, {1, 1}, 2.0);
  const auto w = weak_type_constant(p);
  EXPECT_NEAR(w.point_mass_route, 1.0, 1e-12);
  EXPECT_EQ(w.lower, w.point_mass_route);
  // The midpoint measure already beats every point mass.
  const double mid = norm(std::vector<double>{0.85, 0.85}, p.sigma, NormSpec::weak(2.0));
  EXPECT_GT(mid, 1.19);
  EXPECT_GE(w.capacity_route, mid * (1 - 1e-9));
  EXPECT_GE(grid_weak(p, 400), mid * (1 - 1e-12));
}

TEST(WeakType, WeakConstantAtMostStrongConstant) {
  gen::Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto g = gen::random_kernel(rng, 4, 0.2);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), 0.6);
    EXPECT_LE(weak_type_constant(p).lower, strong_type_constant(p, {.certify = false}).gap_upper * (1 + 1e-9));
  }
}

TEST(WeakType, Cap1RouteWithinWmpConstant) {
  gen::Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), 0.5);
    WeakOptions o;
    o.with_cap1 = true;
    const auto w = weak_type_constant(p, o);
    const double h = wmp_constant(g).constant_h;
    EXPECT_LE(w.cap1_route, w.capacity_route * (1 + 1e-8));
    EXPECT_LE(w.capacity_route, h * w.cap1_route * (1 + 1e-8));
  }
}

TEST(WeakType, QuotientBoundedByWmpConstant) {
  gen::Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const auto omega = gen::random_measure(rng, g.space_ptr());
    const auto nu = gen::random_measure(rng, g.space_ptr());
    const auto r = weak_quotient_bound(g, omega, nu);
    EXPECT_TRUE(r.symmetric);
    EXPECT_LE(r.value, r.bound * (1 + 1e-9));
  }
}

TEST(WeakType, TestingConstantOfIdentity) {
  auto g = Kernel::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const Measure s(g.space_ptr(), {1, 2, 3});
  const auto c = testing_condition_11(g, s);
  // sigma(K)^{-1} sum_{x in K} sigma_x^2 is maximal at K = {3}.
  EXPECT_DOUBLE_EQ(c.lower, 3.0);
  EXPECT_NEAR(pp_operator_norm(g, s, 2.0).value, 3.0, 1e-12);
}

TEST(WeakType, TestingConstantBelowOperatorNorms) {
  gen::Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const auto s = gen::random_measure(rng, g.space_ptr());
    const auto c = testing_condition_11(g, s);
    for (double e : {1.5, 2.0, 3.0}) EXPECT_LE(c.lower, pp_operator_norm(g, s, e).value * (1 + 1e-9));
    ASSERT_TRUE(c.ball_constant);
    EXPECT_LE(*c.ball_constant, c.lower * (1 + 1e-12));
  }
}

TEST(WeakType, OperatorNormAtTwoMatchesSingularValue) {
  gen::Rng rng(37);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 5;
    const auto g = gen::random_kernel(rng, n, 0.2);
    const auto s = gen::random_measure(rng, g.space_ptr());
    Eigen::MatrixXd b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = std::sqrt(s[i]) * g(i, j) * std::sqrt(s[j]);
    const double sv = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
    const auto r = pp_operator_norm(g, s, 2.0);
    EXPECT_LT(rel(r.value, sv), 1e-9);
  }
}

TEST(WeakType, OperatorNormInfiniteEntry) {
  auto g = Kernel::from_rows({{kInf, 1}, {1, 1}});
  EXPECT_TRUE(std::isinf(pp_operator_norm(g, Measure(g.space_ptr(), {1, 1}), 2.0).value));
}

TEST(TheoremReport, BlockExampleConfirmsEveryApplicableRow) {
  const auto p = problem({{1, 0.5}, {0.5, 1}}, {1, 1}, 0.5);
  const auto rep = theorem_report(p);
  for (const auto& r : rep.rows) EXPECT_EQ(r.verdict, Verdict::Confirmed) << r.id << ": " << r.detail;
  ASSERT_NE(rep.row("degenerate_dichotomy"), nullptr);
}

TEST(TheoremReport, DegenerateKernelCitesNoPositiveSolution) {
  const auto p = problem({{1, 0}, {0, 0}}, {1, 1}, 0.5);
  const auto rep = theorem_report(p);
  EXPECT_EQ(rep.row("hypothesis_non_degenerate")->verdict, Verdict::Violated);
  EXPECT_EQ(rep.row("degenerate_dichotomy")->verdict, Verdict::Confirmed);
  EXPECT_EQ(rep.row("supersolution_implies_solution")->verdict, Verdict::NotApplicable);
}

TEST(TheoremReport, ColumnDegenerateButNotQuasiSymmetric) {
  // A zero column with a positive solution (1, 1): the dichotomy needs quasi-symmetry.
  const auto p = problem({{1, 0}, {1, 0}}, {1, 1}, 0.5);
  EXPECT_LT(fixed_point_residual(p, std::vector<double>{1, 1}), 1e-15);
  const auto rep = theorem_report(p);
  EXPECT_EQ(rep.row("hypothesis_quasi_symmetric")->verdict, Verdict::Violated);
  EXPECT_EQ(rep.row("degenerate_dichotomy")->verdict, Verdict::NotApplicable);
}

TEST(TheoremReport, SuperlinearExponentSkipsStrongRows) {
  const auto p = problem({{1, 0.5}, {0.5, 1}}, {1, 1}, 2.0);
  const auto rep = theorem_report(p);
  EXPECT_EQ(rep.row("strong_implies_supersolution")->verdict, Verdict::NotApplicable);
  EXPECT_EQ(rep.row("point_mass_route")->verdict, Verdict::Confirmed);
  EXPECT_EQ(rep.row("modified_kernel_solution"), nullptr);
}

TEST(TheoremReport, RandomWmpKernelsHaveNoViolations) {
  gen::Rng rng(55);
  for (int t = 0; t < 15; ++t) {
    const auto g = gen::random_quasimetric_kernel(rng, 5);
    const SublinearProblem p(g, gen::random_measure(rng, g.space_ptr()), std::array{0.3, 0.5, 0.7}[t % 3]);
    const auto rep = theorem_report(p);
    for (const auto& r : rep.rows) EXPECT_NE(r.verdict, Verdict::Violated) << t << " " << r.id << ": " << r.detail;
  }
}
