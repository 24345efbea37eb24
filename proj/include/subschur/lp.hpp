#pragma once

// Dense two-phase primal simplex with Bland's anti-cycling rule.
//
// Problems are stated as
//     maximize  c^T x   subject to  A_i x (<=|=|>=) b_i,  x >= 0,
// with finite data. Dual multipliers are read off the final tableau, so every
// optimal answer comes with a dual certificate y satisfying b^T y = c^T x.
// Sign convention for y (maximization): y_i >= 0 for <= rows, y_i <= 0 for
// >= rows, free for equality rows, and A^T y >= c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "subschur/error.hpp"

namespace subschur {

enum class Sense { Le, Eq, Ge };

struct LpProblem {
  std::vector<double> objective;         ///< c, one entry per variable
  std::vector<std::vector<double>> rows; ///< constraint matrix A, row-major
  std::vector<Sense> senses;
  std::vector<double> rhs;               ///< b

  std::size_t num_vars() const noexcept { return objective.size(); }
  std::size_t num_rows() const noexcept { return rows.size(); }

  void add_row(std::vector<double> row, Sense s, double b) {
    rows.push_back(std::move(row));
    senses.push_back(s);
    rhs.push_back(b);
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;          ///< +inf when unbounded, -inf when infeasible
  std::vector<double> primal;  ///< x at optimum (or the feasible base point of a ray)
  std::vector<double> dual;    ///< y at optimum; phase-one multipliers when infeasible
  std::vector<double> ray;     ///< improving direction when unbounded
  std::size_t iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 100000;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double rhs(std::size_t r) const { return at(r, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
};

enum class PhaseResult { Optimal, Unbounded };

/// Maximizes cost^T x over the current tableau with Bland's rule. Columns with
/// allowed[c] == false never enter.
inline PhaseResult run_phase(Tableau& t, std::vector<std::size_t>& basis, const std::vector<double>& cost,
                             const std::vector<bool>& allowed, const LpOptions& opt, std::size_t& iterations,
                             std::size_t& unbounded_col) {
  const std::size_t m = t.rows(), n = t.cols();
  std::vector<double> reduced(n);
  for (;;) {
    if (iterations >= opt.max_iterations)
      throw SolverError("simplex iteration cap reached (" + std::to_string(opt.max_iterations) + ")");
    // reduced cost d_j = c_j - c_B^T B^{-1} A_j
    std::size_t enter = n;
    for (std::size_t c = 0; c < n && enter == n; ++c) {
      if (!allowed[c]) continue;
      double z = 0.0;
      for (std::size_t r = 0; r < m; ++r) z += cost[basis[r]] * t.at(r, c);
      reduced[c] = cost[c] - z;
      if (reduced[c] > opt.tolerance) enter = c;
    }
    if (enter == n) return PhaseResult::Optimal;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.tolerance) continue;
      const double ratio = t.rhs(r) / a;
      if (ratio < best - opt.tolerance ||
          (ratio <= best + opt.tolerance && leave < m && basis[r] < basis[leave])) {
        if (ratio < best) best = ratio;
        leave = r;
      }
    }
    if (leave == m) {
      unbounded_col = enter;
      return PhaseResult::Unbounded;
    }
    t.pivot(leave, enter);
    basis[leave] = enter;
    ++iterations;
  }
}

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {}) {
  const std::size_t m = p.num_rows(), nv = p.num_vars();
  if (p.senses.size() != m || p.rhs.size() != m) throw StructuralError("LP row metadata length mismatch");
  for (const auto& r : p.rows)
    if (r.size() != nv) throw StructuralError("LP constraint row has wrong length");
  auto finite = [](double v) { return std::isfinite(v); };
  for (double v : p.objective)
    if (!finite(v)) throw DomainError("LP objective must be finite");
  for (std::size_t i = 0; i < m; ++i) {
    if (!finite(p.rhs[i])) throw DomainError("LP right-hand side must be finite");
    for (double v : p.rows[i])
      if (!finite(v)) throw DomainError("LP constraint matrix must be finite");
  }

  // Normalize to b >= 0 and lay out columns: originals, then one slack or
  // surplus per inequality, then one artificial per >= or = row.
  std::vector<Sense> sense(p.senses);
  std::vector<bool> flipped(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (p.rhs[i] < 0.0) {
      flipped[i] = true;
      if (sense[i] == Sense::Le) sense[i] = Sense::Ge;
      else if (sense[i] == Sense::Ge) sense[i] = Sense::Le;
    }
  }
  std::size_t n_slack = 0, n_art = 0;
  for (Sense s : sense) {
    if (s != Sense::Eq) ++n_slack;
    if (s != Sense::Le) ++n_art;
  }
  const std::size_t ncols = nv + n_slack + n_art;
  const std::size_t art_begin = nv + n_slack;
  detail::Tableau t(m, ncols);
  std::vector<std::size_t> basis(m), unit_col(m);
  std::size_t next_slack = nv, next_art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const double sgn = flipped[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) t.at(i, j) = sgn * p.rows[i][j];
    t.rhs(i) = sgn * p.rhs[i];
    if (sense[i] == Sense::Le) {
      t.at(i, next_slack) = 1.0;
      basis[i] = unit_col[i] = next_slack++;
    } else {
      if (sense[i] == Sense::Ge) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      basis[i] = unit_col[i] = next_art++;
    }
  }

  LpSolution sol;
  std::size_t unbounded_col = ncols;

  if (n_art > 0) {
    std::vector<double> cost1(ncols, 0.0);
    for (std::size_t c = art_begin; c < ncols; ++c) cost1[c] = -1.0;
    std::vector<bool> allowed(ncols, true);
    detail::run_phase(t, basis, cost1, allowed, opt, sol.iterations, unbounded_col);
    double infeas = 0.0;
    for (std::size_t r = 0; r < m; ++r)
      if (basis[r] >= art_begin) infeas += t.rhs(r);
    const double scale = 1.0 + [&] {
      double s = 0.0;
      for (double b : p.rhs) s = std::max(s, std::abs(b));
      return s;
    }();
    if (infeas > opt.tolerance * scale) {
      sol.status = LpStatus::Infeasible;
      sol.value = -std::numeric_limits<double>::infinity();
      sol.dual.assign(m, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        double y = 0.0;
        for (std::size_t r = 0; r < m; ++r) y += cost1[basis[r]] * t.at(r, unit_col[i]);
        sol.dual[i] = flipped[i] ? -y : y;
      }
      return sol;
    }
    // Drive zero-level artificials out of the basis where a pivot exists.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(t.at(r, c)) > opt.tolerance) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  std::vector<double> cost2(ncols, 0.0);
  for (std::size_t j = 0; j < nv; ++j) cost2[j] = p.objective[j];
  std::vector<bool> allowed(ncols, true);
  for (std::size_t c = art_begin; c < ncols; ++c) allowed[c] = false;
  const auto phase = detail::run_phase(t, basis, cost2, allowed, opt, sol.iterations, unbounded_col);

  sol.primal.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < nv) sol.primal[basis[r]] = std::max(0.0, t.rhs(r));

  if (phase == detail::PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    sol.value = std::numeric_limits<double>::infinity();
    sol.ray.assign(nv, 0.0);
    if (unbounded_col < nv) sol.ray[unbounded_col] = 1.0;
    for (std::size_t r = 0; r < m; ++r)
      if (basis[r] < nv) sol.ray[basis[r]] = -t.at(r, unbounded_col);
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.value = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.value += p.objective[j] * sol.primal[j];
  sol.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double y = 0.0;
    for (std::size_t r = 0; r < m; ++r) y += cost2[basis[r]] * t.at(r, unit_col[i]);
    sol.dual[i] = flipped[i] ? -y : y;
  }
  return sol;
}

/// b^T y for a dual vector of `p`.
inline double dual_objective(const LpProblem& p, const std::vector<double>& y) {
  double v = 0.0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) v += p.rhs[i] * y[i];
  return v;
}

}  // namespace subschur
