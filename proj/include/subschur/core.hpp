#pragma once

// Finite measure spaces, extended-real kernels and the potential calculus
// built on top of them.
//
// Extended reals are stored as double with +inf allowed. Products follow the
// measure-theoretic convention 0 * (+inf) = 0; sums follow x + inf = inf.
// NaN and negative values are rejected wherever data enters the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subschur/error.hpp"

namespace subschur {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 0 * inf = 0, otherwise the ordinary product.
inline double ext_mul(double a, double b) noexcept {
  return (a == 0.0 || b == 0.0) ? 0.0 : a * b;
}

/// 1/0 = inf and 1/inf = 0.
inline double ext_reciprocal(double a) noexcept {
  if (a == 0.0) return kInf;
  if (std::isinf(a)) return 0.0;
  return 1.0 / a;
}

/// Index list of a subset of a space. Kept sorted and duplicate-free by the
/// helpers that build one.
using Subset = std::vector<std::size_t>;

/// Finite ground set with optional coordinates.
class Space {
 public:
  explicit Space(std::vector<std::string> points,
                 std::optional<std::vector<std::vector<double>>> coords = std::nullopt)
      : points_(std::move(points)), coords_(std::move(coords)) {
    std::unordered_set<std::string> seen;
    for (const auto& p : points_) {
      if (!seen.insert(p).second) throw StructuralError("duplicate point identifier '" + p + "'");
    }
    if (coords_) {
      if (coords_->size() != points_.size())
        throw StructuralError("coordinate list length differs from point count");
      if (!coords_->empty()) {
        const std::size_t dim = coords_->front().size();
        if (dim == 0) throw StructuralError("coordinates must have dimension >= 1");
        for (const auto& c : *coords_) {
          if (c.size() != dim) throw StructuralError("coordinates of mixed dimension");
          for (double v : c)
            if (!std::isfinite(v)) throw DomainError("coordinates must be finite");
        }
      }
    }
  }

  /// Points labelled x1..xn.
  static std::shared_ptr<const Space> indexed(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i + 1));
    return std::make_shared<const Space>(std::move(ids));
  }

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<std::string>& points() const noexcept { return points_; }
  const std::optional<std::vector<std::vector<double>>>& coords() const noexcept { return coords_; }

  /// The sub-space on the given (ordered) indices, coordinates carried along.
  std::shared_ptr<const Space> subspace(std::span<const std::size_t> idx) const {
    std::vector<std::string> ids;
    std::optional<std::vector<std::vector<double>>> c;
    if (coords_) c.emplace();
    for (std::size_t i : idx) {
      if (i >= size()) throw StructuralError("subspace index out of range");
      ids.push_back(points_[i]);
      if (coords_) c->push_back((*coords_)[i]);
    }
    return std::make_shared<const Space>(std::move(ids), std::move(c));
  }

  bool same_points(const Space& other) const noexcept { return points_ == other.points_; }

 private:
  std::vector<std::string> points_;
  std::optional<std::vector<std::vector<double>>> coords_;
};

using SpacePtr = std::shared_ptr<const Space>;

namespace detail {

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return;
  if (!a || !b || !a->same_points(*b)) throw StructuralError("operands live on different spaces");
}

inline void check_extended_nonnegative(double v, const char* what) {
  if (std::isnan(v) || v < 0.0) throw DomainError(std::string(what) + " must be nonnegative and not NaN");
}

}  // namespace detail

/// Nonnegative finite weights, one per point.
class Measure {
 public:
  Measure(SpacePtr space, std::vector<double> weights) : space_(std::move(space)), w_(std::move(weights)) {
    if (!space_) throw StructuralError("measure without a space");
    if (w_.size() != space_->size()) throw StructuralError("measure length differs from space size");
    for (double v : w_) {
      detail::check_extended_nonnegative(v, "measure weight");
      if (std::isinf(v)) throw DomainError("measure weights must be finite");
    }
  }

  static Measure zero(SpacePtr space) {
    const std::size_t n = space->size();
    return Measure(std::move(space), std::vector<double>(n, 0.0));
  }

  static Measure dirac(SpacePtr space, std::size_t x, double mass = 1.0) {
    std::vector<double> w(space->size(), 0.0);
    if (x >= w.size()) throw StructuralError("dirac point out of range");
    w[x] = mass;
    return Measure(std::move(space), std::move(w));
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> weights() const noexcept { return w_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const Space& space() const noexcept { return *space_; }

  double total() const noexcept { return std::accumulate(w_.begin(), w_.end(), 0.0); }

  double mass_of(std::span<const std::size_t> set) const {
    double m = 0.0;
    for (std::size_t i : set) m += w_.at(i);
    return m;
  }

  Subset support() const {
    Subset s;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] > 0.0) s.push_back(i);
    return s;
  }

  bool is_zero() const noexcept {
    return std::all_of(w_.begin(), w_.end(), [](double v) { return v == 0.0; });
  }

  /// Restriction to a set, as a measure on the same space.
  Measure restricted_to(std::span<const std::size_t> set) const {
    std::vector<double> w(w_.size(), 0.0);
    for (std::size_t i : set) w.at(i) = w_[i];
    return Measure(space_, std::move(w));
  }

  Measure scaled(double t) const {
    std::vector<double> w(w_);
    for (double& v : w) v *= t;
    return Measure(space_, std::move(w));
  }

  /// The measure carried over to a sub-space built from `idx`.
  Measure on_subspace(SpacePtr sub, std::span<const std::size_t> idx) const {
    std::vector<double> w;
    w.reserve(idx.size());
    for (std::size_t i : idx) w.push_back(w_.at(i));
    return Measure(std::move(sub), std::move(w));
  }

 private:
  SpacePtr space_;
  std::vector<double> w_;
};

/// Dense kernel G(x, y) with values in [0, +inf], row-major.
class Kernel {
 public:
  Kernel(SpacePtr space, std::vector<double> entries) : space_(std::move(space)), g_(std::move(entries)) {
    if (!space_) throw StructuralError("kernel without a space");
    n_ = space_->size();
    if (g_.size() != n_ * n_) throw StructuralError("kernel entry count is not n*n");
    for (double v : g_) detail::check_extended_nonnegative(v, "kernel entry");
  }

  static Kernel from_rows(const std::vector<std::vector<double>>& rows) {
    return from_rows(Space::indexed(rows.size()), rows);
  }

  static Kernel from_rows(SpacePtr space, const std::vector<std::vector<double>>& rows) {
    std::vector<double> e;
    e.reserve(rows.size() * rows.size());
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw StructuralError("kernel matrix is not square");
      e.insert(e.end(), r.begin(), r.end());
    }
    return Kernel(std::move(space), std::move(e));
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t x, std::size_t y) const noexcept { return g_[x * n_ + y]; }
  std::span<const double> row(std::size_t x) const noexcept { return {g_.data() + x * n_, n_}; }
  std::span<const double> entries() const noexcept { return g_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const Space& space() const noexcept { return *space_; }

  bool is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool has_infinite_entry() const noexcept {
    return std::any_of(g_.begin(), g_.end(), [](double v) { return std::isinf(v); });
  }

  Kernel transposed() const {
    std::vector<double> t(g_.size());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t[j * n_ + i] = g_[i * n_ + j];
    return Kernel(space_, std::move(t));
  }

  /// Principal restriction to `idx`, living on the corresponding sub-space.
  Kernel restricted(std::span<const std::size_t> idx) const {
    std::vector<double> e;
    e.reserve(idx.size() * idx.size());
    for (std::size_t i : idx)
      for (std::size_t j : idx) e.push_back((*this)(i, j));
    return Kernel(space_->subspace(idx), std::move(e));
  }

 private:
  SpacePtr space_;
  std::size_t n_ = 0;
  std::vector<double> g_;
};

namespace detail {

/// out[x] = sum_y G(x,y) w[y] with 0*inf = 0.
inline void apply(const Kernel& g, std::span<const double> w, std::span<double> out) {
  const std::size_t n = g.size();
  for (std::size_t x = 0; x < n; ++x) {
    const auto r = g.row(x);
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) s += ext_mul(r[y], w[y]);
    out[x] = s;
  }
}

/// out[y] = sum_x G(x,y) w[x].
inline void apply_adjoint(const Kernel& g, std::span<const double> w, std::span<double> out) {
  const std::size_t n = g.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    if (w[x] == 0.0) continue;
    const auto r = g.row(x);
    for (std::size_t y = 0; y < n; ++y) out[y] += ext_mul(r[y], w[x]);
  }
}

inline std::vector<double> apply(const Kernel& g, std::span<const double> w) {
  std::vector<double> out(g.size());
  apply(g, w, out);
  return out;
}

}  // namespace detail

/// Potential G nu(x) = sum_y G(x,y) nu(y).
inline std::vector<double> potential(const Kernel& g, const Measure& nu) {
  detail::require_same_space(g.space_ptr(), nu.space_ptr());
  return detail::apply(g, nu.weights());
}

/// Potential with the adjoint kernel, G* mu(y) = sum_x G(x,y) mu(x).
inline std::vector<double> adjoint_potential(const Kernel& g, const Measure& mu) {
  detail::require_same_space(g.space_ptr(), mu.space_ptr());
  std::vector<double> out(g.size());
  detail::apply_adjoint(g, mu.weights(), out);
  return out;
}

/// Energy E(lambda) = sum_x G lambda(x) lambda(x).
inline double energy(const Kernel& g, const Measure& lambda) {
  const auto p = potential(g, lambda);
  double e = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) e += ext_mul(p[x], lambda[x]);
  return e;
}

/// Smallest a in [1, inf] with a^{-1} G(y,x) <= G(x,y) <= a G(y,x).
inline double check_quasisymmetric(const Kernel& g) {
  double a = 1.0;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = g(i, j), v = g(j, i);
      if (u == v) continue;
      if (u == 0.0 || v == 0.0 || std::isinf(u) || std::isinf(v)) return kInf;
      a = std::max(a, std::max(u / v, v / u));
    }
  }
  return a;
}

/// G^s(x,y) = G(x,y) + G(y,x).
inline Kernel symmetrize(const Kernel& g) {
  const std::size_t n = g.size();
  std::vector<double> s(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i * n + j] = g(i, j) + g(j, i);
  return Kernel(g.space_ptr(), std::move(s));
}

struct NondegeneracyReport {
  bool nondegenerate = true;
  /// Points of supp(sigma) whose column vanishes on supp(sigma).
  Subset witness;
};

/// Degeneracy: a positive-sigma set A with G(., y) = 0 sigma-a.e. for y in A.
inline NondegeneracyReport check_nondegenerate(const Kernel& g, const Measure& sigma) {
  detail::require_same_space(g.space_ptr(), sigma.space_ptr());
  const Subset supp = sigma.support();
  NondegeneracyReport r;
  for (std::size_t y : supp) {
    const bool vanishes = std::all_of(supp.begin(), supp.end(), [&](std::size_t x) { return g(x, y) == 0.0; });
    if (vanishes) r.witness.push_back(y);
  }
  r.nondegenerate = r.witness.empty();
  return r;
}

/// All indices 0..n-1.
inline Subset whole(std::size_t n) {
  Subset s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

/// Members of a bitmask as a subset.
inline Subset subset_from_mask(std::uint64_t mask, std::size_t n) {
  Subset s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) s.push_back(i);
  return s;
}

}  // namespace subschur
