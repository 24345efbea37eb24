#pragma once

// L^p, Lorentz L^{s,q} and weak L^{s,inf} (quasi-)norms on a finite measure
// space.
//
// Lorentz norms use the plain rearrangement integral
//   ||f||_{s,q} = ( int_0^inf [t^{1/s} f*(t)]^q dt/t )^{1/q},
// without the customary (q/s)^{1/q} factor, so that L^{s,s} = L^s exactly.
// The integral is evaluated in closed form on each constancy interval of f*.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "subschur/core.hpp"

namespace subschur {

struct NormSpec {
  enum class Kind { Lp, Lorentz, WeakLorentz };
  Kind kind = Kind::Lp;
  double s = 1.0;  ///< p for Lp, s for the Lorentz families
  double q = 1.0;  ///< second Lorentz index; unused otherwise

  static NormSpec lp(double p) { return checked({Kind::Lp, p, 1.0}); }
  static NormSpec lorentz(double s, double q) { return checked({Kind::Lorentz, s, q}); }
  static NormSpec weak(double s) { return checked({Kind::WeakLorentz, s, 1.0}); }

 private:
  static NormSpec checked(NormSpec n) {
    if (!(n.s > 0.0) || !(n.q > 0.0) || std::isinf(n.s) || std::isinf(n.q))
      throw DomainError("norm exponents must be positive and finite");
    return n;
  }
};

namespace detail {

struct Atom {
  double value;
  double mass;
};

/// Values of f on positive-mass points, decreasing; ties keep point order.
inline std::vector<Atom> decreasing_atoms(std::span<const double> f, std::span<const double> w) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (w[i] > 0.0) atoms.push_back({f[i], w[i]});
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value > b.value; });
  return atoms;
}

inline double lp_norm(std::span<const double> f, std::span<const double> w, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (w[i] == 0.0 || f[i] == 0.0) continue;
    if (std::isinf(f[i])) return kInf;
    acc += std::pow(f[i], p) * w[i];
  }
  return std::pow(acc, 1.0 / p);
}

inline double weak_norm(std::span<const double> f, std::span<const double> w, double s) {
  const auto atoms = decreasing_atoms(f, w);
  double best = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    mass += atoms[k].mass;
    // only the last atom of a run of equal values carries the full level-set mass
    if (k + 1 < atoms.size() && atoms[k + 1].value == atoms[k].value) continue;
    if (atoms[k].value == 0.0) break;
    if (std::isinf(atoms[k].value)) return kInf;
    best = std::max(best, atoms[k].value * std::pow(mass, 1.0 / s));
  }
  return best;
}

inline double lorentz_norm(std::span<const double> f, std::span<const double> w, double s, double q) {
  const auto atoms = decreasing_atoms(f, w);
  const double e = q / s;
  double acc = 0.0, t0 = 0.0;
  for (const auto& a : atoms) {
    const double t1 = t0 + a.mass;
    if (a.value > 0.0) {
      if (std::isinf(a.value)) return kInf;
      acc += std::pow(a.value, q) * (std::pow(t1, e) - std::pow(t0, e)) / e;
    }
    t0 = t1;
  }
  return std::pow(acc, 1.0 / q);
}

}  // namespace detail

/// Norm of a nonnegative extended-real function f with respect to sigma.
inline double norm(std::span<const double> f, const Measure& sigma, const NormSpec& spec) {
  if (f.size() != sigma.size()) throw StructuralError("function length differs from measure length");
  for (double v : f) detail::check_extended_nonnegative(v, "function value");
  switch (spec.kind) {
    case NormSpec::Kind::Lp:
      return detail::lp_norm(f, sigma.weights(), spec.s);
    case NormSpec::Kind::WeakLorentz:
      return detail::weak_norm(f, sigma.weights(), spec.s);
    case NormSpec::Kind::Lorentz:
      return detail::lorentz_norm(f, sigma.weights(), spec.s, spec.q);
  }
  return 0.0;
}

/// int f^s dsigma with 0*inf = 0.
inline double power_integral(std::span<const double> f, const Measure& sigma, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (sigma[i] == 0.0 || f[i] == 0.0) continue;
    if (std::isinf(f[i])) return kInf;
    acc += std::pow(f[i], s) * sigma[i];
  }
  return acc;
}

}  // namespace subschur
