#pragma once

// Seeded random instance families shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "subschur/core.hpp"

namespace subschur::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<double> random_weights(Rng& rng, std::size_t n, double lo = 0.1, double hi = 2.0) {
  std::vector<double> w(n);
  for (double& v : w) v = uniform(rng, lo, hi);
  return w;
}

inline Measure random_measure(Rng& rng, const SpacePtr& space, double lo = 0.1, double hi = 2.0) {
  return Measure(space, random_weights(rng, space->size(), lo, hi));
}

/// Nonnegative kernel with a share of exact zeros and no infinite entries.
inline Kernel random_kernel(Rng& rng, std::size_t n, double zero_share = 0.2) {
  std::vector<double> e(n * n);
  for (double& v : e) v = uniform(rng, 0.0, 1.0) < zero_share ? 0.0 : uniform(rng, 0.05, 3.0);
  return Kernel(Space::indexed(n), std::move(e));
}

inline Kernel random_symmetric_kernel(Rng& rng, std::size_t n, double lo = 0.05, double hi = 2.0) {
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) e[i * n + j] = e[j * n + i] = uniform(rng, lo, hi);
  return Kernel(Space::indexed(n), std::move(e));
}

/// Gram matrix B B^T of a random n x r factor; symmetric positive semidefinite.
inline Kernel random_gram_kernel(Rng& rng, std::size_t n, std::size_t rank) {
  std::vector<double> b(n * rank);
  for (double& v : b) v = uniform(rng, 0.0, 1.0);
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < rank; ++k) e[i * n + j] += b[i * rank + k] * b[j * rank + k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e[j * n + i] = e[i * n + j];
  return Kernel(Space::indexed(n), std::move(e));
}

/// Shortest-path metric of a random connected weighted graph.
inline std::vector<double> random_graph_metric(Rng& rng, std::size_t n) {
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  auto link = [&](std::size_t i, std::size_t j) {
    const double w = uniform(rng, 0.2, 2.0);
    d[i * n + j] = std::min(d[i * n + j], w);
    d[j * n + i] = d[i * n + j];
  };
  for (std::size_t i = 1; i < n; ++i) link(i, uniform_int(rng, 0, i - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform(rng, 0.0, 1.0) < 0.4) link(i, j);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  return d;
}

/// G = 1 / (d + eps)^p for a graph metric d, p in [1, 2]. The shift keeps the
/// diagonal finite so the maximum-principle problems are not vacuous.
inline Kernel random_quasimetric_kernel(Rng& rng, std::size_t n, double eps = 0.1) {
  const auto d = random_graph_metric(rng, n);
  const double p = uniform(rng, 1.0, 2.0);
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n * n; ++i) e[i] = 1.0 / std::pow(d[i] + eps, p);
  return Kernel(Space::indexed(n), std::move(e));
}

/// Same family with G = 1/d^p, diagonal +inf.
inline Kernel random_riesz_like_kernel(Rng& rng, std::size_t n) {
  const auto d = random_graph_metric(rng, n);
  const double p = uniform(rng, 1.0, 2.0);
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n * n; ++i) e[i] = d[i] == 0.0 ? kInf : 1.0 / std::pow(d[i], p);
  return Kernel(Space::indexed(n), std::move(e));
}

}  // namespace subschur::gen
