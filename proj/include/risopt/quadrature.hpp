// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "risopt/constants.hpp"
#include "risopt/errors.hpp"

namespace risopt {

/// Controls for the node-doubling Gauss-Legendre scheme.
struct QuadratureOptions {
  int initial_nodes = 64;
  int max_nodes = 1024;
  double rel_tol = 1e-9;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

namespace detail {

/// Nodes/weights by Newton iteration on the Legendre polynomial.
inline GaussLegendreRule compute_gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

/// Cached Gauss-Legendre rule for n nodes. Thread-safe.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  }
  return it->second;
}

/// Fixed n-node Gauss-Legendre integral of f over [a, b].
template <class F>
std::complex<double> integrate_gl(F&& f, double a, double b, int n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

struct QuadratureResult {
  std::complex<double> value;
  int nodes_used = 0;       // per-segment node count at convergence
  double rel_change = 0.0;  // |I_2n - I_n| / |I_2n| at convergence
};

/// Node-doubling Gauss-Legendre integration over the given segments.
///
/// Each segment is integrated with the same node count; the count doubles
/// until the total changes by less than opts.rel_tol relative, or the cap
/// is hit (QuadratureError carrying the last relative change).
template <class F>
QuadratureResult integrate_adaptive(F&& f,
                                    const std::vector<std::pair<double, double>>& segments,
                                    const QuadratureOptions& opts = {}) {
  auto eval = [&](int nodes) {
    std::complex<double> total = 0.0;
    for (const auto& [a, b] : segments) total += integrate_gl(f, a, b, nodes);
    return total;
  };
  int n = opts.initial_nodes;
  std::complex<double> prev = eval(n);
  double change = std::numeric_limits<double>::infinity();
  while (2 * n <= opts.max_nodes) {
    n *= 2;
    const std::complex<double> next = eval(n);
    change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
    if (change <= opts.rel_tol) {
      return {next, n, change};
    }
    prev = next;
  }
  throw QuadratureError("quadrature did not converge within node cap", change);
}

}  // namespace risopt
