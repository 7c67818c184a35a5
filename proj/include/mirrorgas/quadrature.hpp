#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mirrorgas/angles.hpp"

namespace mirrorgas {

struct GaussRule {
  std::vector<double> nodes;    // on (0, 1)
  std::vector<double> weights;  // sum to 1
};

namespace detail {

/// (P_m(x), P_m'(x)) by the three-term recurrence.
inline std::pair<double, double> legendre(std::size_t m, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= m; ++k) {
    const double kd = static_cast<double>(k);
    const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
    p0 = p1;
    p1 = p2;
  }
  return {p1, static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

/// m-point Gauss–Legendre rule transported to (0, 1), nodes by Newton
/// iteration.
inline GaussRule gauss_legendre(std::size_t m) {
  if (m == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussRule r{std::vector<double>(m), std::vector<double>(m)};
  const double md = static_cast<double>(m);
  for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (md + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = detail::legendre(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[m - 1 - i] = 0.5 * w;
  }
  return r;
}

/// Sigmoidal change of variables on (0, 1): u ↦ u^p / (u^p + (1−u)^p).
/// Its derivative vanishes to order p − 1 at both ends, which flattens
/// algebraic endpoint singularities of the integrand.
struct SigmoidalMap {
  int p = 3;

  double operator()(double u) const {
    const double a = std::pow(u, p), b = std::pow(1.0 - u, p);
    return a / (a + b);
  }
  double derivative(double u) const {
    const double a = std::pow(u, p), b = std::pow(1.0 - u, p);
    const double s = a + b;
    return p * std::pow(u, p - 1) * std::pow(1.0 - u, p - 1) / (s * s);
  }
};

/// Nodes and weights for ∫_a^b with the sigmoidal map applied.
struct MappedRule {
  std::vector<double> x;
  std::vector<double> w;  // for the unit interval; multiply by (b − a)
};

inline MappedRule mapped_rule(std::size_t m, SigmoidalMap map = {}) {
  const GaussRule g = gauss_legendre(m);
  MappedRule r{std::vector<double>(m), std::vector<double>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    r.x[i] = map(g.nodes[i]);
    r.w[i] = g.weights[i] * map.derivative(g.nodes[i]);
  }
  return r;
}

}  // namespace mirrorgas
