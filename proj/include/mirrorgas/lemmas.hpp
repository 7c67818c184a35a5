#pragma once

// Direct numerical checks of the auxiliary inequalities and identities used in
// the Laplace analysis. Both sides are always evaluated independently.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace mirrorgas {

struct BoundPair {
  double lhs;
  double rhs;
};

/// |cos(x/2)| and exp(−x²/8 + x⁴/96).
inline BoundPair lemma_cos_bound(double x) {
  return {std::abs(std::cos(0.5 * x)), std::exp(-x * x / 8.0 + x * x * x * x / 96.0)};
}

struct PowerSumCheck {
  double quad_lhs = 0.0;     // Σ_{j<k} (x_j + x_k)²
  double quad_rhs = 0.0;     // (ℓ − 2) Σ x_j²
  double quartic_lhs = 0.0;  // Σ_{j<k} (x_j + x_k)⁴
  double quartic_rhs = 0.0;  // 8(ℓ − 1) Σ x_j⁴
  bool quad_ok = false;
  bool quartic_ok = false;
};

inline PowerSumCheck power_sum_inequalities(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("power_sum_inequalities: empty vector");
  PowerSumCheck c;
  const double l = static_cast<double>(xs.size());
  double s2 = 0.0, s4 = 0.0;
  for (double x : xs) {
    s2 += x * x;
    s4 += x * x * x * x;
  }
  for (std::size_t j = 0; j < xs.size(); ++j) {
    for (std::size_t k = j + 1; k < xs.size(); ++k) {
      const double s = xs[j] + xs[k];
      c.quad_lhs += s * s;
      c.quartic_lhs += s * s * s * s;
    }
  }
  c.quad_rhs = (l - 2.0) * s2;
  c.quartic_rhs = 8.0 * (l - 1.0) * s4;
  // rounding slack proportional to the magnitudes involved
  const double slack = 1e-12;
  c.quad_ok = c.quad_lhs >= c.quad_rhs - slack * (c.quad_lhs + std::abs(c.quad_rhs));
  c.quartic_ok = c.quartic_lhs <= c.quartic_rhs + slack * (c.quartic_lhs + c.quartic_rhs);
  return c;
}

/// γ and the map η = T y with T = I − γJ/n.
struct TransformData {
  std::size_t n;
  double gamma;

  explicit TransformData(std::size_t n_) : n(n_) {
    if (n < 3) throw std::invalid_argument("TransformData: n must be at least 3");
    const double nd = static_cast<double>(n);
    gamma = 1.0 - std::sqrt((nd - 2.0) / (2.0 * (nd - 1.0)));
  }

  std::vector<double> apply(std::span<const double> y) const {
    if (y.size() != n) throw std::invalid_argument("TransformData: length mismatch");
    double mu1 = 0.0;
    for (double v : y) mu1 += v;
    std::vector<double> eta(y.begin(), y.end());
    for (double& e : eta) e -= gamma * mu1 / static_cast<double>(n);
    return eta;
  }
};

/// Power sums μ_k = Σ y_j^k for k = 0..4.
inline std::array<double, 5> power_sums(std::span<const double> y) {
  std::array<double, 5> mu{};
  for (double v : y) {
    double p = 1.0;
    for (double& m : mu) {
      m += p;
      p *= v;
    }
  }
  return mu;
}

/// Relative residuals of the four η ↔ y identities: Σ η_j, Σ η_j²,
/// Σ_{j<k}(η_j+η_k)², Σ_{j<k}(η_j+η_k)⁴. Each residual is |lhs − rhs| divided
/// by |lhs| plus the sum of the absolute values of the terms on the right.
inline std::array<double, 4> transform_identities(std::span<const double> y) {
  const TransformData td(y.size());
  const std::vector<double> eta = td.apply(y);
  const double n = static_cast<double>(y.size());
  const double g = td.gamma;
  const auto mu = power_sums(y);

  double s1 = 0.0, s2 = 0.0, p2 = 0.0, p4 = 0.0;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    s1 += eta[j];
    s2 += eta[j] * eta[j];
    for (std::size_t k = j + 1; k < eta.size(); ++k) {
      const double s = eta[j] + eta[k];
      p2 += s * s;
      p4 += s * s * s * s;
    }
  }

  auto residual = [](double lhs, std::initializer_list<double> terms) {
    double rhs = 0.0, scale = std::abs(lhs);
    for (double t : terms) {
      rhs += t;
      scale += std::abs(t);
    }
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
  };

  return {
      residual(s1, {(1.0 - g) * mu[1]}),
      residual(s2, {mu[2], -g * (2.0 - g) * mu[1] * mu[1] / n}),
      residual(p2, {(n - 2.0) * mu[2]}),
      residual(p4, {(n - 8.0) * mu[4], 3.0 * mu[2] * mu[2], (4.0 * (1.0 - 2.0 * g) + 32.0 * g / n) * mu[1] * mu[3],
                    -(24.0 * g * (1.0 - g) / n + 48.0 * g * g / (n * n)) * mu[1] * mu[1] * mu[2],
                    (8.0 * g * g * (1.0 - g) * (3.0 - g) / (n * n) + 8.0 * g * g * g * (4.0 - g) / (n * n * n)) *
                        mu[1] * mu[1] * mu[1] * mu[1]}),
  };
}

/// det(I − sJ/n) − (1 − s), the determinant by Gaussian elimination with
/// partial pivoting.
inline double det_identity(std::size_t n, double s) {
  if (n == 0) throw std::invalid_argument("det_identity: n must be positive");
  std::vector<double> m(n * n, -s / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] += 1.0;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (m[piv * n + c] == 0.0) return 0.0 - (1.0 - s);
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      det = -det;
    }
    const double d = m[c * n + c];
    det *= d;
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / d;
      for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return det - (1.0 - s);
}

}  // namespace mirrorgas
