#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mirrorgas/angles.hpp"
#include "mirrorgas/model.hpp"
#include "mirrorgas/trig_poly.hpp"

namespace mirrorgas {

enum class Mode { plus, minus, mixed };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::plus: return "+";
    case Mode::minus: return "-";
    case Mode::mixed: return "mixed";
  }
  return "mixed";
}

inline Mode mode_from_string(std::string_view s) {
  if (s == "+") return Mode::plus;
  if (s == "-") return Mode::minus;
  if (s == "mixed") return Mode::mixed;
  throw std::invalid_argument("unknown mode tag: " + std::string(s));
}

/// + if every point is strictly closer (chord distance) to i than to −i, − if
/// every point is closer to −i, mixed otherwise. |e^{iθ} ∓ i|² = 2 ∓ 2 sin θ,
/// so closeness to i is exactly sin θ > 0.
inline Mode mode_indicator(const Configuration& cfg) {
  bool all_plus = true, all_minus = true;
  for (double a : cfg.angles()) {
    const double s = std::sin(a);
    all_plus = all_plus && s > 0.0;
    all_minus = all_minus && s < 0.0;
  }
  if (all_plus && cfg.size() > 0) return Mode::plus;
  if (all_minus && cfg.size() > 0) return Mode::minus;
  return Mode::mixed;
}

inline double concentration_radius(std::size_t n, double epsilon) {
  return std::pow(static_cast<double>(n), -0.5 + epsilon);
}

/// True for 0 < ε ≤ 1/15, where the concentration theorem applies.
inline bool in_theorem_regime(double epsilon) { return epsilon > 0.0 && epsilon <= 1.0 / 15.0; }

/// All points within chord distance n^{−1/2+ε} of i, or all within it of −i.
inline bool concentration_event(const Configuration& cfg, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("concentration_event: epsilon must be positive");
  const double r = concentration_radius(cfg.size(), epsilon);
  bool near_plus = true, near_minus = true;
  for (double a : cfg.angles()) {
    near_plus = near_plus && 2.0 * std::abs(std::sin(0.5 * (a - kHalfPi))) <= r;
    near_minus = near_minus && 2.0 * std::abs(std::sin(0.5 * (a + kHalfPi))) <= r;
    if (!near_plus && !near_minus) return false;
  }
  return near_plus || near_minus;
}

/// Σ_j g(θ_j).
inline double linear_statistic(const Configuration& cfg, const TrigPoly& g) {
  double s = 0.0;
  for (double a : cfg.angles()) s += g(a);
  return s;
}

/// (1/m) Σ_k e^{i t v_k}.
inline std::complex<double> empirical_cf(std::span<const double> values, double t) {
  if (values.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  double re = 0.0, im = 0.0;
  for (double v : values) {
    re += std::cos(t * v);
    im += std::sin(t * v);
  }
  const double m = static_cast<double>(values.size());
  return {re / m, im / m};
}

/// max over the grid of |empirical_cf(t) − predicted(t)|.
template <class Predicted>
double cf_sup_distance(std::span<const double> values, Predicted&& predicted,
                       std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("cf_sup_distance: empty t grid");
  double worst = 0.0;
  for (double t : t_grid) {
    worst = std::max(worst, std::abs(empirical_cf(values, t) - std::complex<double>(predicted(t))));
  }
  return worst;
}

/// Two-sided Kolmogorov–Smirnov discrepancy. At each distinct sample value x
/// compares F̂(x) with cdf(x) and F̂(x⁻) with cdf_left(x); `atoms` are extra
/// points (jumps of the model CDF) where the supremum may sit between samples.
template <class Cdf, class CdfLeft>
double ks_distance(std::span<const double> values, Cdf&& cdf, CdfLeft&& cdf_left,
                   std::span<const double> atoms = {}) {
  if (values.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t k = i;
    while (k < x.size() && x[k] == x[i]) ++k;
    d = std::max(d, std::abs(static_cast<double>(k) / m - cdf(x[i])));
    d = std::max(d, std::abs(static_cast<double>(i) / m - cdf_left(x[i])));
    i = k;
  }
  for (double a : atoms) {
    const auto le = std::upper_bound(x.begin(), x.end(), a) - x.begin();
    const auto lt = std::lower_bound(x.begin(), x.end(), a) - x.begin();
    d = std::max(d, std::abs(static_cast<double>(le) / m - cdf(a)));
    d = std::max(d, std::abs(static_cast<double>(lt) / m - cdf_left(a)));
  }
  return std::min(d, 1.0);
}

template <class Cdf>
double ks_distance(std::span<const double> values, Cdf&& cdf) {
  return ks_distance(values, cdf, cdf);
}

inline double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need at least two values");
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size() - 1);
}

/// Effective sample size by batch means: m·var(x) / (b·var(batch means)).
inline double batch_means_ess(std::span<const double> v, std::size_t batches = 50) {
  if (v.size() < 2 * batches || batches < 2) return static_cast<double>(v.size());
  const std::size_t b = v.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t k = 0; k < batches; ++k) means[k] = mean(v.subspan(k * b, b));
  const double total = variance(v.first(b * batches));
  const double between = variance(means);
  if (!(between > 0.0)) return static_cast<double>(v.size());
  const double tau = std::max(1.0, static_cast<double>(b) * between / total);
  return static_cast<double>(b * batches) / tau;
}

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

inline Histogram histogram(std::span<const double> v, std::size_t bins) {
  if (v.empty() || bins == 0) throw std::invalid_argument("histogram: empty input");
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  Histogram h{*mn, *mx, std::vector<std::size_t>(bins, 0)};
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double x : v) {
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((x - h.lo) / width) : 0;
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

/// One pass/fail check, serialized as
/// {"test","statistic","threshold","pass","m","n","beta","seed"}.
struct Report {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t m = 0;
  std::size_t n = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace mirrorgas
