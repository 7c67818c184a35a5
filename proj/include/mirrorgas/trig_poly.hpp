#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "mirrorgas/angles.hpp"

namespace mirrorgas {

/// Values of a test function and its first two derivatives at the two mode
/// angles +π/2 and −π/2. This is all the asymptotic formulas consume, so a
/// user may supply it directly instead of a TrigPoly.
struct ModeJet {
  double value_plus = 0.0;
  double d1_plus = 0.0;
  double d2_plus = 0.0;
  double value_minus = 0.0;
  double d1_minus = 0.0;
  double d2_minus = 0.0;
};

/// g(θ) = a₀ + Σ_{k=1..d} (a_k cos kθ + b_k sin kθ).
class TrigPoly {
 public:
  TrigPoly() : a_{0.0} {}

  /// `cos_coeffs` holds a₀..a_d, `sin_coeffs` holds b₁..b_d. Either list may be
  /// shorter than the degree; missing entries are zero.
  TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
      : a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
    if (a_.empty()) a_.push_back(0.0);
    const std::size_t d = std::max(a_.size() - 1, b_.size());
    a_.resize(d + 1, 0.0);
    b_.resize(d, 0.0);
    for (double v : a_) check_finite(v);
    for (double v : b_) check_finite(v);
  }

  static TrigPoly constant(double c) { return TrigPoly({c}, {}); }

  /// Builtins: sin, cos, sin2 (sin 2θ), cos2 (cos 2θ), case-c ((1+sin θ)cos θ).
  static TrigPoly builtin(std::string_view name) {
    if (name == "sin") return TrigPoly({0.0}, {1.0});
    if (name == "cos") return TrigPoly({0.0, 1.0}, {});
    if (name == "sin2") return TrigPoly({0.0}, {0.0, 1.0});
    if (name == "cos2") return TrigPoly({0.0, 0.0, 1.0}, {});
    // (1 + sin θ) cos θ = cos θ + ½ sin 2θ
    if (name == "case-c") return TrigPoly({0.0, 1.0}, {0.0, 0.5});
    throw std::invalid_argument("unknown builtin test function: " + std::string(name));
  }

  std::size_t degree() const { return b_.size(); }
  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }

  double operator()(double theta) const { return evaluate<0>(theta); }
  double derivative(double theta) const { return evaluate<1>(theta); }
  double second_derivative(double theta) const { return evaluate<2>(theta); }

  /// Exact jet at ±π/2: cos(kπ/2) and sin(kπ/2) are taken from their period-4
  /// integer patterns instead of libm, so equality tests between the two modes
  /// are not polluted by rounding.
  ModeJet jet() const {
    static constexpr int kCos[4] = {1, 0, -1, 0};
    static constexpr int kSin[4] = {0, 1, 0, -1};
    ModeJet j;
    j.value_plus = j.value_minus = a_[0];
    for (std::size_t k = 1; k <= degree(); ++k) {
      const double kk = static_cast<double>(k);
      const double c = kCos[k % 4];
      const double s = kSin[k % 4];  // sin(−kπ/2) = −s
      const double a = a_[k];
      const double b = b_[k - 1];
      j.value_plus += a * c + b * s;
      j.value_minus += a * c - b * s;
      j.d1_plus += kk * (-a * s + b * c);
      j.d1_minus += kk * (a * s + b * c);
      j.d2_plus += -kk * kk * (a * c + b * s);
      j.d2_minus += -kk * kk * (a * c - b * s);
    }
    return j;
  }

  /// ĝ(θ) = g(−θ).
  TrigPoly reflected() const {
    std::vector<double> b = b_;
    for (double& v : b) v = -v;
    return TrigPoly(a_, std::move(b));
  }

  TrigPoly shifted(double c) const {
    std::vector<double> a = a_;
    a[0] += c;
    return TrigPoly(std::move(a), b_);
  }

  struct Range {
    double min;
    double max;
  };

  /// min/max over the circle: 4096-point grid then Brent refinement around
  /// the best grid cell.
  Range range() const {
    constexpr int kGrid = 4096;
    const double h = kTwoPi / kGrid;
    int arg_min = 0, arg_max = 0;
    double lo = (*this)(-kPi), hi = lo;
    for (int i = 1; i < kGrid; ++i) {
      const double v = (*this)(-kPi + i * h);
      if (v < lo) { lo = v; arg_min = i; }
      if (v > hi) { hi = v; arg_max = i; }
    }
    auto refine = [&](int cell, double sign) {
      const double centre = -kPi + cell * h;
      auto objective = [&](double x) { return sign * (*this)(x); };
      const auto best = boost::math::tools::brent_find_minima(objective, centre - h, centre + h, 48);
      return sign * best.second;
    };
    return {std::min(lo, refine(arg_min, 1.0)), std::max(hi, refine(arg_max, -1.0))};
  }

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

 private:
  static void check_finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("TrigPoly: non-finite coefficient");
  }

  template <int Order>
  double evaluate(double theta) const {
    double acc = Order == 0 ? a_[0] : 0.0;
    const std::complex<double> step = std::polar(1.0, theta);
    std::complex<double> e = 1.0;
    for (std::size_t k = 1; k <= degree(); ++k) {
      // Re-anchor every few steps so the recurrence does not drift.
      e = (k % 8 == 0) ? std::polar(1.0, static_cast<double>(k) * theta) : e * step;
      const double c = e.real();
      const double s = e.imag();
      const double kk = static_cast<double>(k);
      const double a = a_[k];
      const double b = b_[k - 1];
      if constexpr (Order == 0) acc += a * c + b * s;
      if constexpr (Order == 1) acc += kk * (-a * s + b * c);
      if constexpr (Order == 2) acc += -kk * kk * (a * c + b * s);
    }
    return acc;
  }

  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace mirrorgas
