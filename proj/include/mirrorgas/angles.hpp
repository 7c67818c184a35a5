#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mirrorgas {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// Representative of x mod 2π in (−π, π]. Idempotent; −π maps to π.
inline double wrap_angle(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("wrap_angle: non-finite angle");
  }
  // remainder() is exact and lands in [−π, π].
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace mirrorgas
