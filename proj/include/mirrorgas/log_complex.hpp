#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "mirrorgas/angles.hpp"

namespace mirrorgas {

/// Complex number z = exp(log_mag + i·phase), for quantities like I(f) whose
/// magnitude overflows a double. log_mag = −∞ encodes exact zero.
struct LogComplex {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  static LogComplex zero() { return {}; }

  /// From a complex logarithm; the imaginary part is wrapped into (−π, π].
  static LogComplex from_log(std::complex<double> log_z) {
    return {log_z.real(), wrap_angle(log_z.imag())};
  }

  static LogComplex from_complex(std::complex<double> z) {
    if (z == 0.0) return zero();
    return {std::log(std::abs(z)), std::arg(z)};
  }

  bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }

  /// Overflows when log_mag is large; meant for moderate values only.
  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_mag), phase);
  }

  LogComplex conj() const {
    if (is_zero()) return zero();
    return {log_mag, wrap_angle(-phase)};
  }

  friend LogComplex operator*(const LogComplex& x, const LogComplex& y) {
    if (x.is_zero() || y.is_zero()) return zero();
    return {x.log_mag + y.log_mag, wrap_angle(x.phase + y.phase)};
  }

  friend LogComplex operator/(const LogComplex& x, const LogComplex& y) {
    if (y.is_zero()) throw std::domain_error("LogComplex: division by zero");
    if (x.is_zero()) return zero();
    return {x.log_mag - y.log_mag, wrap_angle(x.phase - y.phase)};
  }

  /// Log-sum-exp in the complex plane.
  friend LogComplex operator+(const LogComplex& x, const LogComplex& y) {
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const double top = std::max(x.log_mag, y.log_mag);
    const std::complex<double> sum = std::polar(std::exp(x.log_mag - top), x.phase) +
                                     std::polar(std::exp(y.log_mag - top), y.phase);
    LogComplex out = from_complex(sum);
    if (!out.is_zero()) out.log_mag += top;
    return out;
  }
};

}  // namespace mirrorgas
