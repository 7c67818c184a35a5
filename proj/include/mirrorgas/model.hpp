#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirrorgas/angles.hpp"

namespace mirrorgas {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Point count n and interaction exponent β of the mirror gas.
class ModelParams {
 public:
  ModelParams(std::size_t n, double beta) : n_(n), beta_(beta) {
    if (n < 1) throw std::invalid_argument("ModelParams: n must be at least 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw std::invalid_argument("ModelParams: beta must be positive and finite");
    }
  }

  std::size_t n() const noexcept { return n_; }
  double beta() const noexcept { return beta_; }
  std::size_t pair_count() const noexcept { return n_ * (n_ - 1) / 2; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::size_t n_;
  double beta_;
};

/// n angles, each kept wrapped to (−π, π].
class Configuration {
 public:
  Configuration() = default;

  explicit Configuration(std::vector<double> angles) : angles_(std::move(angles)) {
    for (double& a : angles_) a = wrap_angle(a);
  }

  static Configuration constant(std::size_t n, double angle) {
    return Configuration(std::vector<double>(n, angle));
  }

  std::size_t size() const noexcept { return angles_.size(); }
  double operator[](std::size_t j) const { return angles_[j]; }
  std::span<const double> angles() const noexcept { return angles_; }

  void set_angle(std::size_t j, double angle) {
    if (j >= angles_.size()) throw std::out_of_range("Configuration: index out of range");
    angles_[j] = wrap_angle(angle);
  }

  Configuration with_angle(std::size_t j, double angle) const {
    Configuration out = *this;
    out.set_angle(j, angle);
    return out;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<double> angles_;
};

namespace detail {

/// log|sin((a+b)/2)| for a, b already in (−π, π]. The sum is folded back into
/// (−π, π] so that a + b ≡ 0 (mod 2π) hits sin(0) exactly.
inline double log_abs_half_sin(double a, double b) {
  double s = a + b;
  if (s > kPi) {
    s -= kTwoPi;
  } else if (s <= -kPi) {
    s += kTwoPi;
  }
  return std::log(std::abs(std::sin(0.5 * s)));
}

/// Σ_{j<k} log|sin((θ_j+θ_k)/2)|, stopping early at −∞.
inline double log_abs_half_sin_total(std::span<const double> theta) {
  double total = 0.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    double row = 0.0;
    for (std::size_t k = j + 1; k < theta.size(); ++k) row += log_abs_half_sin(theta[j], theta[k]);
    if (row == kNegInf) return kNegInf;
    total += row;
  }
  return total;
}

inline void check_size(const Configuration& cfg, const ModelParams& p) {
  if (cfg.size() != p.n()) {
    throw std::invalid_argument("configuration has " + std::to_string(cfg.size()) +
                                " angles but the model has n = " + std::to_string(p.n()));
  }
}

}  // namespace detail

/// β·log|e^{ia} − e^{−ib}| = β·log(2|sin((a+b)/2)|); −∞ on the mirror set.
inline double pair_log_kernel(double a, double b, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("pair_log_kernel: beta must be positive");
  return beta * (kLn2 + detail::log_abs_half_sin(wrap_angle(a), wrap_angle(b)));
}

/// Unnormalized log-density Σ_{j<k} β·log|e^{iθ_j} − e^{−iθ_k}|.
inline double log_weight(const Configuration& cfg, const ModelParams& p) {
  detail::check_size(cfg, p);
  const double s = detail::log_abs_half_sin_total(cfg.angles());
  if (s == kNegInf) return kNegInf;
  return p.beta() * (static_cast<double>(p.pair_count()) * kLn2 + s);
}

/// log_weight(cfg with θ_j → new_angle) − log_weight(cfg), touching only the
/// n − 1 pairs that contain j. Moving onto the zero set gives −∞; moving off it
/// gives +∞.
inline double log_weight_delta(const Configuration& cfg, std::size_t j, double new_angle,
                               const ModelParams& p) {
  detail::check_size(cfg, p);
  if (j >= cfg.size()) throw std::out_of_range("log_weight_delta: index out of range");
  const double x = wrap_angle(new_angle);
  const double old = cfg[j];
  double fresh = 0.0, stale = 0.0;
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    if (k == j) continue;
    fresh += detail::log_abs_half_sin(x, cfg[k]);
    stale += detail::log_abs_half_sin(old, cfg[k]);
  }
  if (fresh == kNegInf) return kNegInf;
  if (stale == kNegInf) return kPosInf;
  return p.beta() * (fresh - stale);
}

/// θ_j → −θ_j for every j (π stays at π).
inline Configuration reflect(const Configuration& cfg) {
  std::vector<double> out(cfg.angles().begin(), cfg.angles().end());
  for (double& a : out) a = -a;
  return Configuration(std::move(out));
}

}  // namespace mirrorgas
