#pragma once

// Fast pair sums for the sampler and the importance estimator.
//
// |sin((x+θ_k)/2)| = |sin(x/2)cos(θ_k/2) + cos(x/2)sin(θ_k/2)|, so with the
// half-angle sines and cosines cached, each pair costs two multiply-adds and no
// transcendental call. Logs are taken of blocked products rather than of each
// factor; a block whose product gets close to underflow is redone with
// per-factor logs, which keeps zeros (mirror coincidences) exact.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mirrorgas/angles.hpp"
#include "mirrorgas/model.hpp"

namespace mirrorgas {

namespace detail {

/// mantissa·2^exponent, renormalized after every multiply.
class ScaledProduct {
 public:
  void multiply(double v) {
    int e = 0;
    mant_ = std::frexp(mant_ * v, &e);
    exp_ += e;
  }
  double log() const {
    if (mant_ == 0.0) return kNegInf;
    return std::log(mant_) + static_cast<double>(exp_) * kLn2;
  }

 private:
  double mant_ = 1.0;
  long long exp_ = 0;
};

inline constexpr std::size_t kLanes = 4;
inline constexpr std::size_t kDepth = 8;
inline constexpr std::size_t kBlock = kLanes * kDepth;
// Four lane products above this floor multiply to a normal double.
inline constexpr double kLaneFloor = 1e-75;

/// Accumulates Σ_k log|sa·c_k + ca·s_k| − log|sb·c_k + cb·s_k| over [lo, hi)
/// (the second term only when Ratio). Blocked products go to `prod`; blocks
/// that fall back to exact logs go to `num`/`den`.
template <bool Ratio>
inline void accumulate_log_abs(const double* c, const double* s, std::size_t lo, std::size_t hi,
                               double ca, double sa, double cb, double sb, ScaledProduct& prod,
                               double& num, double& den) {
  auto exact_block = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) {
      num += std::log(std::abs(sa * c[i] + ca * s[i]));
      if constexpr (Ratio) den += std::log(std::abs(sb * c[i] + cb * s[i]));
    }
  };
  auto flush = [&](const std::array<double, kLanes>& pa, const std::array<double, kLanes>& pb,
                   std::size_t from, std::size_t to) {
    bool ok = true;
    for (std::size_t l = 0; l < kLanes; ++l) {
      ok = ok && pa[l] >= kLaneFloor;
      if constexpr (Ratio) ok = ok && pb[l] >= kLaneFloor;
    }
    if (!ok) {
      exact_block(from, to);
      return;
    }
    double q = (pa[0] * pa[1]) * (pa[2] * pa[3]);
    if constexpr (Ratio) q /= (pb[0] * pb[1]) * (pb[2] * pb[3]);
    prod.multiply(q);
  };

  std::size_t k = lo;
  for (; k + kBlock <= hi; k += kBlock) {
    std::array<double, kLanes> pa{1.0, 1.0, 1.0, 1.0};
    std::array<double, kLanes> pb{1.0, 1.0, 1.0, 1.0};
    const double* cb_ptr = c + k;
    const double* sb_ptr = s + k;
    for (std::size_t r = 0; r < kDepth; ++r) {
      for (std::size_t l = 0; l < kLanes; ++l) {
        const std::size_t i = r * kLanes + l;
        pa[l] *= std::abs(sa * cb_ptr[i] + ca * sb_ptr[i]);
        if constexpr (Ratio) pb[l] *= std::abs(sb * cb_ptr[i] + cb * sb_ptr[i]);
      }
    }
    flush(pa, pb, k, k + kBlock);
  }
  if (k < hi) {
    std::array<double, kLanes> pa{1.0, 1.0, 1.0, 1.0};
    std::array<double, kLanes> pb{1.0, 1.0, 1.0, 1.0};
    for (std::size_t i = k; i < hi; ++i) {
      const std::size_t l = (i - k) % kLanes;
      pa[l] *= std::abs(sa * c[i] + ca * s[i]);
      if constexpr (Ratio) pb[l] *= std::abs(sb * c[i] + cb * s[i]);
    }
    flush(pa, pb, k, hi);
  }
}

}  // namespace detail

/// Cached cos(θ_k/2), sin(θ_k/2) for a configuration.
class HalfAngleTable {
 public:
  HalfAngleTable() = default;

  explicit HalfAngleTable(std::span<const double> angles) : cos_(angles.size()), sin_(angles.size()) {
    for (std::size_t k = 0; k < angles.size(); ++k) assign(k, angles[k]);
  }

  std::size_t size() const noexcept { return cos_.size(); }

  void assign(std::size_t k, double angle) {
    // θ = π is its own mirror; exact (0, 1) makes that pair vanish exactly
    cos_[k] = angle == kPi ? 0.0 : std::cos(0.5 * angle);
    sin_[k] = angle == kPi ? 1.0 : std::sin(0.5 * angle);
  }

  /// Σ_{k≠j} log|sin((x+θ_k)/2)| − log|sin((θ_j+θ_k)/2)|. −∞ if x hits the
  /// mirror set, +∞ if only θ_j did.
  double log_abs_sin_delta(std::size_t j, double x) const {
    const double cx = x == kPi ? 0.0 : std::cos(0.5 * x);
    const double sx = x == kPi ? 1.0 : std::sin(0.5 * x);
    const double cj = cos_[j];
    const double sj = sin_[j];
    detail::ScaledProduct prod;
    double num = 0.0, den = 0.0;
    detail::accumulate_log_abs<true>(cos_.data(), sin_.data(), 0, j, cx, sx, cj, sj, prod, num, den);
    detail::accumulate_log_abs<true>(cos_.data(), sin_.data(), j + 1, size(), cx, sx, cj, sj, prod,
                                     num, den);
    if (num == kNegInf) return kNegInf;
    if (den == kNegInf) return kPosInf;
    return prod.log() + (num - den);
  }

  /// Σ_{j<k} log|sin((θ_j+θ_k)/2)|.
  double log_abs_sin_total() const {
    detail::ScaledProduct prod;
    double num = 0.0, unused = 0.0;
    for (std::size_t j = 0; j + 1 < size(); ++j) {
      detail::accumulate_log_abs<false>(cos_.data(), sin_.data(), j + 1, size(), cos_[j], sin_[j],
                                        0.0, 0.0, prod, num, unused);
      if (num == kNegInf) return kNegInf;
    }
    return prod.log() + num;
  }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// log_weight via the cached half-angle products. Agrees with log_weight away
/// from the mirror set; used where many full evaluations are needed.
inline double log_weight_fast(const Configuration& cfg, const ModelParams& p) {
  detail::check_size(cfg, p);
  const double s = HalfAngleTable(cfg.angles()).log_abs_sin_total();
  if (s == kNegInf) return kNegInf;
  return p.beta() * (static_cast<double>(p.pair_count()) * kLn2 + s);
}

}  // namespace mirrorgas
