#pragma once

// Ground-truth values of Z_n and I(f) that share no code path with either the
// sampler or the asymptotic formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mirrorgas/angles.hpp"
#include "mirrorgas/kernels.hpp"
#include "mirrorgas/log_complex.hpp"
#include "mirrorgas/model.hpp"
#include "mirrorgas/quadrature.hpp"
#include "mirrorgas/rng.hpp"
#include "mirrorgas/sampler.hpp"
#include "mirrorgas/trig_poly.hpp"

namespace mirrorgas {

/// log Z_2 = log[2π · 2^β · 2√π · Γ((β+1)/2) / Γ(β/2 + 1)].
inline double z2_closed_form(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("z2_closed_form: beta must be positive");
  return std::log(kTwoPi) + beta * kLn2 + std::log(2.0 * std::sqrt(kPi)) +
         std::lgamma(0.5 * (beta + 1.0)) - std::lgamma(0.5 * beta + 1.0);
}

struct QuadratureSpec {
  std::size_t nodes_per_dim = 8;  // first refinement level, per subinterval
  double refine_until = 1e-8;     // relative change between levels
  std::size_t max_nodes = 512;
};

struct QuadratureResult {
  LogComplex value;
  double rel_error = 0.0;  // |I_m − I_{m/2}| / |I_m| at the last step
  std::size_t nodes = 0;
  std::vector<double> log_mag_history;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

class UnsupportedSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxQuadratureN = 4;

namespace detail {

/// Nested product rule for ∫ Π_{j<k}|sin((θ_j+θ_k)/2)|^β Π_j e^{c·g(θ_j)}.
/// Each axis is cut at the points where the integrand (or an inner integral
/// as a function of this axis) is not smooth: −θ_k, and when further axes
/// follow also +θ_k and the self-mirror points 0 and π. Every piece gets the
/// sigmoidal-mapped Gauss rule.
class NestedIntegrator {
 public:
  NestedIntegrator(std::size_t n, double beta, const TrigPoly* g, std::complex<double> scale, std::size_t m)
      : n_(n), beta_(beta), g_(g), scale_(scale), rule_(mapped_rule(m)), theta_(n, 0.0) {}

  /// Integrates axes first..n−1 with θ_0..θ_{first−1} fixed.
  std::complex<double> integrate(std::size_t first, std::span<const double> fixed) {
    std::copy(fixed.begin(), fixed.end(), theta_.begin());
    return level(first);
  }

 private:
  std::complex<double> level(std::size_t l) {
    std::vector<double> cuts;
    if (l + 1 < n_) cuts = {0.0, kPi};
    for (std::size_t k = 0; k < l; ++k) {
      cuts.push_back(wrap_angle(-theta_[k]));
      if (l + 1 < n_) cuts.push_back(theta_[k]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               cuts.end());
    if (cuts.empty()) cuts.push_back(-kPi);
    std::complex<double> total = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const double a = cuts[i];
      const double b = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + kTwoPi;
      const double len = b - a;
      if (len <= 0.0) continue;
      std::complex<double> piece = 0.0;
      for (std::size_t q = 0; q < rule_.x.size(); ++q) {
        const double x = wrap_angle(a + len * rule_.x[q]);
        double log_mag = 0.0;
        for (std::size_t k = 0; k < l; ++k) log_mag += log_abs_half_sin(x, theta_[k]);
        if (log_mag == kNegInf) continue;
        std::complex<double> v = std::exp(beta_ * log_mag);
        if (g_ != nullptr && scale_ != 0.0) v *= std::exp(scale_ * (*g_)(x));
        if (l + 1 < n_) {
          theta_[l] = x;
          v *= level(l + 1);
        }
        piece += rule_.w[q] * v;
      }
      total += len * piece;
    }
    return total;
  }

  std::size_t n_;
  double beta_;
  const TrigPoly* g_;
  std::complex<double> scale_;
  MappedRule rule_;
  std::vector<double> theta_;
};

template <class Eval>
QuadratureResult refine(const QuadratureSpec& q, Eval&& eval, double log_offset) {
  if (q.nodes_per_dim == 0 || q.max_nodes < q.nodes_per_dim) throw std::invalid_argument("bad QuadratureSpec");
  QuadratureResult res;
  std::optional<std::complex<double>> prev;
  for (std::size_t m = q.nodes_per_dim; m <= q.max_nodes; m *= 2) {
    const std::complex<double> cur = eval(m);
    res.value = LogComplex::from_complex(cur);
    res.value.log_mag += log_offset;
    res.nodes = m;
    res.log_mag_history.push_back(res.value.log_mag);
    if (prev) {
      const double scale = std::abs(cur);
      res.rel_error = scale > 0.0 ? std::abs(cur - *prev) / scale : std::abs(cur - *prev);
      if (res.rel_error <= q.refine_until) return res;
    }
    prev = cur;
  }
  throw ConvergenceError("quadrature did not reach the requested tolerance", res);
}

}  // namespace detail

/// I(c·g) = ∫ Π_{j<k}|e^{iθ_j} − e^{−iθ_k}|^β Π_j e^{c·g(θ_j)} dθ for n ≤ 4.
inline QuadratureResult quadrature_I_scaled(const TrigPoly& g, std::complex<double> scale, const ModelParams& p,
                                            const QuadratureSpec& q = {}) {
  if (p.n() > kMaxQuadratureN) {
    throw UnsupportedSize("quadrature is limited to n <= 4 (got n = " + std::to_string(p.n()) + ")");
  }
  const double offset = p.beta() * static_cast<double>(p.pair_count()) * kLn2;
  return detail::refine(
      q,
      [&](std::size_t m) {
        detail::NestedIntegrator it(p.n(), p.beta(), &g, scale, m);
        return it.integrate(0, {});
      },
      offset);
}

/// I(itg); t = 0 gives Z_n.
inline QuadratureResult quadrature_I(const TrigPoly& g, double t, const ModelParams& p, const QuadratureSpec& q = {}) {
  return quadrature_I_scaled(g, std::complex<double>(0.0, t), p, q);
}

inline QuadratureResult quadrature_Z(const ModelParams& p, const QuadratureSpec& q = {}) {
  return quadrature_I(TrigPoly(), 0.0, p, q);
}

/// Single-angle marginal density of the n = 3 gas on `grid`, normalized by the
/// trapezoid rule over the grid.
inline std::vector<double> marginal_n3(std::span<const double> grid, double beta, const QuadratureSpec& q = {}) {
  if (grid.size() < 2) throw std::invalid_argument("marginal_n3: grid needs at least two points");
  const ModelParams p(3, beta);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fixed[1] = {wrap_angle(grid[i])};
    const auto r = detail::refine(
        q,
        [&](std::size_t m) {
          detail::NestedIntegrator it(3, beta, nullptr, 0.0, m);
          return it.integrate(1, fixed);
        },
        0.0);
    out[i] = r.value.to_complex().real();
  }
  double area = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) area += 0.5 * (out[i] + out[i - 1]) * (grid[i] - grid[i - 1]);
  for (double& v : out) v /= area;
  return out;
}

struct ImportanceResult {
  double log_value = 0.0;
  double stderr_log = 0.0;
  double ess = 0.0;
  double outside_fraction = 0.0;  // draws that left the reference cell
  bool low_ess = false;
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kImportanceBlock = 4096;
inline constexpr double kMinEss = 50.0;

namespace detail {

/// Gaussian reference around one mode: precision (β/4)((n−2)I + J), with
/// n − 2 floored at 1 so that n = 2 still has a proper law.
struct ModeGaussian {
  std::size_t n;
  double a;  // eigenvalue on the complement of the all-ones vector
  double b;  // eigenvalue on the all-ones vector
  double log_norm;

  ModeGaussian(std::size_t n_, double beta) : n(n_) {
    const double nd = static_cast<double>(n);
    const double flat = std::max(nd - 2.0, 1.0);
    a = 0.25 * beta * flat;
    b = 0.25 * beta * (flat + nd);
    log_norm = 0.5 * ((nd - 1.0) * std::log(a) + std::log(b)) - 0.5 * nd * std::log(kTwoPi);
  }

  void draw(Rng& rng, std::vector<double>& eta) const {
    double mean = 0.0;
    for (double& e : eta) {
      e = rng.normal();
      mean += e;
    }
    mean /= static_cast<double>(n);
    const double sa = 1.0 / std::sqrt(a), sb = 1.0 / std::sqrt(b);
    for (double& e : eta) e = (e - mean) * sa + mean * sb;
  }

  double log_density(std::span<const double> eta) const {
    double mean = 0.0, sq = 0.0;
    for (double e : eta) mean += e;
    mean /= static_cast<double>(n);
    for (double e : eta) sq += (e - mean) * (e - mean);
    const double quad = a * sq + b * static_cast<double>(n) * mean * mean;
    return log_norm - 0.5 * quad;
  }
};

}  // namespace detail

/// Importance estimate of log Z_n from a two-mode Gaussian reference in the
/// coordinates η = θ ∓ π/2. Draws with some |η_j| ≥ π are outside the cell
/// where θ ↦ η is one-to-one and get weight zero; inside the cell the
/// reference density is the symmetric mixture of both modes.
inline ImportanceResult importance_log_Z(const ModelParams& p, std::size_t m, std::uint64_t seed) {
  if (p.n() < 2) throw std::invalid_argument("importance_log_Z: n must be at least 2");
  if (m < 1000) throw std::invalid_argument("importance_log_Z: m must be at least 1000");
  const std::size_t n = p.n();
  const detail::ModeGaussian ref(n, p.beta());
  const std::size_t blocks = (m + kImportanceBlock - 1) / kImportanceBlock;
  std::vector<double> logw(m, kNegInf);

  auto run_block = [&](std::size_t blk) {
    Rng rng = Rng::stream(seed, blk);
    std::vector<double> eta(n), theta(n), back(n);
    const std::size_t lo = blk * kImportanceBlock, hi = std::min(m, lo + kImportanceBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      const double s = rng.uniform() < 0.5 ? kHalfPi : -kHalfPi;
      ref.draw(rng, eta);
      bool inside = true;
      for (std::size_t j = 0; j < n; ++j) {
        inside = inside && std::abs(eta[j]) < kPi;
        theta[j] = wrap_angle(s + eta[j]);
      }
      if (!inside) continue;
      const double target = HalfAngleTable(theta).log_abs_sin_total();
      if (target == kNegInf) continue;
      for (std::size_t j = 0; j < n; ++j) back[j] = wrap_angle(theta[j] - kHalfPi);
      const double lp = ref.log_density(back);
      for (std::size_t j = 0; j < n; ++j) back[j] = wrap_angle(theta[j] + kHalfPi);
      const double lm = ref.log_density(back);
      const double hi_l = std::max(lp, lm);
      const double log_q = hi_l + std::log(0.5 * (std::exp(lp - hi_l) + std::exp(lm - hi_l)));
      logw[i] = p.beta() * target - log_q;
    }
  };

  const std::size_t workers = std::min(blocks, thread_cap());
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  ImportanceResult res;
  res.m = m;
  res.seed = seed;
  const double top = *std::max_element(logw.begin(), logw.end());
  if (top == kNegInf) throw std::runtime_error("importance_log_Z: every weight is zero");
  double s1 = 0.0, s2 = 0.0;
  std::size_t outside = 0;
  for (double lw : logw) {
    if (lw == kNegInf) {
      ++outside;
      continue;
    }
    const double w = std::exp(lw - top);
    s1 += w;
    s2 += w * w;
  }
  const double md = static_cast<double>(m);
  const double mean = s1 / md;
  const double var = std::max(0.0, (s2 / md - mean * mean) * md / (md - 1.0));
  res.log_value = top + std::log(mean) + p.beta() * static_cast<double>(p.pair_count()) * kLn2;
  res.stderr_log = std::sqrt(var / md) / mean;
  res.ess = s1 * s1 / s2;
  res.low_ess = res.ess < kMinEss;
  res.outside_fraction = static_cast<double>(outside) / md;
  return res;
}

}  // namespace mirrorgas
