#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mirrorgas/angles.hpp"
#include "mirrorgas/kernels.hpp"
#include "mirrorgas/model.hpp"
#include "mirrorgas/rng.hpp"
#include "mirrorgas/stats.hpp"
#include "mirrorgas/trig_poly.hpp"

namespace mirrorgas {

struct SamplerConfig {
  std::size_t sweeps = 20000;               // total, burn-in included
  std::optional<std::size_t> burnin;        // default max(1000, 20n)
  std::size_t thin = 5;
  std::optional<double> step_sigma;         // default 2/sqrt(beta n)
  double flip_prob = 0.5;
  std::uint64_t seed = 0;
  bool adapt = true;
  double target_accept = 0.4;

  static std::size_t default_burnin(const ModelParams& p) {
    return std::max<std::size_t>(1000, 20 * p.n());
  }
  static double default_sigma(const ModelParams& p) {
    return 2.0 / std::sqrt(p.beta() * static_cast<double>(p.n()));
  }

  /// Copy with every optional filled in, clamped sigma included.
  SamplerConfig resolved(const ModelParams& p) const {
    SamplerConfig out = *this;
    if (!out.burnin) out.burnin = default_burnin(p);
    if (!out.step_sigma) out.step_sigma = std::min(default_sigma(p), kPi);
    out.validate();
    return out;
  }

  void validate() const {
    if (sweeps == 0) throw std::invalid_argument("sweeps must be positive");
    if (burnin && *burnin >= sweeps) throw std::invalid_argument("burnin must be smaller than sweeps");
    if (thin == 0) throw std::invalid_argument("thin must be at least 1");
    if (step_sigma && !(*step_sigma > 0.0 && std::isfinite(*step_sigma))) {
      throw std::invalid_argument("step_sigma must be positive");
    }
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw std::invalid_argument("flip_prob must be in [0, 1]");
    if (!(target_accept > 0.0 && target_accept < 1.0)) {
      throw std::invalid_argument("target_accept must be in (0, 1)");
    }
  }
};

inline constexpr std::size_t kResyncEvery = 1000;
inline constexpr double kSigmaMin = 1e-5;
inline constexpr double kSigmaMax = kPi;
// Proposals per adaptation window during burn-in.
inline constexpr std::size_t kAdaptWindow = 500;

/// Mutable state of one chain. The cache holds Σ_{j<k} log|sin((θ_j+θ_k)/2)|;
/// the log-weight is recovered from it on demand.
class ChainState {
 public:
  ChainState(const ModelParams& p, Configuration start, std::uint64_t seed)
      : params_(p), cfg_(std::move(start)), table_(cfg_.angles()), rng_(seed) {
    detail::check_size(cfg_, p);
    log_sin_sum_ = detail::log_abs_half_sin_total(cfg_.angles());
  }

  /// All angles at +π/2.
  static ChainState initial(const ModelParams& p, std::uint64_t seed) {
    return ChainState(p, Configuration::constant(p.n(), kHalfPi), seed);
  }

  const ModelParams& params() const { return params_; }
  const Configuration& cfg() const { return cfg_; }
  Rng& rng() { return rng_; }

  double cached_log_weight() const {
    if (log_sin_sum_ == kNegInf) return kNegInf;
    return params_.beta() * (static_cast<double>(params_.pair_count()) * kLn2 + log_sin_sum_);
  }

  std::uint64_t accept_count = 0;
  std::uint64_t propose_count = 0;
  std::uint64_t flip_count = 0;
  double max_resync_drift = 0.0;

  /// Change of the cached pair sum under θ_j → x (not yet scaled by β).
  double log_sin_delta(std::size_t j, double x) const { return table_.log_abs_sin_delta(j, x); }

  /// Applies θ_j → x given d = log_sin_delta(j, x).
  void commit(std::size_t j, double x, double d) {
    cfg_.set_angle(j, x);
    table_.assign(j, cfg_[j]);
    if (d == kPosInf || log_sin_sum_ == kNegInf) {
      log_sin_sum_ = detail::log_abs_half_sin_total(cfg_.angles());
    } else {
      log_sin_sum_ += d;
    }
  }

  /// θ → −θ. The pair sum is invariant, so the cache is left as is.
  void reflect_in_place() {
    cfg_ = reflect(cfg_);
    for (std::size_t k = 0; k < cfg_.size(); ++k) table_.assign(k, cfg_[k]);
  }

  /// Recomputes the cache from scratch and returns |old − new| in log-weight.
  double resync() {
    const double before = cached_log_weight();
    log_sin_sum_ = detail::log_abs_half_sin_total(cfg_.angles());
    const double after = cached_log_weight();
    double drift = 0.0;
    if (std::isfinite(before) && std::isfinite(after)) drift = std::abs(before - after);
    else if (before != after) drift = kPosInf;
    max_resync_drift = std::max(max_resync_drift, drift);
    return drift;
  }

 private:
  ModelParams params_;
  Configuration cfg_;
  HalfAngleTable table_;
  double log_sin_sum_ = 0.0;
  Rng rng_;
};

/// Metropolis rule with a pre-drawn uniform u.
inline bool metropolis_accept(double delta, double u) {
  if (std::isnan(delta) || delta == kNegInf) return false;
  if (delta >= 0.0) return true;
  return u < std::exp(delta);
}

/// One random-scan wrapped-Gaussian proposal. Returns whether it was accepted.
inline bool single_site_update(ChainState& st, double sigma) {
  const std::size_t n = st.cfg().size();
  const std::size_t j = st.rng().index(n);
  const double x = wrap_angle(st.cfg()[j] + sigma * st.rng().normal());
  const double u = st.rng().uniform();
  const double d = st.log_sin_delta(j, x);
  const double delta = std::isfinite(d) ? st.params().beta() * d : d;
  ++st.propose_count;
  if (!metropolis_accept(delta, u)) return false;
  st.commit(j, x, d);
  ++st.accept_count;
  return true;
}

/// Global reflection; always accepted.
inline void flip_update(ChainState& st) {
  st.reflect_in_place();
  ++st.flip_count;
}

/// n single-site updates, then a reflection with probability flip_prob.
/// Returns the number of accepted single-site moves.
inline std::size_t sweep(ChainState& st, double sigma, double flip_prob) {
  std::size_t accepted = 0;
  const std::size_t n = st.cfg().size();
  for (std::size_t i = 0; i < n; ++i) accepted += single_site_update(st, sigma) ? 1 : 0;
  if (flip_prob > 0.0 && st.rng().bernoulli(flip_prob)) flip_update(st);
  return accepted;
}

inline double adapt_step(double sigma, double window_accept_rate, double target_accept) {
  const double next = sigma * std::exp(0.5 * (window_accept_rate - target_accept));
  return std::clamp(next, kSigmaMin, kSigmaMax);
}

struct SampleRecord {
  std::size_t sweep = 0;
  std::optional<double> stat;
  Mode mode = Mode::mixed;
  bool conc = false;
  double logw = 0.0;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct ChainDiagnostics {
  double accept_rate = 0.0;         // measurement phase only
  double burnin_accept_rate = 0.0;
  double final_sigma = 0.0;
  std::vector<double> sigma_history;
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  std::uint64_t flips = 0;
  double max_resync_drift = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ChainDiagnostics&, const ChainDiagnostics&) = default;
};

struct SampleSet {
  ModelParams params{1, 1.0};
  SamplerConfig config;
  std::optional<TrigPoly> g;
  double conc_epsilon = 1.0 / 15.0;
  std::size_t chains = 1;
  std::vector<SampleRecord> records;
  std::vector<Configuration> configs;  // filled only with keep_configs
  std::vector<ChainDiagnostics> diagnostics;  // one per chain

  std::vector<double> stats() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
      if (r.stat) out.push_back(*r.stat);
    }
    return out;
  }
};

struct RunOptions {
  bool keep_configs = false;
  double conc_epsilon = 1.0 / 15.0;
  /// Called for every retained configuration, in order. Forces sequential
  /// execution in run_chains.
  std::function<void(const Configuration&, const SampleRecord&)> observer;
};

inline SampleSet run_chain(const ModelParams& p, const SamplerConfig& config,
                           const std::optional<TrigPoly>& g, const RunOptions& opt = {}) {
  const SamplerConfig sc = config.resolved(p);
  const std::size_t burnin = *sc.burnin;
  double sigma = *sc.step_sigma;

  SampleSet out;
  out.params = p;
  out.config = sc;
  out.g = g;
  out.conc_epsilon = opt.conc_epsilon;
  out.records.reserve((sc.sweeps - burnin) / sc.thin);

  ChainState st = ChainState::initial(p, sc.seed);
  ChainDiagnostics diag;
  diag.seed = sc.seed;
  diag.sigma_history.push_back(sigma);

  const std::size_t n = p.n();
  const std::size_t window_sweeps = std::max<std::size_t>(1, (kAdaptWindow + n - 1) / n);
  const std::size_t windows = burnin / window_sweeps;
  const std::size_t history_stride = std::max<std::size_t>(1, (windows + 255) / 256);
  std::size_t window_accepts = 0, window_props = 0, window_index = 0;
  std::uint64_t burn_accepts = 0, burn_props = 0;

  for (std::size_t s = 1; s <= sc.sweeps; ++s) {
    const std::size_t acc = sweep(st, sigma, sc.flip_prob);
    if (s <= burnin) {
      burn_accepts += acc;
      burn_props += n;
      if (sc.adapt) {
        window_accepts += acc;
        window_props += n;
        if (s % window_sweeps == 0) {
          sigma = adapt_step(sigma, static_cast<double>(window_accepts) / static_cast<double>(window_props),
                             sc.target_accept);
          window_accepts = window_props = 0;
          if (++window_index % history_stride == 0) diag.sigma_history.push_back(sigma);
        }
      }
      if (s == burnin) {
        st.accept_count = 0;
        st.propose_count = 0;
      }
    }
    if (s % kResyncEvery == 0) st.resync();
    if (s > burnin && (s - burnin) % sc.thin == 0) {
      SampleRecord rec;
      rec.sweep = s;
      if (g) rec.stat = linear_statistic(st.cfg(), *g);
      rec.mode = mode_indicator(st.cfg());
      rec.conc = concentration_event(st.cfg(), opt.conc_epsilon);
      rec.logw = st.cached_log_weight();
      if (opt.observer) opt.observer(st.cfg(), rec);
      if (opt.keep_configs) out.configs.push_back(st.cfg());
      out.records.push_back(rec);
    }
  }

  diag.proposals = st.propose_count;
  diag.accepts = st.accept_count;
  diag.accept_rate = st.propose_count ? static_cast<double>(st.accept_count) / static_cast<double>(st.propose_count) : 0.0;
  diag.burnin_accept_rate = burn_props ? static_cast<double>(burn_accepts) / static_cast<double>(burn_props) : 0.0;
  diag.final_sigma = sigma;
  if (diag.sigma_history.back() != sigma) diag.sigma_history.push_back(sigma);
  diag.flips = st.flip_count;
  st.resync();
  diag.max_resync_drift = st.max_resync_drift;
  out.diagnostics.push_back(std::move(diag));
  return out;
}

/// Thread cap from MIRRORGAS_THREADS, else hardware concurrency.
inline std::size_t thread_cap() {
  std::size_t cap = std::max<unsigned>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MIRRORGAS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = static_cast<std::size_t>(v);
  }
  return cap;
}

/// k independent chains with seeds seed + i, merged chain-major.
inline SampleSet run_chains(const ModelParams& p, const SamplerConfig& config,
                            const std::optional<TrigPoly>& g, std::size_t chains,
                            const RunOptions& opt = {}) {
  if (chains == 0) throw std::invalid_argument("chains must be at least 1");
  std::vector<SampleSet> parts(chains);
  auto run_one = [&](std::size_t i) {
    SamplerConfig c = config;
    c.seed = config.seed + i;
    parts[i] = run_chain(p, c, g, opt);
  };
  const std::size_t workers = opt.observer ? 1 : std::min(chains, thread_cap());
  if (workers <= 1) {
    for (std::size_t i = 0; i < chains; ++i) run_one(i);
  } else {
    for (std::size_t base = 0; base < chains; base += workers) {
      std::vector<std::thread> pool;
      for (std::size_t i = base; i < std::min(chains, base + workers); ++i) pool.emplace_back(run_one, i);
      for (auto& t : pool) t.join();
    }
  }
  SampleSet out = std::move(parts[0]);
  out.config.seed = config.seed;
  out.chains = chains;
  for (std::size_t i = 1; i < chains; ++i) {
    out.records.insert(out.records.end(), parts[i].records.begin(), parts[i].records.end());
    out.configs.insert(out.configs.end(), parts[i].configs.begin(), parts[i].configs.end());
    out.diagnostics.push_back(std::move(parts[i].diagnostics[0]));
  }
  return out;
}

}  // namespace mirrorgas
