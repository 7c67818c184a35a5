// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Optional arguments select criteria by number, e.g. `acceptance 1 8 10`.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "mirrorgas/mirrorgas.hpp"

using namespace mirrorgas;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SamplerConfig chain(std::size_t retained, std::size_t thin, std::uint64_t seed, const ModelParams& p) {
  SamplerConfig sc;
  sc.seed = seed;
  sc.thin = thin;
  sc.burnin = SamplerConfig::default_burnin(p);
  sc.sweeps = *sc.burnin + retained * thin;
  return sc;
}

double log_rel_error(double log_a, double log_b) { return std::abs(std::expm1(log_a - log_b)); }

Outcome ac1() {
  Outcome o;
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const auto q = quadrature_Z(ModelParams(2, beta));
    const double rel = log_rel_error(q.value.log_mag, z2_closed_form(beta));
    o.check(rel <= 1e-6, "beta=" + fmt("%g", beta) + " rel=" + fmt("%.2e", rel));
  }
  const double r2 = log_rel_error(z2_closed_form(2.0), std::log(8.0 * oracles::pi * oracles::pi));
  const double r1 = log_rel_error(z2_closed_form(1.0), std::log(16.0 * oracles::pi));
  o.check(r2 <= 1e-12, "Z2(2)=8pi^2 rel=" + fmt("%.1e", r2));
  o.check(r1 <= 1e-12, "Z2(1)=16pi rel=" + fmt("%.1e", r1));
  return o;
}

Outcome ac2() {
  Outcome o;
  for (double beta : {1.0, 2.0}) {
    const ModelParams p(2, beta);
    std::vector<double> sums, first;
    RunOptions opt;
    opt.observer = [&](const Configuration& c, const SampleRecord&) {
      sums.push_back(wrap_angle(c[0] + c[1]));
      first.push_back(c[0]);
    };
    run_chain(p, chain(100000, 5, 2001, p), std::nullopt, opt);
    const double ks_sum = ks_distance(sums, oracles::WrappedSumCdf(beta));
    const double ks_marg = ks_distance(first, oracles::uniform_circle_cdf);
    o.check(ks_sum <= 0.01, "n=2 beta=" + fmt("%g", beta) + " sum KS=" + fmt("%.4f", ks_sum));
    o.check(ks_marg <= 0.01, "n=2 beta=" + fmt("%g", beta) + " marginal KS=" + fmt("%.4f", ks_marg));
  }

  const ModelParams p3(3, 2.0);
  const std::size_t points = 801;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = -kPi + kTwoPi * static_cast<double>(i) / (points - 1);
  const auto dens = marginal_n3(grid, 2.0);
  std::vector<double> cdf(points, 0.0);
  for (std::size_t i = 1; i < points; ++i) cdf[i] = cdf[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
  auto cdf_at = [&](double x) {
    if (x <= grid.front()) return 0.0;
    if (x >= grid.back()) return 1.0;
    const double u = (x + kPi) / kTwoPi * (points - 1);
    const std::size_t i = std::min(points - 2, static_cast<std::size_t>(u));
    const double t = u - static_cast<double>(i);
    return cdf[i] + t * (cdf[i + 1] - cdf[i]);
  };
  std::vector<double> marg;
  RunOptions opt;
  opt.observer = [&](const Configuration& c, const SampleRecord&) { marg.push_back(c[1]); };
  run_chain(p3, chain(100000, 5, 2002, p3), std::nullopt, opt);
  const double ks3 = ks_distance(marg, cdf_at);
  o.check(ks3 <= 0.02, "n=3 marginal KS=" + fmt("%.4f", ks3));
  return o;
}

double concentration_frequency(std::size_t n, std::size_t retained, std::uint64_t seed) {
  const ModelParams p(n, 2.0);
  RunOptions opt;
  opt.conc_epsilon = 1.0 / 15.0;
  const auto s = run_chain(p, chain(retained, 1, seed, p), std::nullopt, opt);
  std::size_t hits = 0;
  for (const auto& r : s.records) hits += r.conc ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(s.records.size());
}

Outcome ac3() {
  Outcome o;
  const double f1000 = concentration_frequency(1000, 100000, 3001);
  o.check(f1000 >= 0.95, "freq(1000)=" + fmt("%.4f", f1000));
  const double f500 = concentration_frequency(500, 20000, 3002);
  const double f2000 = concentration_frequency(2000, 20000, 3003);
  o.check(f2000 >= f500 - 0.01, "freq(500)=" + fmt("%.4f", f500) + " freq(2000)=" + fmt("%.4f", f2000));
  return o;
}

std::vector<double> t_grid41() {
  std::vector<double> t(41);
  for (int i = 0; i < 41; ++i) t[i] = -2.0 + 0.1 * i;
  return t;
}

Outcome ac4() {
  Outcome o;
  const auto g = TrigPoly::builtin("sin2");
  const auto grid = t_grid41();
  auto gauss_cf = [](double t) { return std::exp(-2.0 * t * t); };
  double d500 = 0.0;
  for (std::size_t n : {500u, 2000u}) {
    const ModelParams p(n, 2.0);
    const auto s = run_chain(p, chain(200000, 1, 4000 + n, p), g);
    const auto v = s.stats();
    const double d = cf_sup_distance(v, gauss_cf, grid);
    const std::string tag = "n=" + std::to_string(n);
    if (n == 500) {
      d500 = d;
      o.check(d <= 0.1, tag + " cf sup=" + fmt("%.4f", d));
      const double var = variance(v);
      o.check(std::abs(var - 4.0) <= 0.3, tag + " var=" + fmt("%.3f", var));
      const double ks = ks_distance(v, [](double x) { return oracles::normal_cdf(x, 0.0, 4.0); });
      o.check(ks <= 0.05, tag + " KS=" + fmt("%.4f", ks));
    } else {
      o.check(d <= d500 + 0.01, tag + " cf sup=" + fmt("%.4f", d));
    }
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const ModelParams p(200, 2.0);
  const auto s = run_chain(p, chain(50000, 2, 5001, p), TrigPoly::builtin("sin"));
  const auto v = s.stats();
  double abs_sum = 0.0;
  std::size_t positive = 0;
  for (double x : v) {
    abs_sum += std::abs(x);
    positive += x > 0.0 ? 1 : 0;
  }
  const double mean_abs = abs_sum / static_cast<double>(v.size());
  const double balance = static_cast<double>(positive) / static_cast<double>(v.size());
  o.check(std::abs(mean_abs - 199.0) <= 0.5, "mean|S|=" + fmt("%.4f", mean_abs));
  o.check(std::abs(balance - 0.5) <= 0.05, "P(S>0)=" + fmt("%.4f", balance));
  return o;
}

Outcome ac6() {
  Outcome o;
  const ModelParams p(600, 2.0);
  const auto s = run_chain(p, chain(100000, 1, 6001, p), TrigPoly::builtin("case-c"));
  std::vector<double> plus, minus;
  for (const auto& r : s.records) {
    if (r.mode == Mode::plus) plus.push_back(*r.stat);
    if (r.mode == Mode::minus) minus.push_back(*r.stat);
  }
  if (plus.empty() || minus.empty()) {
    o.check(false, "a mode was never visited");
    return o;
  }
  const double ks = ks_distance(plus, [](double x) { return oracles::normal_cdf(x, 0.0, 4.0); });
  std::size_t small = 0;
  for (double x : minus) small += std::abs(x) <= 0.3 ? 1 : 0;
  const double frac = static_cast<double>(small) / static_cast<double>(minus.size());
  o.check(ks <= 0.06, "+ half KS=" + fmt("%.4f", ks) + " (m=" + std::to_string(plus.size()) + ")");
  o.check(frac >= 0.95, "- half |S|<=0.3 frac=" + fmt("%.4f", frac) + " (m=" + std::to_string(minus.size()) + ")");
  return o;
}

Outcome ac7() {
  Outcome o;
  std::vector<double> gap, se;
  for (std::size_t n : {50u, 100u, 200u}) {
    const ModelParams p(n, 2.0);
    const auto is = importance_log_Z(p, 200000, 7000 + n);
    const double asym = asymptotic_log_I(ModeData::zero(), p).log_mag;
    gap.push_back(std::abs(is.log_value - asym));
    se.push_back(is.stderr_log);
    o.check(!is.low_ess, "n=" + std::to_string(n) + " gap=" + fmt("%.4f", gap.back()) + " se=" +
                             fmt("%.4f", se.back()) + " ess=" + fmt("%.0f", is.ess));
  }
  o.check(gap[1] <= 0.5, "gap(100)<=0.5");
  for (std::size_t i = 1; i < gap.size(); ++i) {
    const double band = 2.0 * std::hypot(se[i - 1], se[i]);
    o.check(gap[i] <= gap[i - 1] + band, "non-increasing step " + std::to_string(i));
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = -kPi + kTwoPi * i / 9999.0;
    const auto b = lemma_cos_bound(x);
    bad += b.lhs <= b.rhs ? 0 : 1;
  }
  o.check(bad == 0, "cos bound violations=" + std::to_string(bad));

  std::mt19937_64 gen(8001);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  auto random_vector = [&](std::size_t len) {
    const double scale = std::pow(10.0, e(gen));
    std::vector<double> v(len);
    for (double& x : v) x = scale * z(gen);
    return v;
  };
  for (std::size_t l : {2u, 3u, 10u, 100u}) {
    std::size_t fails = 0;
    for (int t = 0; t < 10000; ++t) {
      const auto c = power_sum_inequalities(random_vector(l));
      fails += c.quad_ok && c.quartic_ok ? 0 : 1;
    }
    o.check(fails == 0, "power sums l=" + std::to_string(l) + " fails=" + std::to_string(fails));
  }

  for (std::size_t n : {3u, 10u, 100u}) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      for (double r : transform_identities(random_vector(n))) worst = std::max(worst, r);
    }
    for (double s : {0.0, 0.3, 0.5, 0.9, 1.5}) {
      worst = std::max(worst, std::abs(det_identity(n, s)) / (1.0 + std::abs(1.0 - s)));
    }
    o.check(worst <= 1e-9, "identities n=" + std::to_string(n) + " max resid=" + fmt("%.1e", worst));
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  const double beta = 2.0, A = beta / 8.0, E = -beta / 192.0, J = 0.3, eps = 1.0 / 20.0;
  auto gap = [&](std::size_t n) {
    MWCoeffs c;
    c.A = A;
    c.E = E;
    c.J = J;
    c.n = n;
    c.epsilon = eps;
    return std::abs(mw_lhs_product_case(A, E, J, n, eps) - mw_formula(c).log_mag);
  };
  const double g200 = gap(200), g800 = gap(800);
  o.check(g200 <= 0.05, "log gap n=200 " + fmt("%.4g", g200));
  o.check(g800 < g200, "log gap n=800 " + fmt("%.4g", g800));
  return o;
}

Outcome ac10() {
  Outcome o;
  const ModelParams p(40, 2.0);
  const auto g = TrigPoly::builtin("sin2");
  double shift_err = 0.0;
  for (double t : {0.0, 0.3, -1.1}) {
    const auto md = ModeData::from_trig(g, {0.0, t});
    const auto base = asymptotic_log_I(md, p);
    for (std::complex<double> c : {std::complex<double>(0.25, 0.0), {0.0, 0.7}, {-0.4, 1.3}}) {
      const auto shifted = asymptotic_log_I(md.shifted(c), p);
      const std::complex<double> lhs{shifted.log_mag, shifted.phase};
      const std::complex<double> rhs = std::complex<double>{base.log_mag, base.phase} + static_cast<double>(p.n()) * c;
      const double dmag = std::abs(lhs.real() - rhs.real()) / std::max(1.0, std::abs(rhs.real()));
      const double dphase = std::abs(std::remainder(lhs.imag() - rhs.imag(), kTwoPi));
      shift_err = std::max({shift_err, dmag, dphase});
    }
  }
  o.check(shift_err <= 1e-12, "shift rule err=" + fmt("%.1e", shift_err));

  bool cf0 = true;
  for (const char* name : {"sin", "cos", "sin2", "cos2", "case-c"}) {
    for (bool centered : {false, true}) cf0 = cf0 && predicted_cf(TrigPoly::builtin(name), p, 0.0, centered) == 1.0;
  }
  o.check(cf0, "predicted_cf(0)=1");

  double mix_err = 0.0;
  for (const char* name : {"sin", "sin2", "case-c"}) {
    for (double beta : {1.0, 2.0, 4.0}) {
      const auto law = classify_limit_law(TrigPoly::builtin(name), beta);
      const auto comps = law.components();
      for (double t = -3.0; t <= 3.0; t += 0.25) {
        std::complex<double> expect{0.0, 0.0};
        for (const auto& c : comps) expect += 0.5 * std::polar(std::exp(-0.5 * c.var * t * t), c.mean * t);
        mix_err = std::max(mix_err, std::abs(limit_cf(law, t) - expect));
      }
    }
  }
  o.check(mix_err <= 1e-14, "limit_cf mixture err=" + fmt("%.1e", mix_err));

  auto serialize = [&](std::uint64_t seed) {
    const ModelParams q(25, 2.0);
    SamplerConfig sc;
    sc.sweeps = 2500;
    sc.seed = seed;
    std::ostringstream out;
    write_sample_set(out, run_chains(q, sc, TrigPoly::builtin("sin"), 2), json{{"command", "acceptance"}});
    return out.str();
  };
  const auto a = serialize(10001), b = serialize(10001), c = serialize(10002);
  o.check(a == b, "identical seeds byte-identical (" + std::to_string(a.size()) + " bytes)");
  o.check(a != c, "different seeds differ");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 z2 closed form vs quadrature", ac1},
      {"AC2 sampler correctness at n=2,3", ac2},
      {"AC3 concentration at desk scale", ac3},
      {"AC4 case-b Gaussian cf/variance/KS", ac4},
      {"AC5 case-a mean |S| and sign balance", ac5},
      {"AC6 case-c mode-split laws", ac6},
      {"AC7 importance log Z vs asymptotic", ac7},
      {"AC8 lemma suites", ac8},
      {"AC9 product-case integral vs formula", ac9},
      {"AC10 exact identities and determinism", ac10},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(static_cast<int>(i + 1))) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %s | %s | %.1fs\n", o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
