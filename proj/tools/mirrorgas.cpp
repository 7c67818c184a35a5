#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mirrorgas/mirrorgas.hpp"

namespace mg = mirrorgas;
using mg::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::size_t n = 0;
  double beta = 0.0;
};

struct ChainFlags {
  std::size_t sweeps = 20000;
  std::optional<std::size_t> burnin;
  std::size_t thin = 5;
  std::optional<double> sigma;
  double flip_prob = 0.5;
  std::uint64_t seed = 1;
  bool no_adapt = false;
  double target_accept = 0.4;
  std::size_t chains = 1;
};

void add_model(CLI::App* app, ModelFlags& m) {
  app->add_option("--n", m.n, "number of points")->required()->check(CLI::PositiveNumber);
  app->add_option("--beta", m.beta, "interaction exponent")->required()->check(CLI::PositiveNumber);
}

void add_chain(CLI::App* app, ChainFlags& c) {
  app->add_option("--sweeps", c.sweeps, "total sweeps, burn-in included")->check(CLI::PositiveNumber);
  app->add_option("--burnin", c.burnin, "burn-in sweeps (default max(1000, 20n))");
  app->add_option("--thin", c.thin, "keep every k-th sweep")->check(CLI::PositiveNumber);
  app->add_option("--sigma", c.sigma, "initial proposal std in radians (default 2/sqrt(beta n))");
  app->add_option("--flip-prob", c.flip_prob, "per-sweep reflection probability")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", c.seed, "RNG seed; chain i uses seed + i");
  app->add_flag("--no-adapt", c.no_adapt, "keep the proposal std fixed during burn-in");
  app->add_option("--target-accept", c.target_accept, "burn-in acceptance target")->check(CLI::Range(0.0, 1.0));
  app->add_option("--chains", c.chains, "independent chains (threads capped by MIRRORGAS_THREADS)")
      ->check(CLI::PositiveNumber);
}

mg::SamplerConfig sampler_config(const ChainFlags& c) {
  mg::SamplerConfig sc;
  sc.sweeps = c.sweeps;
  sc.burnin = c.burnin;
  sc.thin = c.thin;
  sc.step_sigma = c.sigma;
  sc.flip_prob = c.flip_prob;
  sc.seed = c.seed;
  sc.adapt = !c.no_adapt;
  sc.target_accept = c.target_accept;
  return sc;
}

/// Every option of the subcommand with its effective value.
json echo_flags(const CLI::App* app) {
  json out = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string key = opt->get_name();
    key.erase(0, key.find_first_not_of('-'));
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_type_size() == 0) {
        out[key] = true;
      } else if (r.size() == 1) {
        out[key] = r.front();
      } else {
        out[key] = r;
      }
    } else if (opt->get_type_size() == 0) {
      out[key] = false;
    } else {
      out[key] = opt->get_default_str().empty() ? json(nullptr) : json(opt->get_default_str());
    }
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << j.dump(2) << '\n';
}

int verdict(const std::vector<mg::Report>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const mg::Report& r) { return r.pass; }) ? kExitPass
                                                                                              : kExitFail;
}

json reports_json(const std::vector<mg::Report>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(mg::to_json(r));
  return a;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

mg::SampleSet sample_inline(const ModelFlags& m, const ChainFlags& c, const std::optional<mg::TrigPoly>& g,
                            double epsilon) {
  const mg::ModelParams p(m.n, m.beta);
  mg::RunOptions opt;
  opt.conc_epsilon = epsilon;
  return mg::run_chains(p, sampler_config(c), g, c.chains, opt);
}

mg::SampleSet load_samples(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open sample file " + path);
  return mg::read_sample_set(f).samples;
}

// ---------------------------------------------------------------- sample

struct SampleCmd {
  ModelFlags model;
  ChainFlags chain;
  std::string g;
  std::string out = "-";
  double epsilon = 1.0 / 15.0;
};

int run_sample(const SampleCmd& a, const CLI::App* app) {
  std::optional<mg::TrigPoly> g;
  if (!a.g.empty()) g = mg::parse_trig_poly(a.g);
  const mg::SampleSet s = sample_inline(a.model, a.chain, g, a.epsilon);
  const json extra{{"command", "sample"}, {"flags", echo_flags(app)}};
  if (a.out.empty() || a.out == "-") {
    mg::write_sample_set(std::cout, s, extra);
  } else {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot open output file " + a.out);
    mg::write_sample_set(f, s, extra);
  }
  return kExitPass;
}

// ---------------------------------------------------------------- zn

struct ZnCmd {
  ModelFlags model;
  std::string methods = "closed2,quadrature,importance,asymptotic";
  std::size_t m = 100000;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out = "-";
};

int run_zn(const ZnCmd& a, const CLI::App* app) {
  const mg::ModelParams p(a.model.n, a.model.beta);
  const auto methods = split(a.methods, ',');
  if (methods.empty()) throw UsageError("--methods is empty");
  for (const auto& name : methods) {
    if (name != "closed2" && name != "quadrature" && name != "importance" && name != "asymptotic") {
      throw UsageError("unknown method " + name);
    }
    if (name == "closed2" && p.n() != 2) throw UsageError("closed2 requires n = 2");
    if (name == "quadrature" && p.n() > mg::kMaxQuadratureN) throw UsageError("quadrature requires n <= 4");
    if (name == "importance" && p.n() < 2) throw UsageError("importance requires n >= 2");
  }
  json results = json::array();
  std::vector<std::pair<std::string, double>> values;
  std::map<std::string, double> errs;
  for (const auto& name : methods) {
    json r;
    if (name == "closed2") {
      const double v = mg::z2_closed_form(p.beta());
      r = json{{"log_value", v}, {"phase", 0.0}, {"stderr", nullptr}, {"method", "closed2"}, {"seed", nullptr}};
      values.emplace_back(name, v);
    } else if (name == "quadrature") {
      const auto q = mg::quadrature_Z(p);
      r = mg::to_json(q);
      values.emplace_back(name, q.value.log_mag);
    } else if (name == "importance") {
      const auto is = mg::importance_log_Z(p, a.m, a.seed);
      r = mg::to_json(is);
      values.emplace_back(name, is.log_value);
      errs[name] = is.stderr_log;
    } else {
      const auto v = mg::asymptotic_log_I(mg::ModeData::zero(), p);
      r = json{{"log_value", v.log_mag}, {"phase", v.phase}, {"stderr", nullptr},
               {"method", "asymptotic"}, {"seed", nullptr},  {"main_term_only", true}};
      values.emplace_back(name, v.log_mag);
    }
    results.push_back(r);
  }
  json diffs = json::array();
  bool pass = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double d = std::abs(values[i].second - values[j].second);
      json e{{"a", values[i].first}, {"b", values[j].first}, {"abs_diff", d}};
      if (a.tol) {
        e["pass"] = d <= *a.tol;
        pass = pass && d <= *a.tol;
      }
      diffs.push_back(e);
    }
  }
  json out{{"v", mg::kSchemaVersion}, {"command", "zn"},   {"flags", echo_flags(app)},
           {"n", p.n()},              {"beta", p.beta()},  {"results", results},
           {"differences", diffs},    {"pass", pass}};
  emit(out, a.out);
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- cf

struct CfCmd {
  std::string samples;
  ModelFlags model;
  ChainFlags chain;
  std::string g;
  double t_min = -2.0;
  double t_max = 2.0;
  std::size_t t_points = 41;
  bool centered = false;
  double tol = 0.1;
  std::string out = "-";
};

int run_cf(const CfCmd& a, const CLI::App* app) {
  mg::SampleSet s;
  if (!a.samples.empty()) {
    s = load_samples(a.samples);
    if (!s.g) throw UsageError("sample file carries no test function");
  } else {
    if (a.model.n == 0 || a.model.beta <= 0.0) throw UsageError("--n and --beta are required without --samples");
    if (a.g.empty()) throw UsageError("--g is required without --samples");
    s = sample_inline(a.model, a.chain, mg::parse_trig_poly(a.g), 1.0 / 15.0);
  }
  if (a.t_points < 1) throw UsageError("--t-points must be positive");
  const mg::ModelParams& p = s.params;
  const mg::ModeJet jet = s.g->jet();
  const double nu1 = 0.5 * (jet.value_plus + jet.value_minus);
  std::vector<double> values = s.stats();
  if (values.empty()) throw std::runtime_error("no retained samples");
  // Centering the data and the prediction by the same phase leaves distances unchanged.
  if (a.centered) {
    for (double& v : values) v -= static_cast<double>(p.n()) * nu1;
  }
  json grid = json::array();
  double sup = 0.0;
  for (std::size_t i = 0; i < a.t_points; ++i) {
    const double t = a.t_points == 1 ? a.t_min
                                     : a.t_min + (a.t_max - a.t_min) * static_cast<double>(i) /
                                                     static_cast<double>(a.t_points - 1);
    const auto emp = mg::empirical_cf(values, t);
    const auto pred = mg::predicted_cf(jet, p, t, a.centered);
    const double d = std::abs(emp - pred);
    sup = std::max(sup, d);
    grid.push_back(json{{"t", t}, {"emp_re", emp.real()}, {"emp_im", emp.imag()},
                        {"pred_re", pred.real()}, {"pred_im", pred.imag()}, {"dist", d}});
  }
  mg::Report r{"cf_sup_distance", sup, a.tol, sup <= a.tol, values.size(), p.n(), p.beta(), s.config.seed};
  json out{{"v", mg::kSchemaVersion}, {"command", "cf"}, {"flags", echo_flags(app)}, {"grid", grid},
           {"sup_distance", sup},     {"main_term_only", true}, {"reports", reports_json({r})}};
  emit(out, a.out);
  return verdict({r});
}

// ---------------------------------------------------------------- limit-law

struct LimitLawCmd {
  std::string samples;
  ModelFlags model;
  ChainFlags chain;
  std::string g;
  double tol_eq = 1e-12;
  double ks_tol = 0.06;
  double atom_band = 0.3;
  double atom_frac = 0.95;
  double balance_tol = 0.05;
  std::size_t bins = 50;
  std::string out = "-";
};

int run_limit_law(const LimitLawCmd& a, const CLI::App* app) {
  mg::SampleSet s;
  if (!a.samples.empty()) {
    s = load_samples(a.samples);
    if (!s.g) throw UsageError("sample file carries no test function");
  } else {
    if (a.model.n == 0 || a.model.beta <= 0.0) throw UsageError("--n and --beta are required without --samples");
    if (a.g.empty()) throw UsageError("--g is required without --samples");
    s = sample_inline(a.model, a.chain, mg::parse_trig_poly(a.g), 1.0 / 15.0);
  }
  const mg::ModelParams& p = s.params;
  const mg::LimitLaw law = mg::classify_limit_law(*s.g, p.beta(), a.tol_eq);
  const double n = static_cast<double>(p.n());
  const double scale = law.kind == mg::LawCase::a ? 1.0 / n : 1.0;

  std::vector<double> plus, minus, all;
  std::size_t mixed = 0;
  for (const auto& r : s.records) {
    if (!r.stat) continue;
    const double v = (*r.stat - n * law.nu1) * scale;
    all.push_back(v);
    if (r.mode == mg::Mode::plus) plus.push_back(v);
    else if (r.mode == mg::Mode::minus) minus.push_back(v);
    else ++mixed;
  }
  if (all.empty()) throw std::runtime_error("no retained samples");

  json out{{"v", mg::kSchemaVersion}, {"command", "limit-law"}, {"flags", echo_flags(app)},
           {"law", mg::to_json(law)},  {"mixed_count", mixed},    {"main_term_only", true}};
  std::vector<mg::Report> reports;
  if (law.kind == mg::LawCase::degenerate) {
    const auto h = mg::histogram(all, a.bins);
    out["histogram"] = json{{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}};
    out["note"] = "limit law unknown in this case; histogram only";
  } else {
    const auto comps = law.components();
    const std::vector<double>* halves[2] = {&plus, &minus};
    const char* names[2] = {"plus", "minus"};
    for (int k = 0; k < 2; ++k) {
      const auto& v = *halves[k];
      const auto& c = comps[k];
      mg::Report r;
      r.m = v.size();
      r.n = p.n();
      r.beta = p.beta();
      r.seed = s.config.seed;
      if (c.var > 0.0) {
        r.test = std::string("ks_") + names[k];
        r.threshold = a.ks_tol;
        const double sd = std::sqrt(c.var);
        r.statistic = v.empty() ? 1.0 : mg::ks_distance(v, [&](double x) {
          return 0.5 * std::erfc(-(x - c.mean) / (sd * std::sqrt(2.0)));
        });
        r.pass = !v.empty() && r.statistic <= a.ks_tol;
      } else {
        r.test = std::string("atom_band_") + names[k];
        r.threshold = a.atom_frac;
        std::size_t inside = 0;
        for (double x : v) inside += std::abs(x - c.mean) <= a.atom_band ? 1 : 0;
        r.statistic = v.empty() ? 0.0 : static_cast<double>(inside) / static_cast<double>(v.size());
        r.pass = !v.empty() && r.statistic >= a.atom_frac;
      }
      reports.push_back(r);
    }
    const double frac_plus = static_cast<double>(plus.size()) / static_cast<double>(all.size());
    reports.push_back(mg::Report{"mode_balance", std::abs(frac_plus - 0.5), a.balance_tol,
                                 std::abs(frac_plus - 0.5) <= a.balance_tol, all.size(), p.n(), p.beta(),
                                 s.config.seed});
  }
  out["reports"] = reports_json(reports);
  emit(out, a.out);
  return verdict(reports);
}

// ---------------------------------------------------------------- concentration

struct ConcentrationCmd {
  ModelFlags model;
  ChainFlags chain;
  double epsilon = 1.0 / 15.0;
  double threshold = 0.95;
  std::string out = "-";
};

int run_concentration(const ConcentrationCmd& a, const CLI::App* app) {
  const mg::ModelParams p(a.model.n, a.model.beta);
  if (!(a.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  const double r = mg::concentration_radius(p.n(), a.epsilon);
  std::uint64_t points = 0, points_inside = 0;
  mg::RunOptions opt;
  opt.conc_epsilon = a.epsilon;
  opt.observer = [&](const mg::Configuration& cfg, const mg::SampleRecord& rec) {
    const double centre = rec.mode == mg::Mode::minus ? -mg::kHalfPi : mg::kHalfPi;
    for (double x : cfg.angles()) {
      points_inside += 2.0 * std::abs(std::sin(0.5 * (x - centre))) <= r ? 1 : 0;
    }
    points += cfg.size();
  };
  const mg::SampleSet s = mg::run_chains(p, sampler_config(a.chain), std::nullopt, a.chain.chains, opt);
  std::size_t hits = 0;
  for (const auto& rec : s.records) hits += rec.conc ? 1 : 0;
  const double freq = static_cast<double>(hits) / static_cast<double>(s.records.size());
  mg::Report rep{"concentration_frequency", freq, a.threshold, freq >= a.threshold, s.records.size(), p.n(),
                 p.beta(), a.chain.seed};
  json out{{"v", mg::kSchemaVersion},
           {"command", "concentration"},
           {"flags", echo_flags(app)},
           {"radius", r},
           {"in_theorem_regime", mg::in_theorem_regime(a.epsilon)},
           {"per_point_inside_fraction", points ? static_cast<double>(points_inside) / static_cast<double>(points) : 0.0},
           {"threshold_is_empirical", true},
           {"reports", reports_json({rep})}};
  emit(out, a.out);
  return verdict({rep});
}

// ---------------------------------------------------------------- lemmas

struct LemmasCmd {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string out = "-";
};

int run_lemmas(const LemmasCmd& a, const CLI::App* app) {
  mg::Rng rng(a.seed);
  std::vector<mg::Report> reports;
  auto report = [&](std::string name, double stat, double thr, bool pass, std::size_t m, std::size_t n) {
    reports.push_back(mg::Report{std::move(name), stat, thr, pass, m, n, 0.0, a.seed});
  };
  auto random_vector = [&](std::size_t len) {
    const double scale = std::pow(10.0, 6.0 * rng.uniform() - 3.0);
    std::vector<double> v(len);
    for (double& x : v) x = scale * rng.normal();
    return v;
  };

  // cos bound on an even grid of [−π, π]: statistic is the largest lhs − rhs
  double worst = -mg::kPosInf;
  for (std::size_t i = 0; i < a.trials; ++i) {
    const double x = -mg::kPi + mg::kTwoPi * static_cast<double>(i) / static_cast<double>(a.trials - 1);
    const auto b = mg::lemma_cos_bound(x);
    worst = std::max(worst, b.lhs - b.rhs);
  }
  report("cos_bound", worst, 0.0, worst <= 1e-15, a.trials, 0);

  for (std::size_t l : {2, 3, 10, 100}) {
    std::size_t bad_quad = 0, bad_quartic = 0;
    for (std::size_t t = 0; t < a.trials; ++t) {
      const auto c = mg::power_sum_inequalities(random_vector(l));
      bad_quad += c.quad_ok ? 0 : 1;
      bad_quartic += c.quartic_ok ? 0 : 1;
    }
    report("power_sum_quadratic_l" + std::to_string(l), static_cast<double>(bad_quad), 0.0, bad_quad == 0, a.trials, l);
    report("power_sum_quartic_l" + std::to_string(l), static_cast<double>(bad_quartic), 0.0, bad_quartic == 0,
           a.trials, l);
  }

  for (std::size_t n : {3, 10, 100}) {
    std::array<double, 4> worst_res{};
    for (std::size_t t = 0; t < a.trials; ++t) {
      const auto res = mg::transform_identities(random_vector(n));
      for (int k = 0; k < 4; ++k) worst_res[k] = std::max(worst_res[k], res[k]);
    }
    const char* names[4] = {"sum", "sum_sq", "pair_sq", "pair_quartic"};
    for (int k = 0; k < 4; ++k) {
      report(std::string("transform_") + names[k] + "_n" + std::to_string(n), worst_res[k], a.tol,
             worst_res[k] <= a.tol, a.trials, n);
    }
  }

  double worst_det = 0.0;
  for (std::size_t n = 1; n <= 50; ++n) {
    for (double s : {-1.0, 0.0, 0.5, 0.9}) worst_det = std::max(worst_det, std::abs(mg::det_identity(n, s)));
  }
  report("det_identity", worst_det, 1e-10, worst_det <= 1e-10, 200, 50);

  json out{{"v", mg::kSchemaVersion}, {"command", "lemmas"}, {"flags", echo_flags(app)},
           {"reports", reports_json(reports)}};
  emit(out, a.out);
  return verdict(reports);
}

// ---------------------------------------------------------------- mw

struct MwCmd {
  double A = 0.25, B = 0.0, C = 0.0, D = 0.0, E = -2.0 / 192.0, F = 0.0;
  double G = 0.0, H = 0.0, I = 0.0, J = 0.3, K = 0.0;
  std::vector<std::size_t> n{200};
  double epsilon = 0.05;
  double tol = 0.05;
  std::string out = "-";
};

int run_mw(const MwCmd& a, const CLI::App* app) {
  if (a.B != 0.0 || a.C != 0.0 || a.D != 0.0 || a.F != 0.0 || a.G != 0.0 || a.H != 0.0 || a.I != 0.0 ||
      a.K != 0.0) {
    throw UsageError("the product-case oracle needs B = C = D = F = G = H = I = K = 0");
  }
  if (!(a.A > 0.0)) throw UsageError("--A must be positive");
  std::vector<mg::Report> reports;
  json rows = json::array();
  std::vector<double> gaps;
  for (std::size_t n : a.n) {
    mg::MWCoeffs c;
    c.A = a.A;
    c.E = a.E;
    c.J = a.J;
    c.n = n;
    c.epsilon = a.epsilon;
    const auto formula = mg::mw_formula(c);
    const double oracle = mg::mw_lhs_product_case(a.A, a.E, a.J, n, a.epsilon);
    const auto cons = mg::mw_constraints(c);
    json row{{"n", n},
             {"formula_log", formula.log_mag},
             {"oracle_log", oracle},
             {"abs_diff", std::abs(formula.log_mag - oracle)},
             {"constraints",
              {{"a", cons.a},
               {"epsilon_bound", cons.epsilon_bound},
               {"epsilon_ok", cons.epsilon_ok},
               {"re_a_positive", cons.re_a_positive},
               {"n_im_a", cons.n_im_a},
               {"max_ratio", cons.max_ratio},
               {"z_factor", cons.z_factor},
               {"error_exponent_main", cons.exponent_main},
               {"error_exponent_cube", cons.exponent_cube}}}};
    if (a.E <= 0.0) {
      const double full = mg::mw_lhs_product_case_full(a.A, a.E, a.J, n);
      row["untruncated_oracle_log"] = full;
      row["untruncated_abs_diff"] = std::abs(formula.log_mag - full);
    }
    rows.push_back(row);
    const double gap = std::abs(formula.log_mag - oracle);
    gaps.push_back(gap);
    reports.push_back(mg::Report{"mw_product_case_n" + std::to_string(n), gap, a.tol, gap <= a.tol, 0, n, 0.0, 0});
  }
  if (gaps.size() >= 2) {
    const bool shrinking = gaps.back() < gaps.front();
    reports.push_back(mg::Report{"mw_trend", gaps.back() - gaps.front(), 0.0, shrinking, 0, a.n.back(), 0.0, 0});
  }
  json out{{"v", mg::kSchemaVersion}, {"command", "mw"}, {"flags", echo_flags(app)}, {"rows", rows},
           {"main_term_only", true},   {"reports", reports_json(reports)}};
  emit(out, a.out);
  return verdict(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mirrorgas: sampler, oracles and asymptotics for the mirror-interaction gas on the circle"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SampleCmd sample;
  auto* s = app.add_subcommand("sample", "run the Metropolis sampler and write JSON lines");
  add_model(s, sample.model);
  add_chain(s, sample.chain);
  s->add_option("--g", sample.g, "test function: sin, cos, sin2, cos2, case-c or {\"a\":[..],\"b\":[..]}");
  s->add_option("--epsilon", sample.epsilon, "concentration exponent for the conc flag");
  s->add_option("--out", sample.out, "output path, - for stdout");

  ZnCmd zn;
  auto* z = app.add_subcommand("zn", "compare log Z_n across methods");
  add_model(z, zn.model);
  z->add_option("--methods", zn.methods, "comma list of closed2, quadrature, importance, asymptotic");
  z->add_option("--m", zn.m, "importance sample count")->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 40));
  z->add_option("--seed", zn.seed, "importance RNG seed");
  z->add_option("--tol", zn.tol, "fail if any pairwise |difference| exceeds this");
  z->add_option("--out", zn.out, "output path, - for stdout");

  CfCmd cf;
  auto* c = app.add_subcommand("cf", "empirical vs predicted characteristic function");
  c->add_option("--samples", cf.samples, "sample file from the sample command");
  c->add_option("--n", cf.model.n, "number of points (inline sampling)");
  c->add_option("--beta", cf.model.beta, "interaction exponent (inline sampling)");
  add_chain(c, cf.chain);
  c->add_option("--g", cf.g, "test function (inline sampling)");
  c->add_option("--t-min", cf.t_min, "grid start");
  c->add_option("--t-max", cf.t_max, "grid end");
  c->add_option("--t-points", cf.t_points, "grid size")->check(CLI::PositiveNumber);
  c->add_flag("--centered", cf.centered, "multiply by exp(-i t n nu1)");
  c->add_option("--tol", cf.tol, "pass threshold on the sup distance");
  c->add_option("--out", cf.out, "output path, - for stdout");

  LimitLawCmd ll;
  auto* l = app.add_subcommand("limit-law", "classify the fluctuation law and test it on samples");
  l->add_option("--samples", ll.samples, "sample file from the sample command");
  l->add_option("--n", ll.model.n, "number of points (inline sampling)");
  l->add_option("--beta", ll.model.beta, "interaction exponent (inline sampling)");
  add_chain(l, ll.chain);
  l->add_option("--g", ll.g, "test function (inline sampling)");
  l->add_option("--tol-eq", ll.tol_eq, "equality tolerance for the case split")->check(CLI::PositiveNumber);
  l->add_option("--ks-tol", ll.ks_tol, "KS threshold for Gaussian components");
  l->add_option("--atom-band", ll.atom_band, "half-width around an atom");
  l->add_option("--atom-frac", ll.atom_frac, "required fraction inside the atom band");
  l->add_option("--balance-tol", ll.balance_tol, "allowed |fraction(+) - 1/2|");
  l->add_option("--bins", ll.bins, "histogram bins in the degenerate case")->check(CLI::PositiveNumber);
  l->add_option("--out", ll.out, "output path, - for stdout");

  ConcentrationCmd conc;
  auto* k = app.add_subcommand("concentration", "frequency of the concentration event");
  add_model(k, conc.model);
  add_chain(k, conc.chain);
  k->add_option("--epsilon", conc.epsilon, "radius exponent, radius n^(-1/2+epsilon)");
  k->add_option("--threshold", conc.threshold, "required event frequency (empirical)");
  k->add_option("--out", conc.out, "output path, - for stdout");

  LemmasCmd lem;
  auto* lm = app.add_subcommand("lemmas", "randomized checks of the auxiliary inequalities and identities");
  lm->add_option("--trials", lem.trials, "random trials per suite")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
  lm->add_option("--seed", lem.seed, "RNG seed");
  lm->add_option("--tol", lem.tol, "relative residual threshold");
  lm->add_option("--out", lem.out, "output path, - for stdout");

  MwCmd mw;
  auto* w = app.add_subcommand("mw", "integral-lemma main term vs separable quadrature");
  for (auto [name, ptr] : std::initializer_list<std::pair<const char*, double*>>{
           {"--A", &mw.A}, {"--B", &mw.B}, {"--C", &mw.C}, {"--D", &mw.D}, {"--E", &mw.E}, {"--F", &mw.F},
           {"--G", &mw.G}, {"--H", &mw.H}, {"--I", &mw.I}, {"--J", &mw.J}, {"--K", &mw.K}}) {
    w->add_option(name, *ptr, std::string("coefficient ") + (name + 2));
  }
  w->add_option("--n", mw.n, "one or more n values; the last must beat the first")->delimiter(',');
  w->add_option("--epsilon", mw.epsilon, "cube half-width exponent, n^(-1/2+epsilon)");
  w->add_option("--tol", mw.tol, "allowed |formula - oracle| in log");
  w->add_option("--out", mw.out, "output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (s->parsed()) return run_sample(sample, s);
    if (z->parsed()) return run_zn(zn, z);
    if (c->parsed()) return run_cf(cf, c);
    if (l->parsed()) return run_limit_law(ll, l);
    if (k->parsed()) return run_concentration(conc, k);
    if (lm->parsed()) return run_lemmas(lem, lm);
    if (w->parsed()) return run_mw(mw, w);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
