#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mirrorgas/asymptotics.hpp"
#include "mirrorgas/oracle.hpp"
#include "mirrorgas/sampler.hpp"
#include "mirrorgas/stats.hpp"
#include "mirrorgas/trig_poly.hpp"

namespace mirrorgas {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

/// Non-finite doubles have no JSON literal; they are written as null, and
/// null log-weights read back as −∞.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double number_or(const json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

}  // namespace detail

inline json to_json(const TrigPoly& g) { return json{{"a", g.cos_coeffs()}, {"b", g.sin_coeffs()}}; }

inline TrigPoly trig_poly_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("test function JSON must be an object with \"a\" and \"b\"");
  for (const auto& [key, _] : j.items()) {
    if (key != "a" && key != "b") throw std::invalid_argument("unexpected key in test function JSON: " + key);
  }
  std::vector<double> a = j.contains("a") ? j.at("a").get<std::vector<double>>() : std::vector<double>{};
  std::vector<double> b = j.contains("b") ? j.at("b").get<std::vector<double>>() : std::vector<double>{};
  return TrigPoly(std::move(a), std::move(b));
}

/// A builtin name (sin, cos, sin2, cos2, case-c) or a JSON object.
inline TrigPoly parse_trig_poly(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed test function JSON: ") + e.what());
    }
    try {
      return trig_poly_from_json(j);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("malformed test function JSON: ") + e.what());
    }
  }
  return TrigPoly::builtin(text);
}

inline json to_json(const LimitLaw& law) {
  return json{{"case", std::string(to_string(law.kind))},
              {"nu1", law.nu1},
              {"nu2", law.nu2},
              {"m1", law.m1},
              {"v1", law.v1},
              {"m2", law.m2},
              {"v2", law.v2},
              {"jump", law.jump}};
}

inline LimitLaw limit_law_from_json(const json& j) {
  LimitLaw law;
  law.kind = law_case_from_string(j.at("case").get<std::string>());
  law.nu1 = j.at("nu1").get<double>();
  law.nu2 = j.at("nu2").get<double>();
  law.m1 = j.at("m1").get<double>();
  law.v1 = j.at("v1").get<double>();
  law.m2 = j.at("m2").get<double>();
  law.v2 = j.at("v2").get<double>();
  law.jump = j.at("jump").get<double>();
  return law;
}

inline json to_json(const Report& r) {
  return json{{"test", r.test},           {"statistic", detail::finite_or_null(r.statistic)},
              {"threshold", r.threshold}, {"pass", r.pass},
              {"m", r.m},                 {"n", r.n},
              {"beta", r.beta},           {"seed", r.seed}};
}

inline json to_json(const QuadratureResult& r) {
  return json{{"log_value", detail::finite_or_null(r.value.log_mag)},
              {"phase", r.value.phase},
              {"stderr", nullptr},
              {"rel_error", r.rel_error},
              {"method", "quadrature"},
              {"nodes", r.nodes},
              {"seed", nullptr}};
}

inline json to_json(const ImportanceResult& r) {
  return json{{"log_value", r.log_value}, {"phase", 0.0},    {"stderr", r.stderr_log},
              {"method", "importance"},   {"m", r.m},        {"seed", r.seed},
              {"ess", r.ess},             {"low_ess", r.low_ess}, {"outside_fraction", r.outside_fraction}};
}

inline json to_json(const SamplerConfig& c) {
  return json{{"sweeps", c.sweeps},
              {"burnin", c.burnin ? json(*c.burnin) : json(nullptr)},
              {"thin", c.thin},
              {"step_sigma", c.step_sigma ? json(*c.step_sigma) : json(nullptr)},
              {"flip_prob", c.flip_prob},
              {"seed", c.seed},
              {"adapt", c.adapt},
              {"target_accept", c.target_accept}};
}

inline SamplerConfig sampler_config_from_json(const json& j) {
  SamplerConfig c;
  c.sweeps = j.at("sweeps").get<std::size_t>();
  if (!j.at("burnin").is_null()) c.burnin = j.at("burnin").get<std::size_t>();
  c.thin = j.at("thin").get<std::size_t>();
  if (!j.at("step_sigma").is_null()) c.step_sigma = j.at("step_sigma").get<double>();
  c.flip_prob = j.at("flip_prob").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.adapt = j.at("adapt").get<bool>();
  c.target_accept = j.at("target_accept").get<double>();
  return c;
}

inline json to_json(const ChainDiagnostics& d) {
  return json{{"accept_rate", d.accept_rate},   {"burnin_accept_rate", d.burnin_accept_rate},
              {"final_sigma", d.final_sigma},   {"sigma_history", d.sigma_history},
              {"proposals", d.proposals},       {"accepts", d.accepts},
              {"flips", d.flips},               {"max_resync_drift", detail::finite_or_null(d.max_resync_drift)},
              {"seed", d.seed}};
}

inline ChainDiagnostics chain_diagnostics_from_json(const json& j) {
  ChainDiagnostics d;
  d.accept_rate = j.at("accept_rate").get<double>();
  d.burnin_accept_rate = j.at("burnin_accept_rate").get<double>();
  d.final_sigma = j.at("final_sigma").get<double>();
  d.sigma_history = j.at("sigma_history").get<std::vector<double>>();
  d.proposals = j.at("proposals").get<std::uint64_t>();
  d.accepts = j.at("accepts").get<std::uint64_t>();
  d.flips = j.at("flips").get<std::uint64_t>();
  d.max_resync_drift = detail::number_or(j.at("max_resync_drift"), kPosInf);
  d.seed = j.at("seed").get<std::uint64_t>();
  return d;
}

inline json to_json(const SampleRecord& r) {
  return json{{"sweep", r.sweep},
              {"stat", r.stat ? json(*r.stat) : json(nullptr)},
              {"mode", std::string(to_string(r.mode))},
              {"conc", r.conc},
              {"logw", detail::finite_or_null(r.logw)}};
}

inline SampleRecord sample_record_from_json(const json& j) {
  SampleRecord r;
  r.sweep = j.at("sweep").get<std::size_t>();
  if (!j.at("stat").is_null()) r.stat = j.at("stat").get<double>();
  r.mode = mode_from_string(j.at("mode").get<std::string>());
  r.conc = j.at("conc").get<bool>();
  r.logw = detail::number_or(j.at("logw"), kNegInf);
  return r;
}

/// Header record: schema version, model, resolved sampler config, test
/// function, seed and per-chain diagnostics. `extra` is merged in verbatim
/// (the CLI uses it to echo its flags).
inline json sample_header(const SampleSet& s, const json& extra = json::object()) {
  json h{{"v", kSchemaVersion},
         {"type", "header"},
         {"n", s.params.n()},
         {"beta", s.params.beta()},
         {"config", to_json(s.config)},
         {"g", s.g ? to_json(*s.g) : json(nullptr)},
         {"conc_epsilon", s.conc_epsilon},
         {"chains", s.chains},
         {"seed", s.config.seed},
         {"records", s.records.size()}};
  json diags = json::array();
  for (const auto& d : s.diagnostics) diags.push_back(to_json(d));
  h["diagnostics"] = diags;
  for (const auto& [k, v] : extra.items()) h[k] = v;
  return h;
}

inline void write_sample_set(std::ostream& out, const SampleSet& s, const json& extra = json::object()) {
  out << sample_header(s, extra).dump() << '\n';
  for (const auto& r : s.records) out << to_json(r).dump() << '\n';
}

struct LoadedSamples {
  SampleSet samples;
  json header;
};

inline LoadedSamples read_sample_set(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sample file is empty");
  LoadedSamples out;
  try {
    out.header = json::parse(line);
    if (out.header.at("type") != "header") throw std::runtime_error("first record is not a header");
    if (out.header.at("v") != kSchemaVersion) throw std::runtime_error("unsupported schema version");
    SampleSet& s = out.samples;
    s.params = ModelParams(out.header.at("n").get<std::size_t>(), out.header.at("beta").get<double>());
    s.config = sampler_config_from_json(out.header.at("config"));
    if (!out.header.at("g").is_null()) s.g = trig_poly_from_json(out.header.at("g"));
    s.conc_epsilon = out.header.at("conc_epsilon").get<double>();
    s.chains = out.header.at("chains").get<std::size_t>();
    for (const auto& d : out.header.at("diagnostics")) s.diagnostics.push_back(chain_diagnostics_from_json(d));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      s.records.push_back(sample_record_from_json(json::parse(line)));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed sample file: ") + e.what());
  }
  return out;
}

}  // namespace mirrorgas
