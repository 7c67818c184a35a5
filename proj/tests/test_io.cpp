#include <gtest/gtest.h>

#include <sstream>

#include "mirrorgas/mirrorgas.hpp"

using namespace mirrorgas;

TEST(TrigPolyJson, RoundTripAndErrors) {
  const TrigPoly g({0.0, 0.0, 0.5}, {1.0});
  EXPECT_EQ(parse_trig_poly(to_json(g).dump()), g);
  EXPECT_EQ(parse_trig_poly(R"({"a":[0,0,0.5],"b":[1]})"), g);
  EXPECT_EQ(parse_trig_poly("sin"), TrigPoly::builtin("sin"));
  EXPECT_THROW(parse_trig_poly(R"({"a":[0],"c":[1]})"), std::invalid_argument);
  EXPECT_THROW(parse_trig_poly(R"({"a":[0],)"), std::invalid_argument);
  EXPECT_THROW(parse_trig_poly(R"({"a":"x"})"), std::invalid_argument);
  EXPECT_THROW(parse_trig_poly("tan"), std::invalid_argument);
}

TEST(LimitLawJson, RoundTrip) {
  for (const char* name : {"sin", "cos", "sin2", "cos2", "case-c"}) {
    const auto law = classify_limit_law(TrigPoly::builtin(name), 2.0);
    const auto j = to_json(law);
    EXPECT_EQ(limit_law_from_json(j), law);
    for (const char* key : {"case", "nu1", "nu2", "m1", "v1", "m2", "v2", "jump"}) EXPECT_TRUE(j.contains(key));
  }
  EXPECT_EQ(to_json(classify_limit_law(TrigPoly::builtin("case-c").reflected(), 2.0))["case"], "c-mirror");
}

TEST(ReportJson, Fields) {
  const Report r{"ks", 0.01, 0.05, true, 100, 10, 2.0, 7};
  const auto j = to_json(r);
  EXPECT_EQ(j.size(), 8u);
  EXPECT_EQ(j["test"], "ks");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_TRUE(to_json(Report{"x", INFINITY, 0, false, 0, 0, 0, 0})["statistic"].is_null());
}

TEST(SampleSetJson, RoundTrip) {
  SamplerConfig sc;
  sc.sweeps = 1500;
  sc.burnin = 1000;
  sc.thin = 5;
  sc.seed = 3;
  const auto s = run_chains(ModelParams(15, 2.0), sc, TrigPoly::builtin("sin2"), 2);
  std::stringstream buf;
  write_sample_set(buf, s, json{{"command", "test"}});
  const std::string text = buf.str();
  const auto loaded = read_sample_set(buf);
  EXPECT_EQ(loaded.header["v"], 1);
  EXPECT_EQ(loaded.header["type"], "header");
  EXPECT_EQ(loaded.header["command"], "test");
  EXPECT_EQ(loaded.samples.records, s.records);
  EXPECT_EQ(loaded.samples.diagnostics, s.diagnostics);
  EXPECT_EQ(*loaded.samples.g, *s.g);
  EXPECT_EQ(loaded.samples.params.n(), 15u);
  EXPECT_EQ(loaded.samples.chains, 2u);
  EXPECT_EQ(*loaded.samples.config.burnin, 1000u);
  std::stringstream again;
  write_sample_set(again, loaded.samples, json{{"command", "test"}});
  EXPECT_EQ(again.str(), text);
}

TEST(SampleSetJson, RecordSchema) {
  SampleRecord r;
  r.sweep = 12;
  r.mode = Mode::minus;
  r.logw = -INFINITY;
  const auto j = to_json(r);
  EXPECT_TRUE(j["stat"].is_null());
  EXPECT_TRUE(j["logw"].is_null());
  EXPECT_EQ(j["mode"], "-");
  EXPECT_EQ(sample_record_from_json(j), r);
}

TEST(SampleSetJson, Malformed) {
  std::stringstream empty;
  EXPECT_THROW(read_sample_set(empty), std::runtime_error);
  std::stringstream bad("{\"type\":\"record\"}\n");
  EXPECT_THROW(read_sample_set(bad), std::runtime_error);
  std::stringstream junk("not json\n");
  EXPECT_THROW(read_sample_set(junk), std::runtime_error);
}
