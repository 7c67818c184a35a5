#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mirrorgas/mirrorgas.hpp"

using namespace mirrorgas;

namespace {

double log_I_zero(double n, double b) {
  return (b * n * (n - 1) / 2 + 0.5) * std::log(2.0) + n / 2 * std::log(8 * kPi / (b * n)) + 1 - 1 / (2 * b);
}

std::vector<double> t_grid() {
  std::vector<double> t(41);
  for (int i = 0; i < 41; ++i) t[i] = -2.0 + 0.1 * i;
  return t;
}

}  // namespace

TEST(Condition, Examples) {
  const auto z = check_condition(ModeData::zero(), 2.0);
  EXPECT_TRUE(z.ok);
  EXPECT_NEAR(z.margin, -2.0 * std::log(std::cos(kPi / 16)), 1e-15);
  for (const char* name : {"sin", "cos", "sin2", "cos2", "case-c"}) {
    EXPECT_TRUE(check_condition(ModeData::from_trig(TrigPoly::builtin(name), {0.0, 3.7}), 0.1).ok) << name;
  }
  ModeData md;
  md.sup_re = 1.0;
  md.value_plus = 0.99;
  md.value_minus = 0.9;
  EXPECT_FALSE(check_condition(md, 2.0).ok);
  EXPECT_LT(check_condition(md, 2.0).margin, 0.0);
  EXPECT_THROW(asymptotic_log_I(md, ModelParams(10, 2.0)), ConditionViolated);
}

TEST(Condition, RealTrigSupremum) {
  // f = 0.01·sin has M(f) = 0.01 and Re f(−π/2) = −0.01
  const auto md = ModeData::from_trig(TrigPoly::builtin("sin"), {0.01, 0.0});
  EXPECT_NEAR(md.sup_re, 0.01, 1e-12);
  EXPECT_NEAR(check_condition(md, 2.0).margin, -0.01 - (0.01 + 2.0 * std::log(std::cos(kPi / 16))), 1e-12);
}

TEST(AsymptoticLogI, ZeroFunction) {
  for (std::size_t n : {3u, 50u, 1000u}) {
    for (double b : {0.5, 2.0, 7.0}) {
      const auto v = asymptotic_log_I(ModeData::zero(), ModelParams(n, b));
      EXPECT_NEAR(v.log_mag, log_I_zero(static_cast<double>(n), b), 1e-9 * std::abs(v.log_mag));
      EXPECT_EQ(v.phase, 0.0);
    }
  }
}

TEST(AsymptoticLogI, ShiftRule) {
  const ModelParams p(37, 2.0);
  const auto md = ModeData::from_trig(TrigPoly::builtin("case-c"), {0.0, 0.8});
  const auto base = asymptotic_log_I(md, p);
  for (cplx c : {cplx(0.25, 0.0), cplx(0.0, 0.01), cplx(-0.1, 0.003)}) {
    const auto shifted = asymptotic_log_I(md.shifted(c), p);
    EXPECT_NEAR(shifted.log_mag, base.log_mag + 37.0 * c.real(), 1e-12 * std::abs(base.log_mag));
    EXPECT_NEAR(std::remainder(shifted.phase - base.phase - 37.0 * c.imag(), kTwoPi), 0.0, 1e-12);
  }
}

TEST(AsymptoticLogI, Sin2AtUnitT) {
  const ModelParams p(100, 2.0);
  const auto md = ModeData::from_trig(TrigPoly::builtin("sin2"), {0.0, 1.0});
  EXPECT_EQ(md.d1_plus, cplx(0.0, -2.0));
  EXPECT_EQ(md.d1_minus, cplx(0.0, -2.0));
  const auto v = asymptotic_log_I(md, p);
  EXPECT_NEAR(v.log_mag, log_I_zero(100, 2.0) - 2.0, 1e-9);
  EXPECT_NEAR(v.phase, 0.0, 1e-15);
}

TEST(AsymptoticLogI, RatioOfMainTerms) {
  // for f = itg the prefactor cancels and only f′(±π/2)²/β survives
  const ModelParams p(3, 2.0);
  const auto g = TrigPoly::builtin("sin2");
  const double t = 0.05;
  const auto ratio_main = asymptotic_log_I(ModeData::from_trig(g, {0.0, t}), p).log_mag -
                          asymptotic_log_I(ModeData::zero(), p).log_mag;
  EXPECT_NEAR(ratio_main, -4.0 * t * t / 2.0, 1e-12);
}

TEST(PredictedCf, Identities) {
  const ModelParams p(77, 1.3);
  for (const char* name : {"sin", "cos", "sin2", "cos2", "case-c"}) {
    const auto g = TrigPoly::builtin(name);
    EXPECT_EQ(predicted_cf(g, p, 0.0), cplx(1.0, 0.0)) << name;
    EXPECT_EQ(predicted_cf(g, p, 0.0, true), cplx(1.0, 0.0)) << name;
    for (double t : t_grid()) {
      const auto v = predicted_cf(g, p, t);
      EXPECT_LE(std::abs(v), 1.0 + 1e-15);
      EXPECT_LT(std::abs(predicted_cf(g, p, -t) - std::conj(v)), 1e-13);
    }
  }
}

TEST(PredictedCf, Examples) {
  const auto sin2 = TrigPoly::builtin("sin2");
  const auto sin = TrigPoly::builtin("sin");
  for (double t : t_grid()) {
    const auto a = predicted_cf(sin2, ModelParams(500, 2.0), t);
    EXPECT_NEAR(a.real(), std::exp(-2 * t * t), 1e-14);
    EXPECT_NEAR(a.imag(), 0.0, 1e-14);
    for (double b : {1.0, 2.0, 3.0}) {
      const auto c = predicted_cf(sin, ModelParams(200, b), t);
      EXPECT_NEAR(c.real(), std::cos(t * (200 - 2 / b)), 1e-11);
      EXPECT_NEAR(c.imag(), 0.0, 1e-11);
    }
  }
}

TEST(PredictedCf, CenteredMultipliesByPhase) {
  const auto g = TrigPoly({0.3}, {1.0, 0.2});
  const ModelParams p(40, 2.0);
  const auto j = g.jet();
  const double nu1 = 0.5 * (j.value_plus + j.value_minus);
  for (double t : t_grid()) {
    const auto expect = predicted_cf(g, p, t) * std::polar(1.0, -t * 40 * nu1);
    EXPECT_LT(std::abs(predicted_cf(g, p, t, true) - expect), 1e-12);
  }
}

TEST(LimitLaw, Classification) {
  const auto a = classify_limit_law(TrigPoly::builtin("sin"), 2.0);
  EXPECT_EQ(a.kind, LawCase::a);
  EXPECT_EQ(a.jump, 1.0);
  EXPECT_EQ(a.nu1, 0.0);

  const auto c = classify_limit_law(TrigPoly::builtin("case-c"), 2.0);
  EXPECT_EQ(c.kind, LawCase::c);
  EXPECT_NEAR(c.v1, 8.0 / 2.0, 1e-15);
  EXPECT_EQ(c.m1, 0.0);
  EXPECT_EQ(c.v2, 0.0);
  EXPECT_EQ(c.atoms(), std::vector<double>{0.0});

  const auto cm = classify_limit_law(TrigPoly::builtin("case-c").reflected(), 2.0);
  EXPECT_EQ(cm.kind, LawCase::c_mirror);
  EXPECT_EQ(cm.v1, 0.0);
  EXPECT_NEAR(cm.v2, 4.0, 1e-15);

  const auto b = classify_limit_law(TrigPoly::builtin("sin2"), 2.0);
  EXPECT_EQ(b.kind, LawCase::b);
  EXPECT_EQ(b.v1, 4.0);
  EXPECT_EQ(b.v2, 4.0);

  const auto cosb = classify_limit_law(TrigPoly::builtin("cos"), 3.0);
  EXPECT_EQ(cosb.kind, LawCase::b);
  EXPECT_NEAR(cosb.v1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(cosb.v2, 2.0 / 3.0, 1e-15);

  const auto deg = classify_limit_law(TrigPoly::builtin("cos2"), 2.0);
  EXPECT_EQ(deg.kind, LawCase::degenerate);
  EXPECT_EQ(deg.nu1, -1.0);
  EXPECT_THROW(deg.components(), UnsupportedLaw);
  EXPECT_THROW(limit_cf(deg, 0.5), UnsupportedLaw);

  // sin θ + sin 3θ: equal values, flat at both modes, g″(±π/2) = ±8
  const auto d = classify_limit_law(TrigPoly({0.0}, {1.0, 0.0, 1.0}), 2.0);
  EXPECT_EQ(d.kind, LawCase::d);
  EXPECT_NEAR(d.jump, 8.0, 1e-13);
  EXPECT_NEAR(d.m1, 8.0, 1e-13);
  EXPECT_NEAR(d.m2, -8.0, 1e-13);
}

TEST(LimitLaw, ToleranceIsHonoured) {
  const TrigPoly g({0.0}, {1e-9, 1.0});
  EXPECT_EQ(classify_limit_law(g, 2.0).kind, LawCase::a);
  EXPECT_EQ(classify_limit_law(g, 2.0, 1e-6).kind, LawCase::b);
  EXPECT_THROW(classify_limit_law(g, 2.0, 0.0), std::invalid_argument);
}

TEST(LimitLaw, InvariantUnderConstantShift) {
  for (const char* name : {"sin", "cos", "sin2", "cos2", "case-c"}) {
    const auto g = TrigPoly::builtin(name);
    auto a = classify_limit_law(g, 1.7);
    const auto b = classify_limit_law(g.shifted(2.5), 1.7);
    EXPECT_NEAR(b.nu1, a.nu1 + 2.5, 1e-15) << name;
    a.nu1 = b.nu1;
    EXPECT_EQ(a, b) << name;
  }
}

TEST(LimitLaw, CfIsComponentAverage) {
  for (const char* name : {"sin", "cos", "sin2", "case-c"}) {
    const auto law = classify_limit_law(TrigPoly::builtin(name), 2.0);
    const auto cs = law.components();
    for (double t : t_grid()) {
      const cplx c0 = std::exp(cplx(-0.5 * cs[0].var * t * t, cs[0].mean * t));
      const cplx c1 = std::exp(cplx(-0.5 * cs[1].var * t * t, cs[1].mean * t));
      EXPECT_LE(std::abs(limit_cf(law, t) - 0.5 * (c0 + c1)), 1e-14);
    }
  }
}

TEST(LimitLaw, CdfShape) {
  const auto law = classify_limit_law(TrigPoly::builtin("case-c"), 2.0);
  EXPECT_NEAR(limit_cdf(law, -1e6), 0.0, 1e-15);
  EXPECT_NEAR(limit_cdf(law, 1e6), 1.0, 1e-15);
  EXPECT_NEAR(limit_cdf(law, 0.0) - limit_cdf_left(law, 0.0), 0.5, 1e-15);
  double prev = 0.0;
  for (double x = -10; x <= 10; x += 0.01) {
    const double v = limit_cdf(law, x);
    EXPECT_GE(v, prev);
    prev = v;
  }
  const auto a = classify_limit_law(TrigPoly::builtin("sin"), 2.0);
  EXPECT_EQ(limit_cdf(a, -1.0), 0.5);
  EXPECT_EQ(limit_cdf_left(a, -1.0), 0.0);
  EXPECT_EQ(limit_cdf(a, 0.0), 0.5);
  EXPECT_EQ(limit_cdf(a, 1.0), 1.0);
}

TEST(LimitLaw, SamplerMoments) {
  const auto law = classify_limit_law(TrigPoly::builtin("sin2"), 2.0);
  Rng rng(77);
  std::vector<double> v(1000000);
  for (double& x : v) x = sample_limit(law, rng);
  EXPECT_NEAR(mean(v), 0.0, 0.01);
  EXPECT_NEAR(variance(v), 4.0, 0.03);
}

TEST(LimitLaw, SamplerMatchesCf) {
  const auto law = classify_limit_law(TrigPoly::builtin("case-c"), 2.0);
  Rng rng(78);
  std::vector<double> v(1000000);
  for (double& x : v) x = sample_limit(law, rng);
  const auto t = t_grid();
  EXPECT_LE(cf_sup_distance(v, [&](double s) { return limit_cf(law, s); }, t), 0.005);
}

TEST(MwFormula, Reductions) {
  MWCoeffs c;
  c.A = 0.37;
  c.n = 123;
  EXPECT_NEAR(mw_formula(c).log_mag, 61.5 * std::log(kPi / (0.37 * 123)), 1e-12);
  const double base = mw_formula(c).log_mag;
  c.J = 0.4;
  EXPECT_NEAR(mw_formula(c).log_mag - base, 0.16 / (4 * 0.37), 1e-12);
  c.A = -1.0;
  EXPECT_THROW(mw_formula(c), std::domain_error);
}

TEST(MwFormula, FullExpression) {
  MWCoeffs c;
  c.A = 0.5;
  c.B = 0.1;
  c.C = -0.2;
  c.E = -0.03;
  c.F = 0.07;
  c.J = 0.3;
  c.n = 50;
  const double expect = 25 * std::log(kPi / 25.0) + 0.09 / 2.0 + (3 * -0.03 + 0.07 + (-0.2 + 0.3) * 0.3) / 1.0 +
                        (15 * 0.01 + 6 * 0.1 * -0.2 + 0.04) / 2.0;
  EXPECT_NEAR(mw_formula(c).log_mag, expect, 1e-12);
}

TEST(MwFormula, Constraints) {
  MWCoeffs c;
  c.A = 0.25;
  c.E = -1.0 / 96.0;
  c.n = 200;
  c.epsilon = 0.05;
  auto r = mw_constraints(c);
  EXPECT_EQ(r.a, 7.0);
  EXPECT_TRUE(r.epsilon_ok);
  EXPECT_NEAR(r.exponent_main, -0.5 + 0.35, 1e-15);
  EXPECT_EQ(r.z_factor, 1.0);
  c.D = 0.1;
  c.epsilon = 0.06;
  r = mw_constraints(c);
  EXPECT_EQ(r.a, 9.0);
  EXPECT_FALSE(r.epsilon_ok);
}

TEST(MwProductCase, GaussianTruncationOracle) {
  // E = J = 0: n·log(√(π/(An)) · erf(r√(An)))
  for (std::size_t n : {200u, 800u, 10000u}) {
    const double A = 0.25, eps = 1.0 / 15.0;
    const double nd = static_cast<double>(n);
    const double r = std::pow(nd, -0.5 + eps);
    const double oracle = nd * std::log(std::erf(r * std::sqrt(A * nd))) + 0.5 * nd * std::log(kPi / (A * nd));
    EXPECT_NEAR(mw_lhs_product_case(A, 0.0, 0.0, n, eps), oracle, 1e-8 * std::abs(oracle));
  }
}

TEST(MwProductCase, SignSymmetry) {
  EXPECT_NEAR(mw_lhs_product_case(0.25, -0.01, 0.3, 200, 0.05), mw_lhs_product_case(0.25, -0.01, -0.3, 200, 0.05),
              1e-9);
}

TEST(MwProductCase, UntruncatedIntegralMatchesFormula) {
  // without the cube the separable integral carries no truncation loss
  MWCoeffs c;
  c.A = 0.25;
  c.E = -2.0 / 192.0;
  c.J = 0.3;
  for (std::size_t n : {200u, 800u}) {
    c.n = n;
    EXPECT_NEAR(mw_lhs_product_case_full(0.25, c.E.real(), 0.3, n), mw_formula(c).log_mag, 0.05);
  }
  EXPECT_THROW(mw_lhs_product_case_full(0.25, 0.1, 0.0, 10), std::domain_error);
}
