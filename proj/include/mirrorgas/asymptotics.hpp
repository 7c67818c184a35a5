#pragma once

// Main-term evaluators for the large-n asymptotics. Every formula here drops
// the O(n^{-ζ}) corrections; nothing in this file claims an error bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mirrorgas/angles.hpp"
#include "mirrorgas/log_complex.hpp"
#include "mirrorgas/model.hpp"
#include "mirrorgas/rng.hpp"
#include "mirrorgas/trig_poly.hpp"

namespace mirrorgas {

using cplx = std::complex<double>;

/// f and its first two derivatives at ±π/2, plus M(f) = sup Re f.
struct ModeData {
  cplx value_plus, value_minus;
  cplx d1_plus, d1_minus;
  cplx d2_plus, d2_minus;
  double sup_re = 0.0;

  /// f = scale·g for a real trigonometric polynomial g.
  static ModeData from_trig(const TrigPoly& g, cplx scale) {
    double sup = 0.0;
    if (scale.real() != 0.0) {
      const auto r = g.range();
      sup = scale.real() > 0.0 ? scale.real() * r.max : scale.real() * r.min;
    }
    return from_jet(g.jet(), scale, sup);
  }

  /// From user-supplied values at ±π/2; `sup_re` must be M(scale·g).
  static ModeData from_jet(const ModeJet& j, cplx scale, double sup_re) {
    ModeData md;
    md.value_plus = scale * j.value_plus;
    md.value_minus = scale * j.value_minus;
    md.d1_plus = scale * j.d1_plus;
    md.d1_minus = scale * j.d1_minus;
    md.d2_plus = scale * j.d2_plus;
    md.d2_minus = scale * j.d2_minus;
    md.sup_re = sup_re;
    return md;
  }

  static ModeData zero() { return {}; }

  /// f + c.
  ModeData shifted(cplx c) const {
    ModeData md = *this;
    md.value_plus += c;
    md.value_minus += c;
    md.sup_re += c.real();
    return md;
  }
};

struct ConditionCheck {
  bool ok = false;
  double margin = 0.0;  // min Re f(±π/2) − (M(f) + β log cos(π/16))
};

inline ConditionCheck check_condition(const ModeData& md, double beta) {
  const double lhs = md.sup_re + beta * std::log(std::cos(kPi / 16.0));
  const double margin = std::min(md.value_plus.real(), md.value_minus.real()) - lhs;
  return {margin > 0.0, margin};
}

class ConditionViolated : public std::domain_error {
 public:
  explicit ConditionViolated(double margin)
      : std::domain_error("growth condition violated (margin " + std::to_string(margin) + ")"), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// log of the main term of I(f):
/// 2^{βn(n−1)/2 − 1/2} (8π/(βn))^{n/2} e^{1 − 1/(2β)} Σ_± e^{n f(±π/2) + f′(±π/2)²/β + 2f″(±π/2)/β}.
inline LogComplex asymptotic_log_I(const ModeData& md, const ModelParams& p) {
  const auto check = check_condition(md, p.beta());
  if (!check.ok) throw ConditionViolated(check.margin);
  const double n = static_cast<double>(p.n());
  const double b = p.beta();
  const double prefactor = (b * n * (n - 1.0) / 2.0 - 0.5) * kLn2 + 0.5 * n * std::log(8.0 * kPi / (b * n)) + 1.0 -
                           1.0 / (2.0 * b);
  auto mode_term = [&](cplx f, cplx d1, cplx d2) { return n * f + d1 * d1 / b + 2.0 * d2 / b; };
  const LogComplex sum = LogComplex::from_log(mode_term(md.value_plus, md.d1_plus, md.d2_plus)) +
                         LogComplex::from_log(mode_term(md.value_minus, md.d1_minus, md.d2_minus));
  if (sum.is_zero()) return sum;
  return {sum.log_mag + prefactor, sum.phase};
}

/// Main term of E[exp(it Σ g(θ_j))], optionally times e^{−itnν₁}.
inline cplx predicted_cf(const ModeJet& j, const ModelParams& p, double t, bool centered = false) {
  const double n = static_cast<double>(p.n());
  const double b = p.beta();
  const double nu1 = centered ? 0.5 * (j.value_plus + j.value_minus) : 0.0;
  auto term = [&](double g, double d1, double d2) {
    const double phase = n * t * (g - nu1) + 2.0 * d2 * t / b;
    return 0.5 * std::polar(std::exp(-d1 * d1 * t * t / b), phase);
  };
  return term(j.value_plus, j.d1_plus, j.d2_plus) + term(j.value_minus, j.d1_minus, j.d2_minus);
}

inline cplx predicted_cf(const TrigPoly& g, const ModelParams& p, double t, bool centered = false) {
  return predicted_cf(g.jet(), p, t, centered);
}

enum class LawCase { a, b, c, c_mirror, d, degenerate };

inline std::string_view to_string(LawCase c) {
  switch (c) {
    case LawCase::a: return "a";
    case LawCase::b: return "b";
    case LawCase::c: return "c";
    case LawCase::c_mirror: return "c-mirror";
    case LawCase::d: return "d";
    case LawCase::degenerate: return "degenerate";
  }
  return "degenerate";
}

inline LawCase law_case_from_string(std::string_view s) {
  for (LawCase c : {LawCase::a, LawCase::b, LawCase::c, LawCase::c_mirror, LawCase::d, LawCase::degenerate}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown limit-law case: " + std::string(s));
}

class UnsupportedLaw : public std::domain_error {
 public:
  UnsupportedLaw() : std::domain_error("no limit law is available in the degenerate case") {}
};

/// Limit of S − nν₁ (cases b, c, c-mirror, d) or of (S − nν₁)/n (case a),
/// always of the form ½·L₁ + ½·L₂ with L_i Gaussian or an atom.
struct LimitLaw {
  LawCase kind = LawCase::b;
  double nu1 = 0.0;
  double nu2 = 0.0;
  double m1 = 0.0, v1 = 0.0;
  double m2 = 0.0, v2 = 0.0;
  double jump = 0.0;

  struct Component {
    double mean;
    double var;  // 0 means an atom at `mean`
  };

  std::array<Component, 2> components() const {
    switch (kind) {
      case LawCase::a: return {{{jump, 0.0}, {-jump, 0.0}}};
      case LawCase::b: return {{{m1, v1}, {m2, v2}}};
      case LawCase::c: return {{{m1, v1}, {m2, 0.0}}};
      case LawCase::c_mirror: return {{{m1, 0.0}, {m2, v2}}};
      case LawCase::d: return {{{m1, 0.0}, {m2, 0.0}}};
      case LawCase::degenerate: break;
    }
    throw UnsupportedLaw();
  }

  std::vector<double> atoms() const {
    std::vector<double> out;
    for (const auto& c : components()) {
      if (c.var == 0.0) out.push_back(c.mean);
    }
    return out;
  }

  friend bool operator==(const LimitLaw&, const LimitLaw&) = default;
};

inline LimitLaw classify_limit_law(const ModeJet& j, double beta, double tol = 1e-12) {
  if (!(beta > 0.0)) throw std::invalid_argument("classify_limit_law: beta must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("classify_limit_law: tol must be positive");
  LimitLaw law;
  law.nu1 = 0.5 * (j.value_plus + j.value_minus);
  law.nu2 = (j.d2_plus + j.d2_minus) / beta;
  law.m1 = 2.0 * j.d2_plus / beta;
  law.v1 = 2.0 * j.d1_plus * j.d1_plus / beta;
  law.m2 = 2.0 * j.d2_minus / beta;
  law.v2 = 2.0 * j.d1_minus * j.d1_minus / beta;
  if (std::abs(j.value_plus - j.value_minus) > tol) {
    law.kind = LawCase::a;
    law.jump = 0.5 * (j.value_plus - j.value_minus);
    return law;
  }
  const bool flat_plus = std::abs(j.d1_plus) <= tol;
  const bool flat_minus = std::abs(j.d1_minus) <= tol;
  if (!flat_plus && !flat_minus) {
    law.kind = LawCase::b;
  } else if (!flat_plus) {
    law.kind = LawCase::c;
    law.v2 = 0.0;
  } else if (!flat_minus) {
    law.kind = LawCase::c_mirror;
    law.v1 = 0.0;
  } else {
    law.v1 = law.v2 = 0.0;
    law.jump = (j.d2_plus - j.d2_minus) / beta;
    law.kind = std::abs(j.d2_plus - j.d2_minus) <= tol ? LawCase::degenerate : LawCase::d;
  }
  return law;
}

inline LimitLaw classify_limit_law(const TrigPoly& g, double beta, double tol = 1e-12) {
  return classify_limit_law(g.jet(), beta, tol);
}

inline cplx component_cf(const LimitLaw::Component& c, double t) {
  return std::polar(std::exp(-0.5 * c.var * t * t), c.mean * t);
}

inline cplx limit_cf(const LimitLaw& law, double t) {
  const auto cs = law.components();
  return 0.5 * component_cf(cs[0], t) + 0.5 * component_cf(cs[1], t);
}

namespace detail {

inline double component_cdf(const LimitLaw::Component& c, double x, bool left) {
  if (c.var == 0.0) return left ? (x > c.mean ? 1.0 : 0.0) : (x >= c.mean ? 1.0 : 0.0);
  return 0.5 * std::erfc(-(x - c.mean) / std::sqrt(2.0 * c.var));
}

}  // namespace detail

/// P(X ≤ x).
inline double limit_cdf(const LimitLaw& law, double x) {
  const auto cs = law.components();
  return 0.5 * detail::component_cdf(cs[0], x, false) + 0.5 * detail::component_cdf(cs[1], x, false);
}

/// P(X < x).
inline double limit_cdf_left(const LimitLaw& law, double x) {
  const auto cs = law.components();
  return 0.5 * detail::component_cdf(cs[0], x, true) + 0.5 * detail::component_cdf(cs[1], x, true);
}

inline double sample_limit(const LimitLaw& law, Rng& rng) {
  const auto cs = law.components();
  const auto& c = rng.uniform() < 0.5 ? cs[0] : cs[1];
  const double z = rng.normal();
  return c.var == 0.0 ? c.mean : c.mean + std::sqrt(c.var) * z;
}

/// Coefficients of the exponent −Anμ₂ + Bnμ₃ + Cμ₁μ₂ + Dμ₁³/n + Enμ₄ + Fμ₂²
/// + Gμ₁μ₃ + Hμ₁²μ₂/n + Iμ₁⁴/n² + Jμ₁ + Kμ₁²/n on the cube |y_j| ≤ n^{−1/2+ε}.
struct MWCoeffs {
  cplx A{1.0, 0.0}, B, C, D, E, F, G, H, I, J, K;
  std::size_t n = 1;
  double epsilon = 0.05;
};

/// Hypotheses of the integral lemma, evaluated rather than assumed, plus the
/// quantities that appear in its error term.
struct MWConstraintReport {
  double a = 9.0;  // 7 when D ≡ 0
  double epsilon_bound = 1.0 / 18.0;
  bool epsilon_ok = false;  // 0 < ε < 1/(2a)
  bool re_a_positive = false;
  double n_im_a = 0.0;      // n·Im A, expected bounded
  double max_ratio = 0.0;   // max |X/A| over X = B..K
  double z_factor = 1.0;
  double exponent_main = 0.0;  // −1/2 + aε
  double exponent_cube = 0.0;  // −1 + 12ε
};

inline MWConstraintReport mw_constraints(const MWCoeffs& c) {
  MWConstraintReport r;
  r.a = c.D == 0.0 ? 7.0 : 9.0;
  r.epsilon_bound = 1.0 / (2.0 * r.a);
  r.epsilon_ok = c.epsilon > 0.0 && c.epsilon < r.epsilon_bound;
  r.re_a_positive = c.A.real() > 0.0;
  r.n_im_a = static_cast<double>(c.n) * c.A.imag();
  for (cplx x : {c.B, c.C, c.D, c.E, c.F, c.G, c.H, c.I, c.J, c.K}) {
    r.max_ratio = std::max(r.max_ratio, std::abs(x / c.A));
  }
  if (r.re_a_positive) {
    const double reA = c.A.real();
    const double ib = c.B.imag();
    const double ic = c.C.imag() + 2.0 * reA * c.J.imag();
    r.z_factor = std::exp((15.0 * ib * ib + 6.0 * ib * ic + ic * ic) / (16.0 * reA * reA * reA));
  }
  r.exponent_main = -0.5 + r.a * c.epsilon;
  r.exponent_cube = -1.0 + 12.0 * c.epsilon;
  return r;
}

/// (π/(An))^{n/2} exp(J²/(4A) + (3E+F+(C+3B)J)/(4A²) + (15B²+6BC+C²)/(16A³)).
inline LogComplex mw_formula(const MWCoeffs& c) {
  if (!(c.A.real() > 0.0)) throw std::domain_error("mw_formula: Re A must be positive");
  const cplx A = c.A;
  const double n = static_cast<double>(c.n);
  const cplx log_value = 0.5 * n * std::log(kPi / (A * n)) + c.J * c.J / (4.0 * A) +
                         (3.0 * c.E + c.F + (c.C + 3.0 * c.B) * c.J) / (4.0 * A * A) +
                         (15.0 * c.B * c.B + 6.0 * c.B * c.C + c.C * c.C) / (16.0 * A * A * A);
  return LogComplex::from_log(log_value);
}

namespace detail {

inline double product_case_log(double A, double E, double J, std::size_t n, double lo, double hi) {
  const double nd = static_cast<double>(n);
  // shift the exponent by its value at the Gaussian peak to stay in range
  const double peak = J * J / (4.0 * A * nd);
  auto f = [&](double x) { return std::exp(-A * nd * x * x + E * nd * x * x * x * x + J * x - peak); };
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-10, &err);
  if (!(val > 0.0) || !std::isfinite(val) || err > 1e-8 * val) {
    throw std::runtime_error("product-case quadrature did not converge");
  }
  return nd * (std::log(val) + peak);
}

}  // namespace detail

/// n·log ∫_{−r}^{r} exp(−Anx² + Enx⁴ + Jx) dx with r = n^{−1/2+ε}: the
/// separable case B = C = D = F = G = H = I = K = 0 of the lemma.
inline double mw_lhs_product_case(double A, double E, double J, std::size_t n, double epsilon) {
  if (!(A > 0.0)) throw std::domain_error("mw_lhs_product_case: A must be positive");
  if (n == 0) throw std::invalid_argument("mw_lhs_product_case: n must be positive");
  const double r = std::pow(static_cast<double>(n), -0.5 + epsilon);
  return detail::product_case_log(A, E, J, n, -r, r);
}

/// The same integral over the whole line (E ≤ 0 required), for comparing the
/// formula with the cube truncation removed.
inline double mw_lhs_product_case_full(double A, double E, double J, std::size_t n) {
  if (!(A > 0.0)) throw std::domain_error("mw_lhs_product_case_full: A must be positive");
  if (E > 0.0) throw std::domain_error("mw_lhs_product_case_full: E must be non-positive");
  const double nd = static_cast<double>(n);
  const double centre = J / (2.0 * A * nd);
  const double half = 40.0 / std::sqrt(A * nd) + std::abs(centre);
  return detail::product_case_log(A, E, J, n, centre - half, centre + half);
}

}  // namespace mirrorgas
