#include "hhga/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "hhga/means.hpp"
#include "hhga/quad.hpp"

namespace hhga::bounds {

namespace {

constexpr std::array<std::string_view, 20> kIdNames = {
    "lemma21", "thm31", "cor31_1", "cor31_2", "cor31_3a", "cor31_3b", "thm32", "cor32", "thm33", "cor33",
    "thm34",   "cor34", "thm35",   "cor35_1", "cor35_2",  "cor35_3",  "thm36", "cor36", "thm37", "cor37",
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool in_unit_interval(double v) { return v > 0.0 && v <= 1.0; }

/// x^{1/q}; NaN for a negative base (only reachable through cor31_3a).
double root_q(double x, double q) {
  if (q == 1.0) return x;
  if (x < 0.0) return kNaN;
  return std::pow(x, 1.0 / q);
}

/// x^{1-1/q}, exactly 1 at q = 1.
double holder_factor(double x, double q) { return q == 1.0 ? 1.0 : std::pow(x, 1.0 - 1.0 / q); }

/// exp((1 - 1/q) ln L(a^r, b^r)).
double holder_factor_of_powers(double a, double b, double r, double q) {
  if (q == 1.0) return 1.0;
  return std::exp((1.0 - 1.0 / q) * means::log_of_log_mean_of_powers(a, b, r));
}

/// |f'(a^{1/m})|^q and |f'(b)|^q.
struct DerivativeEnds {
  double at_root = 0.0;
  double at_b = 0.0;
};

DerivativeEnds derivative_ends(const Expression& f, const ParamPoint& pt) {
  const double am = root_point(pt.a, pt.m);
  return {std::pow(std::abs(eval_dual(f, am).deriv), pt.q), std::pow(std::abs(eval_dual(f, pt.b).deriv), pt.q)};
}

/// Values of f and g at the points the product theorems evaluate, raised to
/// a common power.
struct ProductEnds {
  double f_root = 0.0;  // f(a^{1/m1})
  double f_b = 0.0;
  double g_root = 0.0;  // g(a^{1/m2})
  double g_b = 0.0;
};

double nonneg_value(const Expression& h, double x, const char* name) {
  const double v = eval(h, x);
  if (v < 0.0) {
    throw ValidationError(std::string(name) + " must be non-negative, but " + name + "(" + format_real(x) +
                          ") = " + format_real(v));
  }
  return v;
}

ProductEnds product_ends(const Expression& f, const Expression& g, const ParamPoint& pt, double f_power,
                         double g_power) {
  ProductEnds e;
  e.f_root = std::pow(nonneg_value(f, root_point(pt.a, pt.m), "f"), f_power);
  e.f_b = std::pow(nonneg_value(f, pt.b, "f"), f_power);
  e.g_root = std::pow(nonneg_value(g, root_point(pt.a, pt.m_g()), "g"), g_power);
  e.g_b = std::pow(nonneg_value(g, pt.b, "g"), g_power);
  return e;
}

/// The four-term brace shared by thm35 and thm37.
double product_brace(const ProductEnds& e, const ParamPoint& pt, const means::MeanContext& ctx) {
  const double a1 = pt.alpha;
  const double a2 = pt.alpha_g();
  const double m1 = pt.m;
  const double m2 = pt.m_g();
  const double L = means::log_mean(pt.a, pt.b);
  const double G1 = means::G_series(a1, 1.0, ctx);
  const double G2 = means::G_series(a2, 1.0, ctx);
  const double G12 = means::G_series(a1 + a2, 1.0, ctx);
  return m1 * m2 * (L - G1 - G2 + G12) * e.f_root * e.g_root + m1 * (G2 - G12) * e.f_root * e.g_b +
         m2 * (G1 - G12) * e.f_b * e.g_root + G12 * e.f_b * e.g_b;
}

/// The bracket of the all-ones product corollaries:
/// [2L - a ln(b/a) - 2a] f(a)g(a) + [a + b - 2L][f(a)g(b) + f(b)g(a)] + [2L + b ln(b/a) - 2b] f(b)g(b).
double all_ones_bracket(const ProductEnds& e, double a, double b, double log_ratio) {
  const double L = means::log_mean(a, b);
  return (2.0 * L - a * log_ratio - 2.0 * a) * e.f_root * e.g_root +
         (a + b - 2.0 * L) * (e.f_root * e.g_b + e.f_b * e.g_root) + (2.0 * L + b * log_ratio - 2.0 * b) * e.f_b * e.g_b;
}

}  // namespace

std::string_view to_string(TheoremId id) { return kIdNames[static_cast<std::size_t>(id)]; }

std::optional<TheoremId> parse_theorem_id(std::string_view text) {
  for (std::size_t i = 0; i < kIdNames.size(); ++i) {
    if (kIdNames[i] == text) return static_cast<TheoremId>(i);
  }
  return std::nullopt;
}

const std::vector<TheoremId>& all_theorem_ids() {
  static const std::vector<TheoremId> ids = [] {
    std::vector<TheoremId> v;
    for (std::size_t i = 0; i < kIdNames.size(); ++i) v.push_back(static_cast<TheoremId>(i));
    return v;
  }();
  return ids;
}

bool needs_second_function(TheoremId id) { return id >= TheoremId::thm35; }

bool is_lower_bound(TheoremId id) { return id == TheoremId::thm37 || id == TheoremId::cor37; }

double root_point(double a, double m) {
  if (m == 1.0) return a;
  return std::exp(std::log(a) / m);
}

std::optional<std::string> applicability_issue(const ParamPoint& pt, TheoremId id) {
  if (!std::isfinite(pt.a) || !std::isfinite(pt.b) || !(pt.a > 0.0) || !(pt.a < pt.b)) {
    return "requires 0 < a < b, got a = " + format_real(pt.a) + ", b = " + format_real(pt.b);
  }
  if (id == TheoremId::lemma21) return std::nullopt;

  auto check_pair = [&](double alpha, double m, const char* label) -> std::optional<std::string> {
    if (!in_unit_interval(alpha) || !in_unit_interval(m)) {
      return std::string("requires (") + label + ") in (0,1]^2, got (" + format_real(alpha) + ", " + format_real(m) +
             ")";
    }
    const double r = root_point(pt.a, m);
    if (!std::isfinite(r) || !(r > 0.0)) {
      return "a^{1/m} = exp(ln(" + format_real(pt.a) + ")/" + format_real(m) + ") is not representable";
    }
    return std::nullopt;
  };
  if (auto issue = check_pair(pt.alpha, pt.m, "alpha, m")) return issue;
  if (!std::isfinite(pt.q)) return "q must be finite";

  const bool strict_q = id == TheoremId::thm32 || id == TheoremId::cor32 || id == TheoremId::thm33 ||
                        id == TheoremId::cor33 || id == TheoremId::thm34 || id == TheoremId::cor34 ||
                        id == TheoremId::thm36 || id == TheoremId::cor36 || id == TheoremId::cor35_3;
  const bool any_q = id == TheoremId::thm37 || id == TheoremId::cor37;
  if (strict_q && !(pt.q > 1.0)) return "requires q > 1, got q = " + format_real(pt.q);
  if (!any_q && !(pt.q >= 1.0)) return "requires q >= 1, got q = " + format_real(pt.q);

  if (needs_second_function(id)) {
    if (auto issue = check_pair(pt.alpha_g(), pt.m_g(), "alpha2, m2")) return issue;
  }
  const bool all_ones = pt.alpha == 1.0 && pt.m == 1.0 && pt.alpha_g() == 1.0 && pt.m_g() == 1.0;

  switch (id) {
    case TheoremId::cor31_1:
    case TheoremId::cor35_1:
      if (pt.q != 1.0) return "requires q = 1";
      break;
    case TheoremId::cor31_2:
    case TheoremId::cor32:
    case TheoremId::cor33:
      if (pt.alpha != 1.0) return "requires alpha = 1";
      break;
    case TheoremId::thm34:
    case TheoremId::cor34:
      if (!pt.p) return "requires p";
      if (!(*pt.p > 0.0 && *pt.p < pt.q)) {
        return "requires q > p > 0, got p = " + format_real(*pt.p) + ", q = " + format_real(pt.q);
      }
      if (id == TheoremId::cor34 && pt.alpha != 1.0) return "requires alpha = 1";
      break;
    case TheoremId::cor35_2:
      if (pt.q != 1.0) return "requires q = 1";
      if (!all_ones) return "requires alpha = alpha2 = m = m2 = 1";
      break;
    case TheoremId::cor35_3:
    case TheoremId::cor36:
    case TheoremId::cor37:
      if (!all_ones) return "requires alpha = alpha2 = m = m2 = 1";
      break;
    default: break;
  }
  return std::nullopt;
}

void validate(const ParamPoint& pt, TheoremId id) {
  if (auto issue = applicability_issue(pt, id)) {
    throw ValidationError(std::string(to_string(id)) + ": " + *issue);
  }
}

// ---------------------------------------------------------------------------
// Left-hand sides and the identity

Evaluated lhs_signed(const Expression& f, double a, double b) {
  if (!(a > 0.0) || !(a < b)) throw ValidationError("requires 0 < a < b");
  const auto integral = quad::integrate([&](double x) { return x * eval(f, x); }, a, b);
  if (!integral.converged) throw Error("quadrature of x f(x) did not converge");
  const double ends = (b * b * eval(f, b) - a * a * eval(f, a)) / 2.0;
  return {ends - integral.value, integral.error_estimate};
}

Evaluated lhs_main(const Expression& f, double a, double b) {
  const auto s = lhs_signed(f, a, b);
  return {std::abs(s.value), s.quad_error};
}

Evaluated lemma_rhs(const Expression& f, double a, double b) {
  const means::MeanContext ctx(a, b);
  const double la = std::log(a);
  const double lb = std::log(b);
  auto integrand = [&](double t) {
    const double x = std::exp((1.0 - t) * la + t * lb);
    return x * x * x * eval_dual(f, x).deriv;
  };
  const auto integral = quad::integrate(integrand, 0.0, 1.0);
  if (!integral.converged) throw Error("quadrature of the identity's right-hand side did not converge");
  const double scale = ctx.log_ratio() / 2.0;
  return {scale * integral.value, scale * integral.error_estimate};
}

Evaluated lhs_product(const Expression& f, const Expression& g, double a, double b) {
  if (!(a > 0.0) || !(a < b)) throw ValidationError("requires 0 < a < b");
  const auto integral = quad::integrate([&](double x) { return eval(f, x) * eval(g, x); }, a, b);
  if (!integral.converged) throw Error("quadrature of f g did not converge");
  return {integral.value, integral.error_estimate};
}

// ---------------------------------------------------------------------------
// thm31..thm34: bounds through |f'|^q

double thm31_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::thm31);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double L3 = means::log_mean(std::pow(pt.a, 3.0), std::pow(pt.b, 3.0));
  const double G3 = means::G_series(pt.alpha, 3.0, ctx);
  const double brace = pt.m * (L3 - G3) * d.at_root + G3 * d.at_b;
  return ctx.log_ratio() / 2.0 * holder_factor(L3, pt.q) * root_q(brace, pt.q);
}

std::vector<std::pair<TheoremId, double>> cor31_bounds(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::thm31);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double a3 = std::pow(pt.a, 3.0);
  const double b3 = std::pow(pt.b, 3.0);
  const double L3 = means::log_mean(a3, b3);
  const double half_log = ctx.log_ratio() / 2.0;
  const double q = pt.q;
  std::vector<std::pair<TheoremId, double>> out;

  if (q == 1.0) {
    const double G3 = means::G_series(pt.alpha, 3.0, ctx);
    const double fa = std::abs(eval_dual(f, root_point(pt.a, pt.m)).deriv);
    const double fb = std::abs(eval_dual(f, pt.b).deriv);
    out.emplace_back(TheoremId::cor31_1, half_log * (pt.m * (L3 - G3) * fa + G3 * fb));
  }
  if (pt.alpha == 1.0) {
    const double brace = pt.m * (L3 - a3) * d.at_root + (b3 - L3) * d.at_b;
    out.emplace_back(TheoremId::cor31_2, holder_factor(b3 - a3, q) / 6.0 * root_q(brace, q));
  }
  {
    const double brace = pt.m * ((pt.alpha + 1.0) * L3 - b3) * d.at_root + b3 * d.at_b;
    out.emplace_back(TheoremId::cor31_3a,
                     half_log * holder_factor(L3, q) * std::pow(1.0 / (pt.alpha + 1.0), 1.0 / q) * root_q(brace, q));
  }
  out.emplace_back(TheoremId::cor31_3b, half_log * L3 * std::abs(eval_dual(f, pt.b).deriv));
  return out;
}

double thm32_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::thm32);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double r = 3.0 * q / (q - 1.0);
  return ctx.log_ratio() / 2.0 * std::pow(1.0 / (pt.alpha + 1.0), 1.0 / q) *
         holder_factor_of_powers(pt.a, pt.b, r, q) * root_q(d.at_b + pt.alpha * pt.m * d.at_root, q);
}

double cor32_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::cor32);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double r = 3.0 * q / (q - 1.0);
  return ctx.log_ratio() / std::pow(2.0, 1.0 + 1.0 / q) * holder_factor_of_powers(pt.a, pt.b, r, q) *
         root_q(d.at_b + pt.m * d.at_root, q);
}

double thm33_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::thm33);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double L = means::log_mean(std::pow(pt.a, 3.0 * q), std::pow(pt.b, 3.0 * q));
  const double G = means::G_series(pt.alpha, 3.0 * q, ctx);
  return ctx.log_ratio() / 2.0 * root_q(pt.m * (L - G) * d.at_root + G * d.at_b, q);
}

double cor33_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::cor33);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double aq = std::pow(pt.a, 3.0 * q);
  const double bq = std::pow(pt.b, 3.0 * q);
  const double L = means::log_mean(aq, bq);
  return holder_factor(ctx.log_ratio(), q) / 2.0 * std::pow(1.0 / (3.0 * q), 1.0 / q) *
         root_q(pt.m * (L - aq) * d.at_root + (bq - L) * d.at_b, q);
}

double thm34_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::thm34);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double p = *pt.p;
  const double s = 3.0 * (q - p) / (q - 1.0);
  const double L = means::log_mean(std::pow(pt.a, 3.0 * p), std::pow(pt.b, 3.0 * p));
  const double G = means::G_series(pt.alpha, 3.0 * p, ctx);
  return ctx.log_ratio() / 2.0 * holder_factor_of_powers(pt.a, pt.b, s, q) *
         root_q(pt.m * (L - G) * d.at_root + G * d.at_b, q);
}

double cor34_rhs(const Expression& f, const ParamPoint& pt) {
  validate(pt, TheoremId::cor34);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto d = derivative_ends(f, pt);
  const double q = pt.q;
  const double p = *pt.p;
  const double s = 3.0 * (q - p) / (q - 1.0);
  const double ap = std::pow(pt.a, 3.0 * p);
  const double bp = std::pow(pt.b, 3.0 * p);
  const double L = means::log_mean(ap, bp);
  return holder_factor(ctx.log_ratio(), q) / 2.0 * std::pow(1.0 / (3.0 * p), 1.0 / q) *
         holder_factor_of_powers(pt.a, pt.b, s, q) * root_q(pt.m * (L - ap) * d.at_root + (bp - L) * d.at_b, q);
}

// ---------------------------------------------------------------------------
// thm35..thm37: bounds on integral_a^b f g

double thm35_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::thm35);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, pt.q, pt.q);
  const double L = means::log_mean(pt.a, pt.b);
  return ctx.log_ratio() * holder_factor(L, pt.q) * root_q(product_brace(e, pt, ctx), pt.q);
}

double cor35_1_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::cor35_1);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, 1.0, 1.0);
  return ctx.log_ratio() * product_brace(e, pt, ctx);
}

double cor35_2_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::cor35_2);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, 1.0, 1.0);
  return all_ones_bracket(e, pt.a, pt.b, ctx.log_ratio()) / ctx.log_ratio();
}

double cor35_3_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::cor35_3);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, pt.q, pt.q);
  const double q = pt.q;
  const double L = means::log_mean(pt.a, pt.b);
  const double prefactor = holder_factor(L, q) / std::pow(ctx.log_ratio(), 2.0 / (q - 1.0));
  return prefactor * root_q(all_ones_bracket(e, pt.a, pt.b, ctx.log_ratio()), q);
}

double thm36_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::thm36);
  const means::MeanContext ctx(pt.a, pt.b);
  const double q = pt.q;
  const double conj = q / (q - 1.0);
  const auto e = product_ends(f, g, pt, q, conj);
  const double L = means::log_mean(pt.a, pt.b);
  const double G1 = means::G_series(pt.alpha, 1.0, ctx);
  const double G2 = means::G_series(pt.alpha_g(), 1.0, ctx);
  const double f_brace = pt.m * e.f_root * L + G1 * (e.f_b - pt.m * e.f_root);
  const double g_brace = pt.m_g() * e.g_root * L + G2 * (e.g_b - pt.m_g() * e.g_root);
  return ctx.log_ratio() * root_q(f_brace, q) * holder_factor(g_brace, q);
}

double cor36_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::cor36);
  const double q = pt.q;
  const double conj = q / (q - 1.0);
  const auto e = product_ends(f, g, pt, q, conj);
  const double L = means::log_mean(pt.a, pt.b);
  const double f_brace = e.f_root * (L - pt.a) + (pt.b - L) * e.f_b;
  const double g_brace = e.g_root * (L - pt.a) + (pt.b - L) * e.g_b;
  return root_q(f_brace, q) * holder_factor(g_brace, q);
}

double thm37_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::thm37);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, 1.0, 1.0);
  return ctx.log_ratio() * product_brace(e, pt, ctx);
}

double cor37_rhs(const Expression& f, const Expression& g, const ParamPoint& pt) {
  validate(pt, TheoremId::cor37);
  const means::MeanContext ctx(pt.a, pt.b);
  const auto e = product_ends(f, g, pt, 1.0, 1.0);
  return ctx.log_ratio() * all_ones_bracket(e, pt.a, pt.b, ctx.log_ratio());
}

double rhs(TheoremId id, const Expression& f, const std::optional<Expression>& g, const ParamPoint& pt) {
  validate(pt, id);
  if (needs_second_function(id) && !g) throw ValidationError(std::string(to_string(id)) + " requires g");
  switch (id) {
    case TheoremId::lemma21: throw ValidationError("lemma21 is an identity; use lemma_rhs");
    case TheoremId::thm31: return thm31_rhs(f, pt);
    case TheoremId::cor31_1:
    case TheoremId::cor31_2:
    case TheoremId::cor31_3a:
    case TheoremId::cor31_3b:
      for (const auto& [cid, value] : cor31_bounds(f, pt)) {
        if (cid == id) return value;
      }
      throw ValidationError(std::string(to_string(id)) + " does not apply at this point");
    case TheoremId::thm32: return thm32_rhs(f, pt);
    case TheoremId::cor32: return cor32_rhs(f, pt);
    case TheoremId::thm33: return thm33_rhs(f, pt);
    case TheoremId::cor33: return cor33_rhs(f, pt);
    case TheoremId::thm34: return thm34_rhs(f, pt);
    case TheoremId::cor34: return cor34_rhs(f, pt);
    case TheoremId::thm35: return thm35_rhs(f, *g, pt);
    case TheoremId::cor35_1: return cor35_1_rhs(f, *g, pt);
    case TheoremId::cor35_2: return cor35_2_rhs(f, *g, pt);
    case TheoremId::cor35_3: return cor35_3_rhs(f, *g, pt);
    case TheoremId::thm36: return thm36_rhs(f, *g, pt);
    case TheoremId::cor36: return cor36_rhs(f, *g, pt);
    case TheoremId::thm37: return thm37_rhs(f, *g, pt);
    case TheoremId::cor37: return cor37_rhs(f, *g, pt);
  }
  throw ValidationError("unknown theorem id");
}

// ---------------------------------------------------------------------------
// Hypothesis certification and report assembly

std::string_view to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::certified: return "certified";
    case HypothesisStatus::violated: return "violated";
    case HypothesisStatus::none: return "none";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::hold: return "hold";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "n/a";
  }
  return "?";
}

double comparison_tolerance(double tol, double quad_error) { return std::max(tol, 10.0 * quad_error); }

namespace {

struct Hypothesis {
  HypothesisStatus status = HypothesisStatus::none;
  std::string note;
  std::optional<convexity::Witness> witness;
};

enum class Transform { abs_deriv_power, power, identity };

/// Memoizes convexity verdicts within one verify() call; several theorems
/// share the same condition.
class HypothesisCache {
 public:
  HypothesisCache(const VerifyOptions& opts) : opts_(opts) {}

  Hypothesis certify(const Expression& h, const char* name, Transform transform, double power, double alpha, double m,
                     double hi, convexity::Direction direction) {
    for (const auto& e : entries_) {
      if (e.expr == &h && e.transform == transform && e.power == power && e.alpha == alpha && e.m == m &&
          e.hi == hi && e.direction == direction) {
        return e.result;
      }
    }
    Hypothesis result = compute(h, name, transform, power, alpha, m, hi, direction);
    entries_.push_back({&h, transform, power, alpha, m, hi, direction, result});
    return result;
  }

 private:
  struct Entry {
    const Expression* expr;
    Transform transform;
    double power, alpha, m, hi;
    convexity::Direction direction;
    Hypothesis result;
  };

  Hypothesis compute(const Expression& h, const char* name, Transform transform, double power, double alpha,
                     double m, double hi, convexity::Direction direction) const {
    const convexity::ConvexitySpec spec{convexity::Kind::ga, alpha, m, convexity::kDefaultDomainLo, hi, direction};
    std::string label;
    RealFunction fn;
    switch (transform) {
      case Transform::abs_deriv_power:
        label = "|" + std::string(name) + "'|^" + format_real(power);
        fn = convexity::power_of_abs_deriv(h, power);
        break;
      case Transform::power:
        label = std::string(name) + "^" + format_real(power);
        fn = [&h, power](double x) { return std::pow(eval(h, x), power); };
        break;
      case Transform::identity:
        label = name;
        fn = as_function(h);
        break;
    }
    const std::string what = label + " (" + format_real(alpha) + ", " + format_real(m) + ")-GA-" +
                             std::string(convexity::to_string(direction)) + " on [" +
                             format_real(spec.domain_lo) + ", " + format_real(hi) + "]";
    Hypothesis out;
    try {
      if (transform != Transform::abs_deriv_power) {
        if (auto neg = find_negative(h, spec)) {
          out.status = HypothesisStatus::violated;
          out.note = std::string(name) + " is negative at x = " + format_real(*neg);
          return out;
        }
      }
      const auto verdict = convexity::check(fn, spec, opts_.samples, opts_.seed);
      if (verdict.status == convexity::Status::certified) {
        out.status = HypothesisStatus::certified;
        out.note = what;
      } else {
        out.status = HypothesisStatus::violated;
        out.witness = verdict.witness;
        const auto& w = *verdict.witness;
        out.note = "not " + what + ": x = " + format_real(w.x) + ", y = " + format_real(w.y) +
                   ", lambda = " + format_real(w.lambda) + ", gap = " + format_real(w.gap);
      }
    } catch (const DomainError& e) {
      out.status = HypothesisStatus::violated;
      out.note = label + " is not defined on the hypothesis domain: " + e.what();
    }
    return out;
  }

  /// A point of the sampling domain (or an endpoint) where h < 0.
  std::optional<double> find_negative(const Expression& h, const convexity::ConvexitySpec& spec) const {
    if (eval(h, spec.domain_lo) < 0.0) return spec.domain_lo;
    if (eval(h, spec.domain_hi) < 0.0) return spec.domain_hi;
    std::mt19937_64 gen(opts_.seed);
    const double llo = std::log(spec.domain_lo);
    const double lhi = std::log(spec.domain_hi);
    for (std::size_t i = 0; i < 2 * opts_.samples; ++i) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      const double x = std::clamp(std::exp(llo + u * (lhi - llo)), spec.domain_lo, spec.domain_hi);
      if (eval(h, x) < 0.0) return x;
    }
    return std::nullopt;
  }

  const VerifyOptions& opts_;
  std::vector<Entry> entries_;
};

Hypothesis combine(Hypothesis first, const Hypothesis& second) {
  if (first.status == HypothesisStatus::violated) return first;
  if (second.status == HypothesisStatus::violated) return second;
  first.note += "; " + second.note;
  return first;
}

Hypothesis hypothesis_for(TheoremId id, const Expression& f, const std::optional<Expression>& g, const ParamPoint& pt,
                          HypothesisCache& cache) {
  using convexity::Direction;
  if (id == TheoremId::lemma21) return {};
  const double hi_f = std::max(root_point(pt.a, pt.m), pt.b);
  if (!needs_second_function(id)) {
    return cache.certify(f, "f", Transform::abs_deriv_power, pt.q, pt.alpha, pt.m, hi_f, Direction::convex);
  }
  const double hi_g = std::max(root_point(pt.a, pt.m_g()), pt.b);
  if (id == TheoremId::thm35 || id == TheoremId::cor35_1 || id == TheoremId::cor35_2 || id == TheoremId::cor35_3) {
    return combine(cache.certify(f, "f", Transform::power, pt.q, pt.alpha, pt.m, hi_f, Direction::convex),
                   cache.certify(*g, "g", Transform::power, pt.q, pt.alpha_g(), pt.m_g(), hi_g, Direction::convex));
  }
  if (id == TheoremId::thm36 || id == TheoremId::cor36) {
    const double conj = pt.q / (pt.q - 1.0);
    return combine(cache.certify(f, "f", Transform::power, pt.q, pt.alpha, pt.m, hi_f, Direction::convex),
                   cache.certify(*g, "g", Transform::power, conj, pt.alpha_g(), pt.m_g(), hi_g, Direction::convex));
  }
  return combine(cache.certify(f, "f", Transform::identity, 1.0, pt.alpha, pt.m, hi_f, Direction::concave),
                 cache.certify(*g, "g", Transform::identity, 1.0, pt.alpha_g(), pt.m_g(), hi_g, Direction::concave));
}

}  // namespace

std::vector<TheoremId> applicable_theorems(const ParamPoint& pt, bool have_g, const std::vector<TheoremId>& candidates) {
  std::vector<TheoremId> out;
  for (TheoremId id : candidates) {
    if (needs_second_function(id) && !have_g) continue;
    if (!applicability_issue(pt, id)) out.push_back(id);
  }
  return out;
}

std::vector<BoundReport> verify(const Expression& f, const std::optional<Expression>& g, const ParamPoint& pt,
                                const std::vector<TheoremId>& theorems, const VerifyOptions& opts) {
  for (TheoremId id : theorems) {
    validate(pt, id);
    if (needs_second_function(id) && !g) throw ValidationError(std::string(to_string(id)) + " requires g");
  }
  HypothesisCache cache(opts);
  std::optional<Evaluated> single_lhs;
  std::optional<Evaluated> product_lhs;

  std::vector<BoundReport> reports;
  reports.reserve(theorems.size());
  for (TheoremId id : theorems) {
    BoundReport r;
    r.id = id;
    if (id == TheoremId::lemma21) {
      const auto lhs = lhs_signed(f, pt.a, pt.b);
      const auto rhs_val = lemma_rhs(f, pt.a, pt.b);
      r.lhs = lhs.value;
      r.rhs = rhs_val.value;
      r.margin = r.rhs - r.lhs;
      r.quad_error = lhs.quad_error + rhs_val.quad_error;
      r.tol_compare = comparison_tolerance(opts.tol, r.quad_error);
      r.hypothesis = HypothesisStatus::none;
      r.outcome = std::abs(r.margin) <= r.tol_compare ? Outcome::hold : Outcome::fail;
      reports.push_back(std::move(r));
      continue;
    }

    const Hypothesis hyp = hypothesis_for(id, f, g, pt, cache);
    r.hypothesis = hyp.status;
    r.hypothesis_note = hyp.note;
    r.witness = hyp.witness;

    Evaluated lhs;
    if (needs_second_function(id)) {
      if (!product_lhs) product_lhs = lhs_product(f, *g, pt.a, pt.b);
      lhs = *product_lhs;
    } else {
      if (!single_lhs) single_lhs = lhs_main(f, pt.a, pt.b);
      lhs = *single_lhs;
    }
    r.lhs = lhs.value;
    r.quad_error = lhs.quad_error;
    r.tol_compare = comparison_tolerance(opts.tol, r.quad_error);

    try {
      r.rhs = rhs(id, f, g, pt);
    } catch (const Error&) {
      if (hyp.status == HypothesisStatus::certified) throw;
      r.rhs = kNaN;  // undefined outside the hypothesis, e.g. a negative f
    }
    r.margin = r.rhs - r.lhs;

    if (hyp.status != HypothesisStatus::certified) {
      r.outcome = Outcome::not_applicable;
    } else {
      const double slack = is_lower_bound(id) ? r.lhs - r.rhs : r.rhs - r.lhs;
      r.outcome = slack >= -r.tol_compare ? Outcome::hold : Outcome::fail;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace hhga::bounds
