#include <cmath>
#include <random>

#include "doctest.h"
#include "hhga/bounds.hpp"
#include "hhga/means.hpp"
#include "oracles.hpp"

using namespace hhga;
using namespace hhga::bounds;

namespace {

ParamPoint point(double alpha, double m, double q, double a, double b, std::optional<double> p = std::nullopt) {
  ParamPoint pt;
  pt.alpha = alpha;
  pt.m = m;
  pt.q = q;
  pt.p = p;
  pt.a = a;
  pt.b = b;
  return pt;
}

double value_of(const std::vector<std::pair<TheoremId, double>>& v, TheoremId id) {
  for (const auto& [k, x] : v) {
    if (k == id) return x;
  }
  FAIL("missing id");
  return NAN;
}

const std::vector<std::pair<double, double>> kIntervals = {{1.0, 2.0}, {0.5, 3.0}, {1.0, 1.01}, {0.01, 10.0}};

}  // namespace

TEST_CASE("theorem ids round trip") {
  CHECK(all_theorem_ids().size() == 20);
  for (auto id : all_theorem_ids()) CHECK(parse_theorem_id(to_string(id)) == id);
  CHECK_FALSE(parse_theorem_id("thm99"));
}

TEST_CASE("lhs_main examples") {
  CHECK(std::abs(lhs_main(parse("1"), 1, 2).value) <= 1e-15);
  CHECK(oracle::rel(lhs_main(parse("x"), 1, 2).value, 7.0 / 6.0) <= 1e-14);
  const double want = std::abs(2 * std::log(2.0) - oracle::simpson([](double x) { return x * std::log(x); }, 1, 2, 1000000));
  CHECK(std::abs(lhs_main(parse("ln(x)"), 1, 2).value - want) <= 1e-9);
  CHECK(std::abs(lhs_main(parse("ln(x)"), 1, 2).value - 0.75) <= 1e-13);
}

TEST_CASE("lemma_rhs examples") {
  CHECK(oracle::rel(lemma_rhs(parse("x"), 1, 2).value, 7.0 / 6.0) <= 1e-13);
  CHECK(oracle::rel(lemma_rhs(parse("x^2"), 1, 2).value, 15.0 / 4.0) <= 1e-13);
  CHECK(lemma_rhs(parse("1"), 1, 2).value == 0.0);
}

TEST_CASE("lemma residual over the catalog") {
  for (const auto& text : oracle::catalog()) {
    const auto f = parse(text);
    for (const auto& [a, b] : kIntervals) {
      const auto l = lhs_signed(f, a, b);
      const auto r = lemma_rhs(f, a, b);
      CAPTURE(text);
      CAPTURE(a);
      CHECK(std::abs(l.value - r.value) <= comparison_tolerance(1e-8, l.quad_error + r.quad_error));
    }
  }
}

TEST_CASE("equality case f = x") {
  const auto f = parse("x");
  const auto pt = point(1, 1, 1, 1, 2);
  CHECK(oracle::rel(thm31_rhs(f, pt), 7.0 / 6.0) <= 1e-10);
  CHECK(oracle::rel(value_of(cor31_bounds(f, pt), TheoremId::cor31_3b), 7.0 / 6.0) <= 1e-10);
  CHECK(oracle::rel(value_of(cor31_bounds(f, pt), TheoremId::cor31_1), 7.0 / 6.0) <= 1e-10);
  CHECK(oracle::rel(value_of(cor31_bounds(f, point(1, 1, 2, 1, 2)), TheoremId::cor31_2), 7.0 / 6.0) <= 1e-10);
  const double analytic = std::log(2.0) / 2 * (7 / (3 * std::log(2.0)));
  CHECK(oracle::rel(thm31_rhs(f, pt), analytic) <= 1e-14);
}

TEST_CASE("zero derivative gives zero bounds") {
  const auto f = parse("1");
  CHECK(thm31_rhs(f, point(0.4, 1, 1.5, 1, 2)) == 0.0);
  CHECK(thm32_rhs(f, point(0.4, 1, 2, 1, 2)) == 0.0);
  CHECK(thm33_rhs(f, point(0.4, 1, 2, 1, 2)) == 0.0);
  CHECK(thm34_rhs(f, point(0.4, 1, 2, 1, 2, 1.0)) == 0.0);
}

TEST_CASE("upper bounds dominate the left-hand side at certified points") {
  const auto lhs = lhs_main(parse("x^2/2"), 1, 2).value;
  CHECK(thm31_rhs(parse("x^2/2"), point(1, 1, 2, 1, 2)) >= lhs);
  CHECK(thm32_rhs(parse("x"), point(1, 1, 2, 1, 2)) >= 7.0 / 6.0);
  CHECK(thm33_rhs(parse("x"), point(0.5, 1, 2, 1, 2)) >= 7.0 / 6.0);
}

TEST_CASE("specialization identities at alpha = 1") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> fs = {"x", "x^2", "x*ln(x)-x", "exp(x)", "x^3"};
  for (int i = 0; i < 50; ++i) {
    const double a = 0.1 + 2 * u(gen);
    const double b = a * (1.05 + 3 * u(gen));
    const double m = 0.2 + 0.8 * u(gen);
    const double q = 1.1 + 3 * u(gen);
    const double p = q * (0.1 + 0.85 * u(gen));
    const auto f = parse(fs[i % fs.size()]);
    const auto pt = point(1, m, q, a, b, p);
    CAPTURE(i);
    CHECK(oracle::rel(thm31_rhs(f, pt), value_of(cor31_bounds(f, pt), TheoremId::cor31_2)) <= 1e-10);
    CHECK(oracle::rel(thm32_rhs(f, pt), cor32_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(thm33_rhs(f, pt), cor33_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(thm34_rhs(f, pt), cor34_rhs(f, pt)) <= 1e-10);
  }
}

TEST_CASE("thm34 tends to thm33 as p -> q") {
  for (const auto& text : {"x^2", "exp(x)", "x*ln(x)-x"}) {
    const auto f = parse(text);
    for (double alpha : {0.3, 1.0}) {
      const auto pt = point(alpha, 0.8, 2.5, 0.5, 3, 2.5 * (1 - 1e-9));
      CHECK(oracle::rel(thm34_rhs(f, pt), thm33_rhs(f, pt)) <= 1e-6);
    }
  }
}

TEST_CASE("cor31_3 relaxations") {
  // where |f'(b)|^q >= m |f'(a^{1/m})|^q both relaxations dominate
  for (const auto& text : {"x", "x^2", "exp(x)", "x^3"}) {
    const auto f = parse(text);
    for (double alpha : {0.2, 0.6, 1.0}) {
      for (double q : {1.0, 2.0}) {
        const auto pt = point(alpha, 0.7, q, 0.5, 3);
        const auto c = cor31_bounds(f, pt);
        const double t = thm31_rhs(f, pt);
        CHECK(value_of(c, TheoremId::cor31_3a) >= t * (1 - 1e-12));
        CHECK(value_of(c, TheoremId::cor31_3b) >= t * (1 - 1e-12));
      }
    }
  }
  // decreasing |f'|: the relaxations fall below thm31 and below the integral itself
  const auto f = parse("ln(x)");
  const auto pt = point(1, 1, 1, 1, 2);
  const auto c = cor31_bounds(f, pt);
  const double lhs = lhs_main(f, 1, 2).value;
  CHECK(std::abs(value_of(c, TheoremId::cor31_3b) - 7.0 / 12.0) <= 1e-14);
  CHECK(std::abs(lhs - 0.75) <= 1e-13);
  CHECK(thm31_rhs(f, pt) >= lhs);
  CHECK(value_of(c, TheoremId::cor31_3b) < lhs);
  CHECK(value_of(c, TheoremId::cor31_3a) < lhs);
}

TEST_CASE("product bounds: constants") {
  const auto one = parse("1");
  for (const auto& [a, b] : kIntervals) {
    CHECK(oracle::rel(thm35_rhs(one, one, point(1, 1, 1, a, b)), b - a) <= 1e-12);
    CHECK(oracle::rel(thm36_rhs(one, one, point(1, 1, 2, a, b)), b - a) <= 1e-12);
    CHECK(oracle::rel(thm37_rhs(one, one, point(1, 1, 1, a, b)), b - a) <= 1e-12);
    CHECK(oracle::rel(lhs_product(one, one, a, b).value, b - a) <= 1e-13);
  }
}

TEST_CASE("product corollaries against the theorems") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"x", "x"}, {"1", "x^2"}, {"exp(x)", "x"}, {"x^2+1", "sqrt(x)"}};
  for (const auto& [fs, gs] : pairs) {
    const auto f = parse(fs);
    const auto g = parse(gs);
    for (const auto& [a, b] : kIntervals) {
      const double lr = std::log(b / a);
      const auto one = point(1, 1, 1, a, b);
      CAPTURE(fs);
      CAPTURE(a);
      CHECK(oracle::rel(cor35_1_rhs(f, g, point(0.4, 0.7, 1, a, b)), thm35_rhs(f, g, point(0.4, 0.7, 1, a, b))) <= 1e-14);
      CHECK(oracle::rel(cor35_2_rhs(f, g, one), thm35_rhs(f, g, one)) <= 1e-9);
      for (double q : {1.5, 2.0, 4.0}) {
        const auto pq = point(1, 1, q, a, b);
        // printed prefactor L^{1-1/q} / ln(b/a)^{2/(q-1)}; the theorem gives ln(b/a)^{1-2/q} L^{1-1/q}
        const double corrected = cor35_3_rhs(f, g, pq) * std::pow(lr, 2.0 / (q - 1.0)) * std::pow(lr, 1.0 - 2.0 / q);
        CHECK(oracle::rel(corrected, thm35_rhs(f, g, pq)) <= 1e-9);
        CHECK(oracle::rel(cor36_rhs(f, g, pq), thm36_rhs(f, g, pq)) <= 1e-9);
      }
      // printed prefactor ln(b/a); the theorem gives 1/ln(b/a)
      CHECK(oracle::rel(cor37_rhs(f, g, one), lr * lr * thm37_rhs(f, g, one)) <= 1e-9);
    }
  }
}

TEST_CASE("verify examples") {
  const auto x = parse("x");
  const auto r = verify(x, std::nullopt, point(1, 1, 1, 1, 2), {TheoremId::thm31});
  REQUIRE(r.size() == 1);
  CHECK(oracle::rel(r[0].lhs, 7.0 / 6.0) <= 1e-12);
  CHECK(oracle::rel(r[0].rhs, 7.0 / 6.0) <= 1e-12);
  CHECK(r[0].outcome == Outcome::hold);
  CHECK(r[0].hypothesis == HypothesisStatus::certified);

  // the hypothesis of thm31 concerns |f'|^q, identically 0 here
  const auto c = verify(parse("1"), std::nullopt, point(1, 0.5, 1, 1, 2), {TheoremId::thm31});
  CHECK(c[0].hypothesis == HypothesisStatus::certified);
  CHECK(c[0].outcome == Outcome::hold);
  CHECK(c[0].rhs == 0.0);

  // a constant f fails the product hypotheses for m < 1
  const auto one = parse("1");
  const auto cp = verify(one, one, point(1, 0.5, 1, 1, 2), {TheoremId::thm35, TheoremId::thm37});
  CHECK(cp[0].hypothesis == HypothesisStatus::violated);
  CHECK(cp[0].outcome == Outcome::not_applicable);
  REQUIRE(cp[0].witness);
  CHECK(cp[0].witness->lambda == 0.0);

  const auto p = verify(x, x, point(1, 1, 2, 1, 2), {TheoremId::thm36});
  CHECK(p[0].outcome == Outcome::hold);
  CHECK(p[0].rhs >= 7.0 / 3.0);

  const auto lower = verify(x, x, point(1, 1, 1, 1, 2), {TheoremId::thm37});
  CHECK(lower[0].hypothesis == HypothesisStatus::violated);
  CHECK(lower[0].outcome == Outcome::not_applicable);

  const auto conc = parse("-ln(x)+2");
  const auto ok = verify(conc, conc, point(1, 1, 1, 1, 2), {TheoremId::thm37});
  CHECK(ok[0].hypothesis == HypothesisStatus::certified);
  CHECK(ok[0].outcome == Outcome::hold);
  CHECK(ok[0].lhs >= ok[0].rhs);

  const auto lem = verify(parse("exp(x)"), std::nullopt, point(1, 1, 1, 0.5, 3), {TheoremId::lemma21});
  CHECK(lem[0].outcome == Outcome::hold);
  CHECK(lem[0].hypothesis == HypothesisStatus::none);
}

TEST_CASE("verify gates negative functions in the product theorems") {
  const auto neg = parse("x-1.5");
  const auto r = verify(neg, parse("1"), point(1, 1, 1, 1, 2), {TheoremId::thm35});
  CHECK(r[0].hypothesis == HypothesisStatus::violated);
  CHECK(r[0].outcome == Outcome::not_applicable);
  CHECK_THROWS_AS(thm35_rhs(neg, parse("1"), point(1, 1, 1, 1, 2)), ValidationError);
}

TEST_CASE("homogeneity") {
  const auto pt = point(0.6, 0.8, 2, 0.5, 3, 1.0);
  for (double c : {0.5, 3.0}) {
    const auto f = parse("x^2+x");
    const auto cf = parse(std::to_string(c) + "*(x^2+x)");
    const auto g = parse("sqrt(x)+1");
    CHECK(oracle::rel(lhs_main(cf, 0.5, 3).value, c * lhs_main(f, 0.5, 3).value) <= 1e-10);
    CHECK(oracle::rel(thm31_rhs(cf, pt), c * thm31_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(thm32_rhs(cf, pt), c * thm32_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(thm33_rhs(cf, pt), c * thm33_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(thm34_rhs(cf, pt), c * thm34_rhs(f, pt)) <= 1e-10);
    CHECK(oracle::rel(lhs_product(cf, g, 0.5, 3).value, c * lhs_product(f, g, 0.5, 3).value) <= 1e-10);
    CHECK(oracle::rel(thm35_rhs(cf, g, pt), c * thm35_rhs(f, g, pt)) <= 1e-10);
    CHECK(oracle::rel(thm36_rhs(cf, g, pt), c * thm36_rhs(f, g, pt)) <= 1e-10);
    CHECK(oracle::rel(thm37_rhs(cf, g, pt), c * thm37_rhs(f, g, pt)) <= 1e-10);
  }
}

TEST_CASE("degenerate interval") {
  const double a = 1.0, b = 1.0 + 1e-8;
  for (const auto& text : oracle::catalog()) {
    const auto f = parse(text);
    CAPTURE(text);
    CHECK(lhs_main(f, a, b).value < 1e-6);
    CHECK(std::abs(thm31_rhs(f, point(0.5, 0.9, 1, a, b))) < 1e-6);
    CHECK(std::abs(thm32_rhs(f, point(0.5, 0.9, 2, a, b))) < 1e-6);
    CHECK(std::abs(thm33_rhs(f, point(0.5, 0.9, 2, a, b))) < 1e-6);
    CHECK(std::abs(thm34_rhs(f, point(0.5, 0.9, 2, a, b, 1.0))) < 1e-6);
  }
}

TEST_CASE("parameter validation") {
  const auto x = parse("x");
  CHECK_THROWS_AS(thm31_rhs(x, point(1, 1, 1, 2, 1)), ValidationError);
  CHECK_THROWS_AS(thm31_rhs(x, point(0, 1, 1, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm31_rhs(x, point(1, 1.5, 1, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm31_rhs(x, point(1, 1, 0.5, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm32_rhs(x, point(1, 1, 1, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm33_rhs(x, point(1, 1, 1, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm34_rhs(x, point(1, 1, 2, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm34_rhs(x, point(1, 1, 2, 1, 2, 2.0)), ValidationError);
  CHECK_THROWS_AS(thm34_rhs(x, point(1, 1, 2, 1, 2, 0.0)), ValidationError);
  CHECK_THROWS_AS(cor33_rhs(x, point(0.5, 1, 2, 1, 2)), ValidationError);
  CHECK_THROWS_AS(thm31_rhs(x, point(1, 0.001, 1, 10, 20)), ValidationError);
  CHECK(applicability_issue(point(1, 0.001, 1, 10, 20), TheoremId::thm31)->find("a^{1/m}") != std::string::npos);
  CHECK_THROWS_AS(verify(x, std::nullopt, point(1, 1, 1, 1, 2), {TheoremId::thm35}), ValidationError);
  CHECK(root_point(2.0, 1.0) == 2.0);
  CHECK(oracle::rel(root_point(2.0, 0.5), 4.0) <= 1e-15);
}

TEST_CASE("applicable theorems") {
  const auto ids = applicable_theorems(point(1, 1, 1, 1, 2), false, all_theorem_ids());
  CHECK(std::find(ids.begin(), ids.end(), TheoremId::thm31) != ids.end());
  CHECK(std::find(ids.begin(), ids.end(), TheoremId::thm32) == ids.end());
  CHECK(std::find(ids.begin(), ids.end(), TheoremId::thm35) == ids.end());
  const auto with_g = applicable_theorems(point(1, 1, 2, 1, 2, 1.0), true, all_theorem_ids());
  CHECK(std::find(with_g.begin(), with_g.end(), TheoremId::cor35_3) != with_g.end());
  CHECK(std::find(with_g.begin(), with_g.end(), TheoremId::cor34) != with_g.end());
  CHECK(std::find(with_g.begin(), with_g.end(), TheoremId::cor35_2) == with_g.end());
}
