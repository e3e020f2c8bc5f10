#include <cmath>
#include <limits>

#include "doctest.h"
#include "hhga/error.hpp"
#include "hhga/quad.hpp"
#include "oracles.hpp"

using namespace hhga;

TEST_CASE("constant integrand is exact") {
  const auto r = quad::integrate([](double) { return 1.0; }, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == 1.0);
}

TEST_CASE("polynomial") {
  const auto r = quad::integrate([](double x) { return x * x; }, 1.0, 2.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 7.0 / 3.0) <= 1e-12);
}

TEST_CASE("endpoint derivative singularity against a series") {
  const auto r = quad::integrate([](double t) { return std::sqrt(t) * std::exp(2 * t); }, 0.0, 1.0);
  CHECK(r.converged);
  const double want = oracle::sqrt_t_exp_2t();
  CHECK(std::abs(want - 2.5123011030627205) <= 1e-15);
  CHECK(std::abs(r.value - want) <= 1e-10);
  CHECK(std::abs(r.value - want) <= std::max(r.error_estimate, 1e-14) * 10);
}

TEST_CASE("t^alpha for small alpha converges") {
  for (double alpha : {0.05, 0.1, 0.3}) {
    const auto r = quad::integrate([&](double t) { return std::pow(t, alpha); }, 0.0, 1.0);
    CAPTURE(alpha);
    CHECK(r.converged);
    CHECK(oracle::rel(r.value, 1.0 / (alpha + 1.0)) <= 1e-10);
  }
}

TEST_CASE("empty interval") {
  const auto r = quad::integrate([](double) -> double { throw std::logic_error("never sampled"); }, 3.0, 3.0);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
  CHECK(r.evaluations == 0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, 2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0, 0.0, 40), ValidationError);
  try {
    quad::integrate([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0.0, 1.0);
    FAIL("expected NonFiniteIntegrandError");
  } catch (const NonFiniteIntegrandError& e) {
    CHECK(e.abscissa() > 0.5);
  }
}

TEST_CASE("non-convergence is reported, not thrown") {
  const auto r = quad::integrate([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-15, 1e-15, 3);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("linearity and interval additivity") {
  auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
  auto g = [](double x) { return std::sqrt(x) + x * x; };
  const auto rf = quad::integrate(f, 0.0, 2.0);
  const auto rg = quad::integrate(g, 0.0, 2.0);
  const auto rh = quad::integrate([&](double x) { return 2.5 * f(x) - 0.75 * g(x); }, 0.0, 2.0);
  CHECK(std::abs(rh.value - (2.5 * rf.value - 0.75 * rg.value)) <=
        10 * (rh.error_estimate + 2.5 * rf.error_estimate + 0.75 * rg.error_estimate) + 1e-14);

  const auto left = quad::integrate(g, 0.0, 0.7);
  const auto right = quad::integrate(g, 0.7, 2.0);
  CHECK(std::abs(rg.value - left.value - right.value) <=
        10 * (rg.error_estimate + left.error_estimate + right.error_estimate) + 1e-14);
}

TEST_CASE("deterministic") {
  auto f = [](double x) { return std::log1p(x) * std::pow(x, 0.3); };
  const auto a = quad::integrate(f, 0.0, 5.0);
  const auto b = quad::integrate(f, 0.0, 5.0);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("converged implies the estimate meets the tolerance") {
  const quad::Tolerance tol{1e-11, 1e-11, 40};
  for (double p : {0.5, 1.5, 2.5}) {
    const auto r = quad::integrate([&](double x) { return std::pow(x, p) * std::exp(x); }, 0.0, 3.0, tol);
    CHECK(r.converged);
    CHECK(r.error_estimate <= std::max(tol.abs_tol, tol.rel_tol * std::abs(r.value)));
  }
}
