#include <cmath>
#include <random>

#include "doctest.h"
#include "hhga/error.hpp"
#include "hhga/means.hpp"
#include "oracles.hpp"

using namespace hhga;
using namespace hhga::means;

namespace {

const std::vector<std::pair<double, double>> kContexts = {{0.5, 3.0}, {1.0, 2.0}, {1.0, 1.001}, {0.01, 100.0}};
const std::vector<double> kElls = {1.0, 1.5, 3.0, 4.5, 6.0, 12.0};

}  // namespace

TEST_CASE("log_mean examples") {
  CHECK(log_mean(3.0, 3.0) == 3.0);
  CHECK(oracle::rel(log_mean(1.0, std::exp(1.0)), std::exp(1.0) - 1.0) <= 1e-15);
  const double l18 = log_mean(1.0, 8.0);
  CHECK(oracle::rel(3.0 * std::log(2.0) * l18, 7.0) <= 1e-15);
  CHECK_THROWS_AS(log_mean(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_mean(-1.0, 1.0), DomainError);
}

TEST_CASE("log_mean: symmetric, between geometric and arithmetic means") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> expo(-5.0, 5.0);
  std::uniform_real_distribution<double> tiny(-1e-6, 1e-6);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::pow(10.0, expo(gen));
    const double y = i % 4 == 0 ? x * std::exp(tiny(gen)) : std::pow(10.0, expo(gen));
    const double l = log_mean(x, y);
    CHECK(l == log_mean(y, x));
    CHECK(l >= std::sqrt(x) * std::sqrt(y) * (1 - 1e-13));
    CHECK(l <= (x + y) / 2 * (1 + 1e-13));
  }
}

TEST_CASE("log_mean near the diagonal against long double") {
  for (double u : {1e-12, 1e-9, 3e-7, 9.9e-7, 1.1e-6, 1e-4, 0.3}) {
    const double x = 2.5;
    const double y = x * std::exp(u);
    const long double lx = x, ly = y;
    const long double want = (ly - lx) / (std::log(ly) - std::log(lx));
    CAPTURE(u);
    if (u >= 1e-6) CHECK(oracle::rel(log_mean(x, y), static_cast<double>(want)) <= 1e-14);
    // tiny u: long double still loses digits, compare against the series in long double
    const long double uu = std::log(ly / lx);
    const long double series = std::sqrt(lx * ly) * (1 + uu * uu / 24 + uu * uu * uu * uu / 1920);
    if (u < 1e-6) CHECK(oracle::rel(log_mean(x, y), static_cast<double>(series)) <= 1e-14);
  }
}

TEST_CASE("log of log mean of powers") {
  for (double r : {0.0, 1e-8, 1.0, 3.0, 20.0, 500.0}) {
    const double want = r == 0.0 ? 0.0 : std::log(log_mean(std::pow(0.5, r), std::pow(3.0, r)));
    CAPTURE(r);
    if (std::isfinite(want)) CHECK(std::abs(log_of_log_mean_of_powers(0.5, 3.0, r) - want) <= 1e-13 * (1 + std::abs(want)));
  }
  // a^r overflows but the logarithm does not
  const double big = log_of_log_mean_of_powers(2.0, 3.0, 2000.0);
  CHECK(std::isfinite(big));
  const double c = 2000.0 * std::log(1.5);
  CHECK(oracle::rel(big, 2000.0 * std::log(2.0) + c - std::log(c)) <= 1e-12);
}

TEST_CASE("G examples") {
  const MeanContext ctx(1.0, 2.0);
  for (double alpha : {0.0, 0.3, 1.0}) CHECK(oracle::rel(G_series(alpha, 0.0, ctx), 1.0 / (alpha + 1.0)) <= 1e-15);
  for (double ell : kElls) CHECK(oracle::rel(G_series(0.0, ell, ctx), log_mean(1.0, std::pow(2.0, ell))) <= 1e-13);
  const double l8 = log_mean(1.0, 8.0);
  const double want = (8.0 - l8) / (3.0 * std::log(2.0));
  CHECK(want == doctest::Approx(2.22836).epsilon(1e-5));
  CHECK(oracle::rel(G_series(1.0, 3.0, ctx), want) <= 1e-13);
  CHECK(oracle::rel(G_quad(1.0, 3.0, ctx), G_series(1.0, 3.0, ctx)) <= 1e-10);
}

TEST_CASE("G_series against G_quad over the grid") {
  int n = 0;
  for (const auto& [a, b] : kContexts) {
    const MeanContext ctx(a, b);
    for (double ell : kElls) {
      double previous = INFINITY;
      for (int i = 0; i <= 20; ++i) {
        const double alpha = i * 0.05;
        const double s = G_series(alpha, ell, ctx);
        const double g = G_quad(alpha, ell, ctx);
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(ell);
        CAPTURE(alpha);
        CHECK(std::abs(s - g) / g <= 1e-9);
        CHECK(s < previous);
        CHECK(s > 0.0);
        CHECK(s <= log_mean(std::pow(a, ell), std::pow(b, ell)) * (1 + 1e-13));
        if (ell == 3.0) CHECK(s <= std::pow(b, 3.0) / (alpha + 1.0));
        previous = s;
        ++n;
      }
    }
  }
  CHECK(n >= 500);
}

TEST_CASE("G(1, l) closed form") {
  for (const auto& [a, b] : kContexts) {
    const MeanContext ctx(a, b);
    for (double ell : kElls) CHECK(oracle::rel(G1_closed_form(ell, ctx), G_series(1.0, ell, ctx)) <= 1e-10);
  }
}

TEST_CASE("G falls back to quadrature for large c and accepts alpha up to 2") {
  const MeanContext ctx(0.01, 100.0);
  CHECK(ctx.c(60.0) > kSeriesCutoff);
  const double v = G_series(0.5, 60.0, ctx);
  CHECK(std::isfinite(v));
  CHECK(v <= std::pow(100.0, 60.0) / 1.5);
  const MeanContext small(1.0, 2.0);
  CHECK(oracle::rel(G_series(2.0, 1.0, small), G_quad(2.0, 1.0, small)) <= 1e-10);
  CHECK_THROWS_AS(G_series(2.5, 1.0, small), ValidationError);
  CHECK_THROWS_AS(G_series(0.5, -1.0, small), ValidationError);
  CHECK_THROWS_AS(MeanContext(2.0, 1.0), ValidationError);
}
