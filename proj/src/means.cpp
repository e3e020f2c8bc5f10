#include "hhga/means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhga/error.hpp"

namespace hhga::means {

MeanContext::MeanContext(double a, double b) : a_(a), b_(b), log_ratio_(0.0) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw ValidationError("mean context requires 0 < a < b, got a = " + format_real(a) + ", b = " + format_real(b));
  }
  log_ratio_ = b / a <= 2.0 ? std::log1p((b - a) / a) : std::log(b / a);
  if (!std::isfinite(log_ratio_)) log_ratio_ = std::log(b) - std::log(a);
}

double log_mean(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("log_mean requires positive finite arguments, got " + format_real(x) + ", " + format_real(y));
  }
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  if (lo == hi) return lo;
  const double ratio = hi / lo;
  if (ratio <= 2.0) {
    // hi - lo is exact here (Sterbenz).
    const double u = std::log1p((hi - lo) / lo);
    if (u < 1e-6) {
      const double u2 = u * u;
      return std::sqrt(lo) * std::sqrt(hi) * (1.0 + u2 / 24.0 + u2 * u2 / 1920.0);
    }
    return (hi - lo) / u;
  }
  const double u = std::isfinite(ratio) ? std::log(ratio) : std::log(hi) - std::log(lo);
  return (hi - lo) / u;
}

double log_of_log_mean_of_powers(double a, double b, double r) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log mean of powers requires positive bases");
  if (!(r >= 0.0)) throw DomainError("log mean of powers requires r >= 0");
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (r == 0.0 || lo == hi) return r * std::log(lo);
  const double c = r * (hi / lo <= 2.0 ? std::log1p((hi - lo) / lo) : std::log(hi / lo));
  // L(lo^r, hi^r) = lo^r * expm1(c) / c
  double tail;
  if (c < 1e-6) {
    tail = std::log1p(c / 2.0 + c * c / 6.0);
  } else if (c < 30.0) {
    tail = std::log(std::expm1(c) / c);
  } else {
    tail = c + std::log1p(-std::exp(-c)) - std::log(c);
  }
  return r * std::log(lo) + tail;
}

double G_series(double alpha, double ell, const MeanContext& ctx) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw ValidationError("G: alpha must lie in [0, 2]");
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw ValidationError("G: ell must be a finite non-negative number");
  const double c = ctx.c(ell);
  if (c > kSeriesCutoff) return G_quad(alpha, ell, ctx);

  double sum = 0.0;
  double power = 1.0;  // c^k / k!
  for (int k = 0;; ++k) {
    const double term = power / (alpha + k + 1.0);
    sum += term;
    if (k > c && term < 1e-17 * sum) break;
    power *= c / (k + 1);
  }
  return std::pow(ctx.a(), ell) * sum;
}

quad::QuadResult G_quad_result(double alpha, double ell, const MeanContext& ctx, const quad::Tolerance& tol) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw ValidationError("G: alpha must lie in [0, 2]");
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw ValidationError("G: ell must be a finite non-negative number");
  const double la = std::log(ctx.a());
  const double lb = std::log(ctx.b());
  auto integrand = [=](double t) { return std::pow(t, alpha) * std::exp(ell * ((1.0 - t) * la + t * lb)); };
  return quad::integrate(integrand, 0.0, 1.0, tol);
}

double G_quad(double alpha, double ell, const MeanContext& ctx) {
  // The integrand is positive, so a purely relative tolerance is meaningful
  // whatever the magnitude of a^ell.
  const quad::Tolerance tol{std::numeric_limits<double>::min(), 1e-12, 40};
  const auto r = G_quad_result(alpha, ell, ctx, tol);
  if (!r.converged) {
    throw Error("G quadrature did not converge for alpha = " + format_real(alpha) + ", ell = " + format_real(ell));
  }
  return r.value;
}

double G1_closed_form(double ell, const MeanContext& ctx) {
  if (!(ell > 0.0)) throw ValidationError("G(1, ell) closed form needs ell > 0");
  const double bl = std::pow(ctx.b(), ell);
  const double al = std::pow(ctx.a(), ell);
  return (bl - log_mean(al, bl)) / (ell * ctx.log_ratio());
}

}  // namespace hhga::means
