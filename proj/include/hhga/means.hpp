#pragma once

#include "hhga/quad.hpp"

namespace hhga::means {

/// The interval (a, b) with 0 < a < b that the weighted integrals run over.
class MeanContext {
 public:
  MeanContext(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double log_ratio() const noexcept { return log_ratio_; }  // ln b - ln a
  double c(double ell) const noexcept { return ell * log_ratio_; }

 private:
  double a_;
  double b_;
  double log_ratio_;
};

/// Logarithmic mean (y - x)/(ln y - ln x), with L(x, x) = x.
///
/// Symmetric bit for bit and accurate to a few ulps, including |ln(y/x)| < 1e-6
/// where a short series replaces the quotient. Throws DomainError unless x, y > 0.
double log_mean(double x, double y);

/// ln L(a^r, b^r) for r >= 0, without forming a^r or b^r.
double log_of_log_mean_of_powers(double a, double b, double r);

/// Coefficient c beyond which the series switches to quadrature.
inline constexpr double kSeriesCutoff = 500.0;

/// G(alpha, ell) = integral over [0,1] of t^alpha a^{ell(1-t)} b^{ell t} dt via
/// a^ell * sum_k c^k / (k! (alpha + k + 1)), c = ell (ln b - ln a).
/// Falls back to G_quad when c > kSeriesCutoff. Accepts alpha in [0, 2].
double G_series(double alpha, double ell, const MeanContext& ctx);

/// The same integral by adaptive quadrature; the independent cross-check for G_series.
quad::QuadResult G_quad_result(double alpha, double ell, const MeanContext& ctx, const quad::Tolerance& tol = {});
double G_quad(double alpha, double ell, const MeanContext& ctx);

/// G(1, ell) = (b^ell - L(a^ell, b^ell)) / (ell (ln b - ln a)), ell > 0.
double G1_closed_form(double ell, const MeanContext& ctx);

}  // namespace hhga::means
