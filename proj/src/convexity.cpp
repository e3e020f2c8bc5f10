#include "hhga/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hhga::convexity {

std::string_view to_string(Kind k) { return k == Kind::ga ? "ga" : "ordinary"; }
std::string_view to_string(Direction d) { return d == Direction::convex ? "convex" : "concave"; }
std::string_view to_string(Status s) { return s == Status::certified ? "certified" : "violated"; }

void ConvexitySpec::validate() const {
  if (!(domain_lo > 0.0) || !(domain_hi > domain_lo) || !std::isfinite(domain_hi)) {
    throw ValidationError("convexity domain requires 0 < lo < hi, got lo = " + format_real(domain_lo) +
                          ", hi = " + format_real(domain_hi));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(m >= 0.0 && m <= 1.0)) {
    throw ValidationError("convexity parameters require (alpha, m) in [0,1]^2, got alpha = " + format_real(alpha) +
                          ", m = " + format_real(m));
  }
}

double combined_point(const ConvexitySpec& spec, double x, double y, double lambda) {
  if (spec.kind == Kind::ga) return std::pow(x, lambda) * std::pow(y, spec.m * (1.0 - lambda));
  return lambda * x + spec.m * (1.0 - lambda) * y;
}

namespace {

double call(const RealFunction& f, double at, double x, double y, double lambda) {
  double v;
  try {
    v = f(at);
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " [convexity sample x = " + format_real(x) + ", y = " +
                      format_real(y) + ", lambda = " + format_real(lambda) + "]");
  }
  if (!std::isfinite(v)) {
    throw DomainError("function value " + format_real(v) + " at " + format_real(at) + " [convexity sample x = " +
                      format_real(x) + ", y = " + format_real(y) + ", lambda = " + format_real(lambda) + "]");
  }
  return v;
}

Witness assemble(const ConvexitySpec& spec, double x, double y, double lambda, double f_point, double fx,
                 double fy) {
  // pow(0, 0) == 1 gives the right-limit convention lambda^0 = 1.
  const double w = std::pow(lambda, spec.alpha);
  const double t1 = w * fx;
  const double t2 = spec.m * (1.0 - w) * fy;
  Witness out;
  out.x = x;
  out.y = y;
  out.lambda = lambda;
  out.lhs = f_point;
  out.rhs = t1 + t2;
  out.gap = spec.direction == Direction::convex ? out.lhs - out.rhs : out.rhs - out.lhs;
  const double scale = std::max({std::abs(f_point), std::abs(t1), std::abs(t2)});
  out.threshold = kViolationTol + kRelativeSlack * scale;
  return out;
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

constexpr double kInvPhi = 0.6180339887498949;
constexpr int kGoldenSteps = 40;

/// Maximizes g over [lo, hi]; returns the best of the two endpoints and the
/// golden-section estimate.
template <class G>
double golden_max(const G& g, double lo, double hi) {
  double best_arg = lo;
  double best = g(lo);
  if (const double v = g(hi); v > best) {
    best = v;
    best_arg = hi;
  }
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int i = 0; i < kGoldenSteps; ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  const double mid = 0.5 * (a + b);
  if (const double v = g(mid); v > best) {
    best = v;
    best_arg = mid;
  }
  return best_arg;
}

Witness refine(const RealFunction& f, const ConvexitySpec& spec, Witness start) {
  const double llo = std::log(spec.domain_lo);
  const double lhi = std::log(spec.domain_hi);
  auto to_x = [&](double s) { return std::clamp(std::exp(s), spec.domain_lo, spec.domain_hi); };
  auto gap_at = [&](double x, double y, double lambda) {
    try {
      return evaluate(f, spec, x, y, lambda).gap;
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  Witness best = start;
  for (int iter = 0; iter < kRefineIterations; ++iter) {
    bool improved = false;
    auto try_move = [&](double x, double y, double lambda) {
      const double g = gap_at(x, y, lambda);
      if (g > best.gap) {
        best = evaluate(f, spec, x, y, lambda);
        improved = true;
      }
    };
    {
      const double s = golden_max([&](double s) { return gap_at(to_x(s), best.y, best.lambda); }, llo, lhi);
      try_move(to_x(s), best.y, best.lambda);
    }
    {
      const double s = golden_max([&](double s) { return gap_at(best.x, to_x(s), best.lambda); }, llo, lhi);
      try_move(best.x, to_x(s), best.lambda);
    }
    {
      const double l = golden_max([&](double l) { return gap_at(best.x, best.y, l); }, 0.0, 1.0);
      try_move(best.x, best.y, l);
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace

Witness evaluate(const RealFunction& f, const ConvexitySpec& spec, double x, double y, double lambda) {
  const double p = combined_point(spec, x, y, lambda);
  const double fp = call(f, p, x, y, lambda);
  const double fx = call(f, x, x, y, lambda);
  const double fy = call(f, y, x, y, lambda);
  return assemble(spec, x, y, lambda, fp, fx, fy);
}

ConvexityVerdict check(const RealFunction& f, const ConvexitySpec& spec, std::size_t samples, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 gen(seed);
  const double llo = std::log(spec.domain_lo);
  const double lhi = std::log(spec.domain_hi);
  auto draw = [&] { return std::clamp(std::exp(llo + unit(gen) * (lhi - llo)), spec.domain_lo, spec.domain_hi); };

  ConvexityVerdict verdict;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = draw();
    const double y = draw();
    const double fx = call(f, x, x, y, 0.0);
    const double fy = call(f, y, x, y, 0.0);
    for (int j = 0; j <= kLambdaSteps; ++j) {
      const double lambda = static_cast<double>(j) / kLambdaSteps;
      const double fp = call(f, combined_point(spec, x, y, lambda), x, y, lambda);
      const Witness w = assemble(spec, x, y, lambda, fp, fx, fy);
      ++verdict.samples_checked;
      if (is_violation(w)) {
        verdict.status = Status::violated;
        verdict.witness = refine(f, spec, w);
        return verdict;
      }
    }
  }
  return verdict;
}

ConvexityVerdict check(const Expression& f, const ConvexitySpec& spec, std::size_t samples, std::uint64_t seed) {
  return check(as_function(f), spec, samples, seed);
}

RealFunction power_of_abs_deriv(const Expression& f, double q) {
  return [f, q](double x) { return std::pow(std::abs(eval_dual(f, x).deriv), q); };
}

ConvexityVerdict check_power_of_abs_deriv(const Expression& f, double q, const ConvexitySpec& spec,
                                          std::size_t samples, std::uint64_t seed) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw ValidationError("|f'|^q check requires q >= 1");
  return check(power_of_abs_deriv(f, q), spec, samples, seed);
}

}  // namespace hhga::convexity
