#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "hhga/expr.hpp"

namespace hhga::convexity {

/// `ga`: f(x^l y^{m(1-l)}) <= l^a f(x) + m(1 - l^a) f(y).
/// `ordinary`: f(l x + m(1-l) y) <= l^a f(x) + m(1 - l^a) f(y).
enum class Kind { ga, ordinary };
enum class Direction { convex, concave };
enum class Status { certified, violated };

std::string_view to_string(Kind k);
std::string_view to_string(Direction d);
std::string_view to_string(Status s);

inline constexpr double kDefaultDomainLo = 1e-12;
/// A sample violates when its gap exceeds kViolationTol plus kRelativeSlack
/// times the magnitude of the terms being compared.
inline constexpr double kViolationTol = 1e-9;
inline constexpr double kRelativeSlack = 1e-12;
inline constexpr int kLambdaSteps = 64;
inline constexpr int kRefineIterations = 20;

struct ConvexitySpec {
  Kind kind = Kind::ga;
  double alpha = 1.0;
  double m = 1.0;
  double domain_lo = kDefaultDomainLo;
  double domain_hi = 1.0;
  Direction direction = Direction::convex;

  /// Throws ValidationError unless 0 < domain_lo < domain_hi and (alpha, m) in [0,1]^2.
  void validate() const;
};

/// One evaluated triple. `gap` is the amount by which the defining inequality
/// fails: lhs - rhs for convex, rhs - lhs for concave.
struct Witness {
  double x = 0.0;
  double y = 0.0;
  double lambda = 0.0;
  double lhs = 0.0;  // f at the combined point
  double rhs = 0.0;  // lambda^alpha f(x) + m (1 - lambda^alpha) f(y)
  double gap = 0.0;
  double threshold = 0.0;  // gap must exceed this to count as a violation
};

struct ConvexityVerdict {
  Status status = Status::certified;
  std::size_t samples_checked = 0;
  std::optional<Witness> witness;
};

/// x^l y^{m(1-l)} (ga) or l x + m(1-l) y (ordinary). At l = 1 this is x exactly.
double combined_point(const ConvexitySpec& spec, double x, double y, double lambda);

/// Evaluates both sides at one triple. DomainError from f is rethrown with the
/// triple attached; a non-finite value of f is reported the same way.
Witness evaluate(const RealFunction& f, const ConvexitySpec& spec, double x, double y, double lambda);

inline bool is_violation(const Witness& w) { return w.gap > w.threshold; }

/// Scans lambda in {i/64} against `samples` log-uniform (x, y) pairs drawn
/// from a seeded generator. The first violating triple, in scan order, is
/// refined by coordinate-wise golden-section ascent on the gap and returned as
/// the witness. A certified verdict is a sampling certificate, not a proof.
ConvexityVerdict check(const RealFunction& f, const ConvexitySpec& spec, std::size_t samples, std::uint64_t seed);
ConvexityVerdict check(const Expression& f, const ConvexitySpec& spec, std::size_t samples, std::uint64_t seed);

/// x -> |f'(x)|^q, with f' from dual numbers.
RealFunction power_of_abs_deriv(const Expression& f, double q);

/// check() applied to x -> |f'(x)|^q. Requires q >= 1.
ConvexityVerdict check_power_of_abs_deriv(const Expression& f, double q, const ConvexitySpec& spec,
                                          std::size_t samples, std::uint64_t seed);

}  // namespace hhga::convexity
