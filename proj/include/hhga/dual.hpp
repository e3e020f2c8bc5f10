#pragma once

#include <cmath>

namespace hhga {

/// First-order forward-mode dual number: value plus derivative with respect to x.
///
/// The value part of every operation is computed with exactly the same
/// floating-point expression as the plain `double` path, so evaluating an
/// expression over `Dual` reproduces the real-valued result bit for bit.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  static constexpr Dual constant(double v) { return {v, 0.0}; }
  static constexpr Dual variable(double v) { return {v, 1.0}; }
};

constexpr Dual operator-(Dual a) { return {-a.value, -a.deriv}; }
constexpr Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
constexpr Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
constexpr Dual operator/(Dual a, Dual b) {
  return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

inline Dual exp(Dual a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual log(Dual a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(Dual a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}
inline Dual sin(Dual a) { return {std::sin(a.value), std::cos(a.value) * a.deriv}; }
inline Dual cos(Dual a) { return {std::cos(a.value), -std::sin(a.value) * a.deriv}; }

/// |a| with d|a|/da = sign(a) and sign(0) = 0.
inline Dual abs(Dual a) {
  const double s = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
  return {std::abs(a.value), s * a.deriv};
}

/// a^n for a constant exponent n; valid for any base where pow is defined.
inline Dual pow_const(Dual a, double n) {
  const double v = std::pow(a.value, n);
  if (a.deriv == 0.0 || n == 0.0) return {v, 0.0};
  return {v, n * std::pow(a.value, n - 1.0) * a.deriv};
}

/// a^b for a variable exponent; requires a > 0.
inline Dual pow(Dual a, Dual b) {
  if (b.deriv == 0.0) return pow_const(a, b.value);
  const double v = std::pow(a.value, b.value);
  return {v, v * (b.deriv * std::log(a.value) + b.value * a.deriv / a.value)};
}

}  // namespace hhga
