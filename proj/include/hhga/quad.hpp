#pragma once

#include <cstddef>
#include <functional>

namespace hhga::quad {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  std::size_t evaluations = 0;
  bool converged = false;
};

struct Tolerance {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_depth = 40;
};

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over [lo, hi].
///
/// Panels are bisected largest-error first until the summed error estimate
/// drops below max(abs_tol, rel_tol * |value|). A panel that is already
/// `max_depth` bisections deep is never split again; if that stalls
/// convergence the best estimate is returned with `converged == false`.
/// `lo == hi` yields exactly 0. A NaN or infinite sample throws
/// NonFiniteIntegrandError carrying the abscissa.
///
/// The result depends only on the inputs: panels are summed in left-to-right
/// order once refinement stops.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, const Tolerance& tol = {});

inline QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol,
                            double rel_tol, int max_depth) {
  return integrate(f, lo, hi, Tolerance{abs_tol, rel_tol, max_depth});
}

}  // namespace hhga::quad
