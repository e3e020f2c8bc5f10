#include "hhga/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "hhga/error.hpp"

namespace hhga::quad {

namespace {

// Kronrod abscissae and weights on [-1, 1] (QUADPACK qk15). Odd-index nodes
// are the embedded 7-point Gauss rule.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

// Upper bound on the number of bisections performed in one call.
constexpr std::size_t kMaxSubdivisions = 5000;

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

class Rule {
 public:
  explicit Rule(const std::function<double(double)>& f) : f_(f) {}

  std::size_t evaluations() const noexcept { return evaluations_; }

  Panel apply(double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = sample(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    double f1[7];
    double f2[7];
    for (int j = 0; j < 7; ++j) {
      const double dx = half * kNodes[j];
      f1[j] = sample(center - dx);
      f2[j] = sample(center + dx);
      const double pair = f1[j] + f2[j];
      kronrod += kKronrodWeights[j] * pair;
      abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = kronrod * half;
    const double resabs = abs_sum * std::abs(half);
    const double resasc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
      err = std::max(roundoff, err);
    }
    return {lo, hi, value, err, depth};
  }

 private:
  double sample(double t) {
    ++evaluations_;
    const double v = f_(t);
    if (!std::isfinite(v)) throw NonFiniteIntegrandError(t, v);
    return v;
  }

  const std::function<double(double)>& f_;
  std::size_t evaluations_ = 0;
};

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;  // ties: leftmost panel first
  }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, const Tolerance& tol) {
  if (!(lo <= hi)) throw ValidationError("integrate: requires lo <= hi");
  if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0)) throw ValidationError("integrate: tolerances must be positive");
  if (lo == hi) return {0.0, 0.0, 0, true};

  Rule rule(f);
  std::priority_queue<Panel, std::vector<Panel>, ByError> active;
  std::vector<Panel> frozen;  // panels at max depth, never split again
  const Panel first = rule.apply(lo, hi, 0);
  double total = first.value;
  double total_err = first.error;
  active.push(first);

  auto target = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };
  std::size_t subdivisions = 0;

  while (total_err > target() && !active.empty() && subdivisions < kMaxSubdivisions) {
    const Panel worst = active.top();
    active.pop();
    if (worst.depth >= tol.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = rule.apply(worst.lo, mid, worst.depth + 1);
    const Panel right = rule.apply(mid, worst.hi, worst.depth + 1);
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  std::vector<Panel> panels = std::move(frozen);
  while (!active.empty()) {
    panels.push_back(active.top());
    active.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& a, const Panel& b) { return a.lo < b.lo; });

  QuadResult out;
  for (const Panel& p : panels) {
    out.value += p.value;
    out.error_estimate += p.error;
  }
  out.evaluations = rule.evaluations();
  out.converged = out.error_estimate <= std::max(tol.abs_tol, tol.rel_tol * std::abs(out.value));
  return out;
}

}  // namespace hhga::quad
