#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hhga/bounds.hpp"

namespace hhga::sweep {

/// Parses a grid: a comma-separated list ("0.5,1,2") or an inclusive range
/// "lo:hi:step". Range values are rounded to 12 significant digits so that
/// 0.1:1:0.1 ends at exactly 1. Throws ValidationError.
std::vector<double> parse_grid(std::string_view text);

struct SweepSpec {
  std::string f;
  std::optional<std::string> g;
  std::vector<double> alpha{1.0};
  std::vector<double> m{1.0};
  std::vector<double> q{1.0};
  std::vector<double> p;  // empty: no p coordinate
  std::vector<double> a{1.0};
  std::vector<double> b{2.0};
  std::optional<double> alpha2;
  std::optional<double> m2;
  std::vector<bounds::TheoremId> theorems;  // empty: every applicable theorem
  bounds::VerifyOptions verify;
  std::size_t jobs = 1;
};

struct SkippedPoint {
  bounds::ParamPoint point;
  std::string reason;
};

/// Theorem ids ordered by right-hand side, ascending; `tightest` holds the
/// ids tied (within 1e-10 relative) with the smallest value, in id order.
struct Ranking {
  std::vector<std::pair<bounds::TheoremId, double>> ordered;
  std::vector<bounds::TheoremId> tightest;
};

struct SweepRow {
  bounds::ParamPoint point;
  std::vector<bounds::BoundReport> reports;
  Ranking ranking;  // upper bounds with certified hypotheses only
};

struct Summary {
  std::size_t hold = 0;
  std::size_t fail = 0;
  std::size_t not_applicable = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order
  std::vector<SkippedPoint> skipped;
  Summary summary;
};

/// Grid points in the order alpha, m, q, p, a, b (b varies fastest).
std::vector<bounds::ParamPoint> expand_grid(const SweepSpec& spec);

/// Ranks upper bounds by rhs. Ties within 1e-10 relative of the minimum.
Ranking rank(const std::vector<std::pair<bounds::TheoremId, double>>& values);

/// Runs verify at every valid grid point, on up to spec.jobs threads. A
/// point is skipped, with its reason recorded, when none of the requested
/// theorems applies there. Throws ValidationError if no point remains.
SweepResult run(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "theorem_id,alpha,m,q,p,a,b,lhs,rhs,margin,hypothesis,holds,quad_error";

/// Outcome spelled for CSV/JSON: hold, fail or not_applicable.
std::string_view outcome_label(bounds::Outcome o);

void write_csv(std::ostream& out, const SweepResult& result);
void write_json(std::ostream& out, const SweepResult& result);
/// Margin against the first parameter that takes more than one value, one
/// polyline per theorem, the other parameters held at their first values.
void write_svg(std::ostream& out, const SweepResult& result);

}  // namespace hhga::sweep
