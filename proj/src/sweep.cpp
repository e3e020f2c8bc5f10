#include "hhga/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "hhga/expr.hpp"

namespace hhga::sweep {

namespace {

double parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

double round12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ':') {
        parts.push_back(text.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.size() != 3) throw ValidationError("range must be lo:hi:step, got '" + std::string(text) + "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ValidationError("range needs lo <= hi and step > 0: '" + std::string(text) + "'");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 1000000) throw ValidationError("range has too many values: '" + std::string(text) + "'");
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(round12(lo + static_cast<double>(i) * step));
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.push_back(parse_number(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<bounds::ParamPoint> expand_grid(const SweepSpec& spec) {
  std::vector<std::optional<double>> ps;
  if (spec.p.empty()) {
    ps.push_back(std::nullopt);
  } else {
    for (double p : spec.p) ps.emplace_back(p);
  }
  std::vector<bounds::ParamPoint> out;
  for (double alpha : spec.alpha)
    for (double m : spec.m)
      for (double q : spec.q)
        for (const auto& p : ps)
          for (double a : spec.a)
            for (double b : spec.b) {
              bounds::ParamPoint pt;
              pt.alpha = alpha;
              pt.m = m;
              pt.q = q;
              pt.p = p;
              pt.a = a;
              pt.b = b;
              pt.alpha2 = spec.alpha2;
              pt.m2 = spec.m2;
              out.push_back(pt);
            }
  return out;
}

Ranking rank(const std::vector<std::pair<bounds::TheoremId, double>>& values) {
  Ranking r;
  for (const auto& v : values) {
    if (std::isfinite(v.second)) r.ordered.push_back(v);
  }
  std::sort(r.ordered.begin(), r.ordered.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second < y.second;
    return bounds::to_string(x.first) < bounds::to_string(y.first);
  });
  if (r.ordered.empty()) return r;
  const double best = r.ordered.front().second;
  const double slack = 1e-10 * std::max(std::abs(best), std::numeric_limits<double>::min());
  for (const auto& [id, value] : r.ordered) {
    if (value - best <= slack) r.tightest.push_back(id);
  }
  std::sort(r.tightest.begin(), r.tightest.end(),
            [](auto x, auto y) { return bounds::to_string(x) < bounds::to_string(y); });
  // Ties share a value; list them in id order.
  std::stable_sort(r.ordered.begin(), r.ordered.end(), [&](const auto& x, const auto& y) {
    const bool tx = x.second - best <= slack;
    const bool ty = y.second - best <= slack;
    if (tx && ty) return bounds::to_string(x.first) < bounds::to_string(y.first);
    return tx && !ty;
  });
  return r;
}

namespace {

bool is_single_upper(bounds::TheoremId id) {
  return id != bounds::TheoremId::lemma21 && !bounds::needs_second_function(id);
}

Ranking rank_row(const std::vector<bounds::BoundReport>& reports) {
  std::vector<std::pair<bounds::TheoremId, double>> values;
  for (const auto& r : reports) {
    if (is_single_upper(r.id) && r.hypothesis == bounds::HypothesisStatus::certified) values.emplace_back(r.id, r.rhs);
  }
  return rank(values);
}

}  // namespace

SweepResult run(const SweepSpec& spec) {
  const Expression f = parse(spec.f);
  std::optional<Expression> g;
  if (spec.g) g = parse(*spec.g);

  const auto& candidates = spec.theorems.empty() ? bounds::all_theorem_ids() : spec.theorems;
  for (auto id : candidates) {
    if (bounds::needs_second_function(id) && !g && !spec.theorems.empty()) {
      throw ValidationError(std::string(bounds::to_string(id)) + " requires g");
    }
  }

  SweepResult result;
  std::vector<bounds::ParamPoint> points;
  std::vector<std::vector<bounds::TheoremId>> ids;
  for (const auto& pt : expand_grid(spec)) {
    auto applicable = bounds::applicable_theorems(pt, g.has_value(), candidates);
    if (applicable.empty()) {
      std::string reason = "no requested theorem applies";
      for (auto id : candidates) {
        if (auto issue = bounds::applicability_issue(pt, id)) {
          reason = std::string(bounds::to_string(id)) + ": " + *issue;
          break;
        }
      }
      result.skipped.push_back({pt, reason});
      continue;
    }
    points.push_back(pt);
    ids.push_back(std::move(applicable));
  }
  if (points.empty()) throw ValidationError("the sweep grid has no valid point");

  result.rows.resize(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        auto& row = result.rows[i];
        row.point = points[i];
        row.reports = bounds::verify(f, g, points[i], ids[i], spec.verify);
        row.ranking = rank_row(row.reports);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(spec.jobs, 1, points.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const auto& row : result.rows) {
    for (const auto& r : row.reports) {
      switch (r.outcome) {
        case bounds::Outcome::hold: ++result.summary.hold; break;
        case bounds::Outcome::fail: ++result.summary.fail; break;
        case bounds::Outcome::not_applicable: ++result.summary.not_applicable; break;
      }
    }
  }
  return result;
}

}  // namespace hhga::sweep
