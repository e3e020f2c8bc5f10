#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "hhga/sweep.hpp"
#include "json.hpp"

namespace hhga::sweep {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

nlohmann::json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json jpoint(const bounds::ParamPoint& pt) {
  nlohmann::json j;
  j["alpha"] = pt.alpha;
  j["m"] = pt.m;
  j["q"] = pt.q;
  j["p"] = pt.p ? nlohmann::json(*pt.p) : nlohmann::json(nullptr);
  j["a"] = pt.a;
  j["b"] = pt.b;
  if (pt.alpha2) j["alpha2"] = *pt.alpha2;
  if (pt.m2) j["m2"] = *pt.m2;
  return j;
}

}  // namespace

std::string_view outcome_label(bounds::Outcome o) {
  switch (o) {
    case bounds::Outcome::hold: return "hold";
    case bounds::Outcome::fail: return "fail";
    case bounds::Outcome::not_applicable: return "not_applicable";
  }
  return "?";
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) {
    const auto& pt = row.point;
    for (const auto& r : row.reports) {
      out << bounds::to_string(r.id) << ',' << num(pt.alpha) << ',' << num(pt.m) << ',' << num(pt.q) << ','
          << (pt.p ? num(*pt.p) : "") << ',' << num(pt.a) << ',' << num(pt.b) << ',' << num(r.lhs) << ','
          << num(r.rhs) << ',' << num(r.margin) << ',' << bounds::to_string(r.hypothesis) << ','
          << outcome_label(r.outcome) << ',' << num(r.quad_error) << '\n';
    }
  }
}

void write_json(std::ostream& out, const SweepResult& result) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  doc["points"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    for (const auto& r : row.reports) {
      nlohmann::json j = jpoint(row.point);
      j["theorem_id"] = bounds::to_string(r.id);
      j["lhs"] = jnum(r.lhs);
      j["rhs"] = jnum(r.rhs);
      j["margin"] = jnum(r.margin);
      j["hypothesis"] = bounds::to_string(r.hypothesis);
      j["hypothesis_note"] = r.hypothesis_note;
      j["holds"] = outcome_label(r.outcome);
      j["quad_error"] = jnum(r.quad_error);
      j["tol_compare"] = jnum(r.tol_compare);
      doc["rows"].push_back(std::move(j));
    }
    nlohmann::json p = jpoint(row.point);
    p["tightest"] = nlohmann::json::array();
    for (auto id : row.ranking.tightest) p["tightest"].push_back(bounds::to_string(id));
    p["ranking"] = nlohmann::json::array();
    for (const auto& [id, v] : row.ranking.ordered) {
      p["ranking"].push_back({{"theorem_id", bounds::to_string(id)}, {"rhs", jnum(v)}});
    }
    doc["points"].push_back(std::move(p));
  }
  doc["skipped"] = nlohmann::json::array();
  for (const auto& s : result.skipped) {
    nlohmann::json j = jpoint(s.point);
    j["reason"] = s.reason;
    doc["skipped"].push_back(std::move(j));
  }
  doc["summary"] = {{"hold", result.summary.hold},
                    {"fail", result.summary.fail},
                    {"not_applicable", result.summary.not_applicable}};
  // dump() prints doubles with 17 significant digits when needed to round-trip.
  out << doc.dump(2) << '\n';
}

void write_svg(std::ostream& out, const SweepResult& result) {
  using Getter = double (*)(const bounds::ParamPoint&);
  static const std::pair<const char*, Getter> params[] = {
      {"alpha", [](const bounds::ParamPoint& p) { return p.alpha; }},
      {"m", [](const bounds::ParamPoint& p) { return p.m; }},
      {"q", [](const bounds::ParamPoint& p) { return p.q; }},
      {"p", [](const bounds::ParamPoint& p) { return p.p.value_or(0.0); }},
      {"a", [](const bounds::ParamPoint& p) { return p.a; }},
      {"b", [](const bounds::ParamPoint& p) { return p.b; }},
  };
  std::size_t axis = 0;
  for (std::size_t k = 0; k < std::size(params); ++k) {
    bool varies = false;
    for (const auto& row : result.rows) varies = varies || params[k].second(row.point) != params[k].second(result.rows.front().point);
    if (varies) {
      axis = k;
      break;
    }
  }

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  if (!result.rows.empty()) {
    const auto& first = result.rows.front().point;
    for (const auto& row : result.rows) {
      bool on_slice = true;
      for (std::size_t k = 0; k < std::size(params); ++k) {
        if (k != axis && params[k].second(row.point) != params[k].second(first)) on_slice = false;
      }
      if (!on_slice) continue;
      for (const auto& r : row.reports) {
        if (std::isfinite(r.margin)) series[std::string(bounds::to_string(r.id))].emplace_back(params[axis].second(row.point), r.margin);
      }
    }
  }

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& [name, pts] : series) {
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin < xmax)) {
    xmin = std::isfinite(xmin) ? xmin - 1.0 : 0.0;
    xmax = xmin + 2.0;
  }
  if (!(ymin < ymax)) {
    ymin = std::isfinite(ymin) ? ymin - 1.0 : 0.0;
    ymax = ymin + 2.0;
  }

  constexpr double W = 800, H = 500, L = 70, R = 160, T = 30, B = 50;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  char buf[160];

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
  out << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", L, H - B,
                W - R, H - B);
  out << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", L, T, L,
                H - B);
  out << buf;
  if (ymin < 0.0 && ymax > 0.0) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%.3f\" x2=\"%g\" y2=\"%.3f\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n", L,
                  sy(0.0), W - R, sy(0.0));
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n", (L + W - R) / 2,
                H - 12, params[axis].first);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"14\" y=\"%g\" transform=\"rotate(-90 14 %g)\" text-anchor=\"middle\">margin</text>\n",
                (T + H - B) / 2, (T + H - B) / 2);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.4g</text>\n", L, H - B + 16, xmin);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.4g</text>\n", W - R, H - B + 16, xmax);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>\n", L - 4, H - B, ymin);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.4g</text>\n", L - 4, T + 4, ymax);
  out << buf;

  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::size_t k = 0;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = colors[k % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", sx(pts[i].first), sy(pts[i].second));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" fill=\"%s\">%s</text>\n", W - R + 10,
                  T + 16.0 * static_cast<double>(k), color, name.c_str());
    out << buf;
    ++k;
  }
  out << "</svg>\n";
}

}  // namespace hhga::sweep
