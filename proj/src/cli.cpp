#include "hhga/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hhga/bounds.hpp"
#include "hhga/convexity.hpp"
#include "hhga/expr.hpp"
#include "hhga/sweep.hpp"

namespace hhga::cli {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::vector<bounds::TheoremId> parse_theorems(const std::string& text) {
  std::vector<bounds::TheoremId> out;
  if (text.empty() || text == "all") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto id = bounds::parse_theorem_id(item);
    if (!id) throw ValidationError("unknown theorem id '" + item + "'");
    out.push_back(*id);
  }
  return out;
}

convexity::Kind parse_kind(const std::string& s) {
  if (s == "ga") return convexity::Kind::ga;
  if (s == "ordinary") return convexity::Kind::ordinary;
  throw ValidationError("--kind must be ga or ordinary");
}

convexity::Direction parse_direction(const std::string& s) {
  if (s == "convex") return convexity::Direction::convex;
  if (s == "concave") return convexity::Direction::concave;
  throw ValidationError("--direction must be convex or concave");
}

/// Values shared by every subcommand.
struct Common {
  std::string f;
  std::string g;
  double a = 1.0;
  double b = 2.0;
  double alpha = 1.0;
  double m = 1.0;
  double q = 1.0;
  double p = 0.0;
  double alpha2 = 1.0;
  double m2 = 1.0;
  std::string theorems = "all";
  std::size_t samples = 256;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::string plot;
  std::size_t jobs = 1;
  // grid forms for sweep and compare
  std::string alpha_grid = "1", m_grid = "1", q_grid = "1", p_grid, a_grid = "1", b_grid = "2";
};

struct OptionHandles {
  CLI::Option* g = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* alpha2 = nullptr;
  CLI::Option* m2 = nullptr;
};

void add_run_options(CLI::App* sub, Common& c) {
  sub->add_option("--samples", c.samples, "convexity samples (x, y pairs)")->capture_default_str();
  sub->add_option("--seed", c.seed, "sampler seed")->capture_default_str();
  sub->add_option("--tol", c.tol, "bound comparison tolerance")->capture_default_str();
}

OptionHandles add_point_options(CLI::App* sub, Common& c) {
  OptionHandles h;
  sub->add_option("--f", c.f, "expression in x")->required();
  h.g = sub->add_option("--g", c.g, "second expression for the product bounds");
  sub->add_option("--a", c.a, "left endpoint")->capture_default_str();
  sub->add_option("--b", c.b, "right endpoint")->capture_default_str();
  sub->add_option("--alpha", c.alpha)->capture_default_str();
  sub->add_option("--m", c.m)->capture_default_str();
  sub->add_option("--q", c.q)->capture_default_str();
  h.p = sub->add_option("--p", c.p);
  h.alpha2 = sub->add_option("--alpha2", c.alpha2, "alpha of g (defaults to --alpha)");
  h.m2 = sub->add_option("--m2", c.m2, "m of g (defaults to --m)");
  sub->add_option("--theorems", c.theorems, "comma-separated ids or all")->capture_default_str();
  add_run_options(sub, c);
  return h;
}

OptionHandles add_grid_options(CLI::App* sub, Common& c) {
  OptionHandles h;
  sub->add_option("--f", c.f, "expression in x")->required();
  h.g = sub->add_option("--g", c.g, "second expression for the product bounds");
  sub->add_option("--alpha", c.alpha_grid, "list a,b,c or range lo:hi:step")->capture_default_str();
  sub->add_option("--m", c.m_grid)->capture_default_str();
  sub->add_option("--q", c.q_grid)->capture_default_str();
  h.p = sub->add_option("--p", c.p_grid);
  sub->add_option("--a", c.a_grid)->capture_default_str();
  sub->add_option("--b", c.b_grid)->capture_default_str();
  h.alpha2 = sub->add_option("--alpha2", c.alpha2);
  h.m2 = sub->add_option("--m2", c.m2);
  sub->add_option("--theorems", c.theorems)->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  add_run_options(sub, c);
  return h;
}

bounds::ParamPoint make_point(const Common& c, const OptionHandles& h) {
  bounds::ParamPoint pt;
  pt.alpha = c.alpha;
  pt.m = c.m;
  pt.q = c.q;
  if (h.p->count() > 0) pt.p = c.p;
  pt.a = c.a;
  pt.b = c.b;
  if (h.alpha2->count() > 0) pt.alpha2 = c.alpha2;
  if (h.m2->count() > 0) pt.m2 = c.m2;
  for (double v : {pt.alpha, pt.m, pt.alpha_g(), pt.m_g()}) {
    if (!(v > 0.0 && v <= 1.0)) throw ValidationError("alpha and m must lie in (0, 1], got " + format_real(v));
  }
  return pt;
}

sweep::SweepSpec make_spec(const Common& c, const OptionHandles& h) {
  sweep::SweepSpec spec;
  spec.f = c.f;
  if (h.g->count() > 0) spec.g = c.g;
  spec.alpha = sweep::parse_grid(c.alpha_grid);
  spec.m = sweep::parse_grid(c.m_grid);
  spec.q = sweep::parse_grid(c.q_grid);
  if (h.p->count() > 0) spec.p = sweep::parse_grid(c.p_grid);
  spec.a = sweep::parse_grid(c.a_grid);
  spec.b = sweep::parse_grid(c.b_grid);
  if (h.alpha2->count() > 0) spec.alpha2 = c.alpha2;
  if (h.m2->count() > 0) spec.m2 = c.m2;
  spec.theorems = parse_theorems(c.theorems);
  spec.verify = {c.tol, c.samples, c.seed};
  spec.jobs = c.jobs;
  return spec;
}

std::string describe(const bounds::ParamPoint& pt) {
  std::string s = "alpha=" + format_real(pt.alpha) + " m=" + format_real(pt.m) + " q=" + format_real(pt.q);
  if (pt.p) s += " p=" + format_real(*pt.p);
  s += " a=" + format_real(pt.a) + " b=" + format_real(pt.b);
  if (pt.alpha2) s += " alpha2=" + format_real(*pt.alpha2);
  if (pt.m2) s += " m2=" + format_real(*pt.m2);
  return s;
}

std::string outcome_word(bounds::Outcome o) {
  return o == bounds::Outcome::not_applicable ? "not-applicable" : std::string(bounds::to_string(o));
}

// ---------------------------------------------------------------------------

struct ConvexityArgs {
  std::string f;
  std::string kind = "ga";
  std::string direction = "convex";
  double alpha = 1.0;
  double m = 1.0;
  double lo = convexity::kDefaultDomainLo;
  double hi = 1.0;
  double q = 1.0;
  std::size_t samples = 256;
  std::uint64_t seed = 42;
  std::vector<double> witness;
};

std::string replay_line(const ConvexityArgs& c, bool with_q, const convexity::Witness& w) {
  std::string s = "hhga convexity --f " + shell_quote(c.f) + " --kind " + c.kind + " --direction " + c.direction +
                  " --alpha " + format_real(c.alpha) + " --m " + format_real(c.m) + " --lo " + format_real(c.lo) +
                  " --hi " + format_real(c.hi);
  if (with_q) s += " --q " + format_real(c.q);
  s += " --witness " + format_real(w.x) + "," + format_real(w.y) + "," + format_real(w.lambda);
  return s;
}

void print_witness(std::ostream& out, const convexity::Witness& w) {
  out << "x=" << format_real(w.x) << " y=" << format_real(w.y) << " lambda=" << format_real(w.lambda)
      << " lhs=" << format_real(w.lhs) << " rhs=" << format_real(w.rhs) << " gap=" << format_real(w.gap) << '\n';
}

int cmd_convexity(const ConvexityArgs& c, bool with_q, std::ostream& out) {
  const Expression f = parse(c.f);
  convexity::ConvexitySpec spec;
  spec.kind = parse_kind(c.kind);
  spec.direction = parse_direction(c.direction);
  spec.alpha = c.alpha;
  spec.m = c.m;
  spec.domain_lo = c.lo;
  spec.domain_hi = c.hi;
  spec.validate();
  if (with_q && !(c.q >= 1.0)) throw ValidationError("--q must be >= 1");
  const RealFunction fn = with_q ? convexity::power_of_abs_deriv(f, c.q) : as_function(f);
  const std::string target = with_q ? "|f'|^" + format_real(c.q) : "f";

  if (!c.witness.empty()) {
    if (c.witness.size() != 3) throw ValidationError("--witness takes x,y,lambda");
    const auto w = convexity::evaluate(fn, spec, c.witness[0], c.witness[1], c.witness[2]);
    const bool violated = convexity::is_violation(w);
    out << (violated ? "violated: " : "satisfied: ");
    print_witness(out, w);
    return violated ? kExitViolation : kExitOk;
  }

  const auto verdict = convexity::check(fn, spec, c.samples, c.seed);
  const std::string what = target + " (" + format_real(c.alpha) + ", " + format_real(c.m) + ")-" +
                           (spec.kind == convexity::Kind::ga ? "GA-" : "") + c.direction + " on [" +
                           format_real(c.lo) + ", " + format_real(c.hi) + "]";
  if (verdict.status == convexity::Status::certified) {
    out << "certified: " << what << " (" << verdict.samples_checked << " sampled triples, seed " << c.seed << ")\n";
    return kExitOk;
  }
  out << "violated: " << what << '\n' << "witness: ";
  print_witness(out, *verdict.witness);
  out << "replay: " << replay_line(c, with_q, *verdict.witness) << '\n';
  return kExitViolation;
}

int cmd_verify(const Common& c, const OptionHandles& h, std::ostream& out) {
  const Expression f = parse(c.f);
  std::optional<Expression> g;
  if (h.g->count() > 0) g = parse(c.g);
  const auto pt = make_point(c, h);
  auto ids = parse_theorems(c.theorems);
  if (ids.empty()) {
    ids = bounds::applicable_theorems(pt, g.has_value(), bounds::all_theorem_ids());
    if (ids.empty()) {
      // reports why the point is unusable
      bounds::validate(pt, bounds::TheoremId::lemma21);
      throw ValidationError("no theorem applies at " + describe(pt));
    }
  }
  const auto reports = bounds::verify(f, g, pt, ids, {c.tol, c.samples, c.seed});
  out << describe(pt) << '\n';
  bool failed = false;
  for (const auto& r : reports) {
    out << bounds::to_string(r.id) << " lhs=" << fixed6(r.lhs) << " rhs=" << fixed6(r.rhs)
        << " margin=" << format_real(r.margin) << " hypothesis=" << bounds::to_string(r.hypothesis) << ' '
        << outcome_word(r.outcome) << '\n';
    if (r.hypothesis == bounds::HypothesisStatus::violated) out << "  " << r.hypothesis_note << '\n';
    failed = failed || r.outcome == bounds::Outcome::fail;
  }
  return failed ? kExitViolation : kExitOk;
}

int cmd_identity(const Common& c, std::ostream& out) {
  const Expression f = parse(c.f);
  const auto lhs = bounds::lhs_signed(f, c.a, c.b);
  const auto rhs = bounds::lemma_rhs(f, c.a, c.b);
  const double residual = std::abs(lhs.value - rhs.value);
  const double tol = bounds::comparison_tolerance(c.tol, lhs.quad_error + rhs.quad_error);
  const bool ok = residual <= tol;
  out << "lhs=" << format_real(lhs.value) << " rhs=" << format_real(rhs.value) << " residual=" << format_real(residual)
      << " tol=" << format_real(tol) << ' ' << (ok ? "hold" : "fail") << '\n';
  return ok ? kExitOk : kExitViolation;
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& writer, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    writer(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open " + path + " for writing");
  writer(file);
}

int cmd_sweep(const Common& c, const OptionHandles& h, std::ostream& out, std::ostream& err) {
  if (c.format != "csv" && c.format != "json") throw ValidationError("--format must be csv or json");
  const auto spec = make_spec(c, h);
  const auto result = sweep::run(spec);
  for (const auto& s : result.skipped) err << "skipped " << describe(s.point) << ": " << s.reason << '\n';
  write_output(
      c.out,
      [&](std::ostream& os) {
        if (c.format == "json") {
          sweep::write_json(os, result);
        } else {
          sweep::write_csv(os, result);
        }
      },
      out);
  if (!c.plot.empty()) write_output(c.plot, [&](std::ostream& os) { sweep::write_svg(os, result); }, out);
  err << result.rows.size() << " points, " << result.skipped.size() << " skipped; hold " << result.summary.hold
      << ", fail " << result.summary.fail << ", not applicable " << result.summary.not_applicable << '\n';
  return result.summary.fail > 0 ? kExitViolation : kExitOk;
}

const std::vector<bounds::TheoremId> kCompareSet = {bounds::TheoremId::cor31_3a, bounds::TheoremId::cor31_3b,
                                                    bounds::TheoremId::thm31,    bounds::TheoremId::thm32,
                                                    bounds::TheoremId::thm33,    bounds::TheoremId::thm34};

int cmd_compare(const Common& c, const OptionHandles& h, std::ostream& out, std::ostream& err) {
  auto spec = make_spec(c, h);
  if (spec.theorems.empty()) {
    spec.theorems = kCompareSet;
  } else {
    for (auto id : spec.theorems) {
      if (bounds::needs_second_function(id) || id == bounds::TheoremId::lemma21) {
        throw ValidationError("compare ranks single-function upper bounds only; got " + std::string(bounds::to_string(id)));
      }
    }
  }
  const auto result = sweep::run(spec);
  for (const auto& s : result.skipped) err << "skipped " << describe(s.point) << ": " << s.reason << '\n';
  bool below = false;
  for (const auto& row : result.rows) {
    const double lhs = row.reports.front().lhs;
    out << describe(row.point) << " lhs=" << format_real(lhs) << '\n';
    for (const auto& [id, value] : row.ranking.ordered) {
      const bounds::BoundReport* rep = nullptr;
      for (const auto& r : row.reports) {
        if (r.id == id) rep = &r;
      }
      const bool tight = std::find(row.ranking.tightest.begin(), row.ranking.tightest.end(), id) !=
                         row.ranking.tightest.end();
      const bool ok = rep->outcome == bounds::Outcome::hold;
      below = below || !ok;
      out << "  " << (tight ? '*' : ' ') << ' ' << bounds::to_string(id) << " rhs=" << format_real(value)
          << " margin=" << format_real(rep->margin) << (ok ? "" : " BELOW LHS") << '\n';
    }
    for (const auto& r : row.reports) {
      if (r.hypothesis != bounds::HypothesisStatus::certified || !std::isfinite(r.rhs)) {
        out << "    " << bounds::to_string(r.id) << " not-applicable";
        if (!r.hypothesis_note.empty()) out << ": " << r.hypothesis_note;
        out << '\n';
      }
    }
    out << "  tightest:";
    for (std::size_t i = 0; i < row.ranking.tightest.size(); ++i) {
      out << (i ? ", " : " ") << bounds::to_string(row.ranking.tightest[i]);
    }
    if (row.ranking.tightest.size() > 1) out << " (tie)";
    out << '\n';
  }
  return below ? kExitViolation : kExitOk;
}

}  // namespace

std::vector<std::string> split_command_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quote = false;
  bool have = false;
  for (char ch : line) {
    if (in_quote) {
      if (ch == '\'') {
        in_quote = false;
      } else {
        cur += ch;
      }
    } else if (ch == '\'') {
      in_quote = true;
      have = true;
    } else if (ch == '\\') {
      continue;
    } else if (ch == ' ' || ch == '\t' || ch == '\n') {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += ch;
      have = true;
    }
  }
  if (have) out.push_back(cur);
  if (!out.empty() && out.front() == "hhga") out.erase(out.begin());
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of Hermite-Hadamard type bounds for (alpha,m)-GA-convex functions", "hhga"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file mirroring the flags; [subcommand] sections apply to that subcommand");

  ConvexityArgs cx;
  auto* convex = app.add_subcommand("convexity", "check (alpha,m)-GA-convexity or (alpha,m)-convexity by sampling");
  convex->add_option("--f", cx.f, "expression in x")->required();
  convex->add_option("--kind", cx.kind, "ga or ordinary")->capture_default_str();
  convex->add_option("--direction", cx.direction, "convex or concave")->capture_default_str();
  convex->add_option("--alpha", cx.alpha)->capture_default_str();
  convex->add_option("--m", cx.m)->capture_default_str();
  convex->add_option("--lo", cx.lo, "left end of the sampled domain")->capture_default_str();
  convex->add_option("--hi", cx.hi, "right end of the sampled domain")->required();
  auto* q_opt = convex->add_option("--q", cx.q, "check |f'|^q instead of f");
  convex->add_option("--samples", cx.samples)->capture_default_str();
  convex->add_option("--seed", cx.seed)->capture_default_str();
  convex->add_option("--witness", cx.witness, "replay one triple x,y,lambda")->delimiter(',')->expected(3);

  Common vc;
  auto* verify = app.add_subcommand("verify", "evaluate bounds at one parameter point");
  const auto vh = add_point_options(verify, vc);

  Common ic;
  auto* identity = app.add_subcommand("identity", "residual of the integral identity behind the bounds");
  identity->add_option("--f", ic.f)->required();
  identity->add_option("--a", ic.a)->capture_default_str();
  identity->add_option("--b", ic.b)->capture_default_str();
  identity->add_option("--tol", ic.tol)->capture_default_str();

  Common sc;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate bounds over a parameter grid");
  const auto sh = add_grid_options(sweep_cmd, sc);
  sweep_cmd->add_option("--out", sc.out, "output file (default stdout)");
  sweep_cmd->add_option("--format", sc.format, "csv or json")->capture_default_str();
  sweep_cmd->add_option("--plot", sc.plot, "SVG of margin against the swept parameter");

  Common cc;
  auto* compare = app.add_subcommand("compare", "rank the single-function upper bounds at each grid point");
  const auto ch = add_grid_options(compare, cc);

  // --config may follow the subcommand name; it belongs to the top level
  std::vector<std::string> ordered;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      ordered.push_back(args[i]);
      ordered.push_back(args[++i]);
    } else if (args[i].rfind("--config=", 0) == 0) {
      ordered.push_back(args[i]);
    } else {
      rest.push_back(args[i]);
    }
  }
  ordered.insert(ordered.end(), rest.begin(), rest.end());
  std::vector<std::string> reversed(ordered.rbegin(), ordered.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (convex->parsed()) return cmd_convexity(cx, q_opt->count() > 0, out);
    if (verify->parsed()) return cmd_verify(vc, vh, out);
    if (identity->parsed()) return cmd_identity(ic, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sc, sh, out, err);
    if (compare->parsed()) return cmd_compare(cc, ch, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hhga::cli
