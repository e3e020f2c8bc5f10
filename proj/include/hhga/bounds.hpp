#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhga/convexity.hpp"
#include "hhga/expr.hpp"

namespace hhga::bounds {

/// Identifiers, in declaration order, of the identity, the seven theorems and
/// their corollaries.
enum class TheoremId {
  lemma21,
  thm31,
  cor31_1,
  cor31_2,
  cor31_3a,
  cor31_3b,
  thm32,
  cor32,
  thm33,
  cor33,
  thm34,
  cor34,
  thm35,
  cor35_1,
  cor35_2,
  cor35_3,
  thm36,
  cor36,
  thm37,
  cor37,
};

std::string_view to_string(TheoremId id);
std::optional<TheoremId> parse_theorem_id(std::string_view text);
const std::vector<TheoremId>& all_theorem_ids();

/// thm35..thm37 and their corollaries bound a product f*g.
bool needs_second_function(TheoremId id);
/// thm37 and cor37 are lower bounds on the integral.
bool is_lower_bound(TheoremId id);

/// One hypothesis tuple. `alpha2`/`m2` parametrize g in the product
/// theorems and default to `alpha`/`m` when absent.
struct ParamPoint {
  double alpha = 1.0;
  double m = 1.0;
  double q = 1.0;
  std::optional<double> p;
  double a = 1.0;
  double b = 2.0;
  std::optional<double> alpha2;
  std::optional<double> m2;

  double alpha_g() const { return alpha2.value_or(alpha); }
  double m_g() const { return m2.value_or(m); }
};

/// Why `pt` does not satisfy the parameter hypotheses of `id`, or nullopt.
std::optional<std::string> applicability_issue(const ParamPoint& pt, TheoremId id);
/// Throws ValidationError carrying applicability_issue().
void validate(const ParamPoint& pt, TheoremId id);

/// a^{1/m}, computed in log space; exactly a when m == 1.
double root_point(double a, double m);

struct Evaluated {
  double value = 0.0;
  double quad_error = 0.0;
};

/// (b^2 f(b) - a^2 f(a))/2 - integral_a^b x f(x) dx, without absolute value.
Evaluated lhs_signed(const Expression& f, double a, double b);
/// |lhs_signed|, the quantity bounded by thm31..thm34.
Evaluated lhs_main(const Expression& f, double a, double b);
/// (ln b - ln a)/2 * integral_0^1 a^{3(1-t)} b^{3t} f'(a^{1-t} b^t) dt, signed.
Evaluated lemma_rhs(const Expression& f, double a, double b);
/// integral_a^b f(x) g(x) dx.
Evaluated lhs_product(const Expression& f, const Expression& g, double a, double b);

double thm31_rhs(const Expression& f, const ParamPoint& pt);
/// Corollaries of thm31 applicable at pt: cor31_1 (q = 1), cor31_2
/// (alpha = 1), cor31_3a and cor31_3b (always).
std::vector<std::pair<TheoremId, double>> cor31_bounds(const Expression& f, const ParamPoint& pt);
double thm32_rhs(const Expression& f, const ParamPoint& pt);
double cor32_rhs(const Expression& f, const ParamPoint& pt);
double thm33_rhs(const Expression& f, const ParamPoint& pt);
double cor33_rhs(const Expression& f, const ParamPoint& pt);
double thm34_rhs(const Expression& f, const ParamPoint& pt);
double cor34_rhs(const Expression& f, const ParamPoint& pt);

double thm35_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
double cor35_1_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
double cor35_2_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
/// Evaluated exactly as printed, prefactor L^{1-1/q} / (ln b - ln a)^{2/(q-1)}.
double cor35_3_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
double thm36_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
double cor36_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
double thm37_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);
/// Evaluated exactly as printed, prefactor (ln b - ln a).
double cor37_rhs(const Expression& f, const Expression& g, const ParamPoint& pt);

/// Right-hand side of any bound (not lemma21). Validates pt first.
double rhs(TheoremId id, const Expression& f, const std::optional<Expression>& g, const ParamPoint& pt);

enum class HypothesisStatus { certified, violated, none };
enum class Outcome { hold, fail, not_applicable };

std::string_view to_string(HypothesisStatus s);
std::string_view to_string(Outcome o);

struct BoundReport {
  TheoremId id = TheoremId::thm31;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  HypothesisStatus hypothesis = HypothesisStatus::none;
  std::string hypothesis_note;  // which condition failed, with its witness
  std::optional<convexity::Witness> witness;
  Outcome outcome = Outcome::not_applicable;
  double quad_error = 0.0;
  double tol_compare = 0.0;
};

struct VerifyOptions {
  double tol = 1e-8;
  std::size_t samples = 256;
  std::uint64_t seed = 42;
};

/// max(tol, 10 * quad_error).
double comparison_tolerance(double tol, double quad_error);

/// For each requested id: certify the hypothesis by sampling on
/// [1e-12, max(a^{1/m}, b)], evaluate both sides, and classify. An id whose
/// hypothesis is not certified is reported as not_applicable. Throws
/// ValidationError if pt does not meet an id's parameter conditions or g is
/// missing for a product theorem.
std::vector<BoundReport> verify(const Expression& f, const std::optional<Expression>& g, const ParamPoint& pt,
                                const std::vector<TheoremId>& theorems, const VerifyOptions& opts = {});

/// Ids from `candidates` whose parameter conditions pt meets (and whose g requirement is met).
std::vector<TheoremId> applicable_theorems(const ParamPoint& pt, bool have_g, const std::vector<TheoremId>& candidates);

}  // namespace hhga::bounds
