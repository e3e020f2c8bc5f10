#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "hhga/dual.hpp"
#include "hhga/error.hpp"

namespace hhga {

enum class NodeKind { literal, variable, neg, add, sub, mul, div, pow, call };

enum class Func { ln, exp, sqrt, abs, sin, cos };

std::string_view func_name(Func f);

/// One node of an expression tree. Nodes are immutable once built.
struct Node {
  NodeKind kind = NodeKind::literal;
  double value = 0.0;  // literal only
  Func func = Func::ln;  // call only
  std::shared_ptr<const Node> lhs;  // unary operand, call argument, or left operand
  std::shared_ptr<const Node> rhs;  // right operand of binary nodes
};

using NodePtr = std::shared_ptr<const Node>;

/// A parsed real-valued expression in the single variable `x`.
///
/// Grammar (whitespace-insensitive):
///
///     expr   := term (("+" | "-") term)*
///     term   := factor (("*" | "/") factor)*
///     factor := "-" factor | power
///     power  := atom ("^" factor)?
///     atom   := NUMBER | "x" | FUNC "(" expr ")" | "(" expr ")"
///     FUNC   := "ln" | "exp" | "sqrt" | "abs" | "sin" | "cos"
///
/// `^` is right-associative and binds tighter than unary minus, so `-x^2`
/// is `-(x^2)`. Implicit multiplication is not accepted.
class Expression {
 public:
  Expression(NodePtr root, std::string source);

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }
  const std::string& source() const noexcept { return source_; }

 private:
  NodePtr root_;
  std::string source_;
};

/// Throws ParseError (with byte offset and expected tokens) or UnknownIdentifierError.
Expression parse(std::string_view text);

/// Canonical text that re-parses to a structurally identical tree.
std::string serialize(const Expression& e);
std::string serialize(const Node& n);

bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const Expression& a, const Expression& b) {
  return structurally_equal(a.root(), b.root());
}

/// Value at x. Throws DomainError naming the offending subterm and argument.
double eval(const Expression& e, double x);

/// (f(x), f'(x)) by dual-number propagation. The value part equals eval(e, x) exactly.
Dual eval_dual(const Expression& e, double x);

/// A plain real function of one variable, the common currency of the
/// quadrature and convexity modules.
using RealFunction = std::function<double(double)>;

RealFunction as_function(const Expression& e);
RealFunction derivative_function(const Expression& e);

}  // namespace hhga
