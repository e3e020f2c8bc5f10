#include "hhga/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hhga {

std::string_view func_name(Func f) {
  switch (f) {
    case Func::ln: return "ln";
    case Func::exp: return "exp";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
  }
  return "?";
}

Expression::Expression(NodePtr root, std::string source) : root_(std::move(root)), source_(std::move(source)) {
  if (!root_) throw Error("expression has no root node");
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end, invalid };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::end, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(pos_ + 1))) {
      return lex_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      return {Tok::ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    const auto one = src_.substr(start, 1);
    switch (c) {
      case '+': return {Tok::plus, start, one};
      case '-': return {Tok::minus, start, one};
      case '*': return {Tok::star, start, one};
      case '/': return {Tok::slash, start, one};
      case '^': return {Tok::caret, start, one};
      case '(': return {Tok::lparen, start, one};
      case ')': return {Tok::rparen, start, one};
      default: return {Tok::invalid, start, one};
    }
  }

 private:
  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token lex_number() {
    const std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit_at(p)) {
        pos_ = p;
        while (digit_at(pos_)) ++pos_;
      }
    }
    return {Tok::number, start, src_.substr(start, pos_ - start)};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

std::optional<Func> lookup_func(std::string_view name) {
  static constexpr std::array<Func, 6> all = {Func::ln, Func::exp, Func::sqrt, Func::abs, Func::sin, Func::cos};
  for (Func f : all) {
    if (func_name(f) == name) return f;
  }
  return std::nullopt;
}

NodePtr make_leaf(NodeKind kind, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  return n;
}

NodePtr make_node(NodeKind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_call(Func f, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->func = f;
  n->lhs = std::move(arg);
  return n;
}

const std::vector<std::string> kOperandStart = {"number", "x", "function name", "(", "-"};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    if (tok_.kind != Tok::end) fail({"+", "-", "*", "/", "^", "end of input"});
    return root;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = tok_.kind == Tok::end ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw ParseError(tok_.offset, std::move(expected), found);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const NodeKind k = tok_.kind == Tok::plus ? NodeKind::add : NodeKind::sub;
      advance();
      lhs = make_node(k, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const NodeKind k = tok_.kind == Tok::star ? NodeKind::mul : NodeKind::div;
      advance();
      lhs = make_node(k, lhs, parse_factor());
    }
    return lhs;
  }

  NodePtr parse_factor() {
    if (tok_.kind == Tok::minus) {
      advance();
      return make_node(NodeKind::neg, parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (tok_.kind == Tok::caret) {
      advance();
      return make_node(NodeKind::pow, base, parse_factor());
    }
    return base;
  }

  NodePtr parse_atom() {
    switch (tok_.kind) {
      case Tok::number: {
        double v = 0.0;
        const auto* first = tok_.text.data();
        const auto* last = first + tok_.text.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail({"representable number"});
        advance();
        return make_leaf(NodeKind::literal, v);
      }
      case Tok::ident: {
        if (tok_.text == "x") {
          advance();
          return make_leaf(NodeKind::variable);
        }
        const auto f = lookup_func(tok_.text);
        if (!f) throw UnknownIdentifierError(tok_.offset, std::string(tok_.text));
        advance();
        if (tok_.kind != Tok::lparen) fail({"("});
        advance();
        NodePtr arg = parse_expr();
        if (tok_.kind != Tok::rparen) fail({"+", "-", "*", "/", "^", ")"});
        advance();
        return make_call(*f, arg);
      }
      case Tok::lparen: {
        advance();
        NodePtr inner = parse_expr();
        if (tok_.kind != Tok::rparen) fail({"+", "-", "*", "/", "^", ")"});
        advance();
        return inner;
      }
      default:
        fail(kOperandStart);
    }
  }

  Lexer lexer_;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::neg: return 3;
    case NodeKind::pow: return 4;
    default: return 5;
  }
}

void print(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::literal: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case NodeKind::variable: out += 'x'; return;
    case NodeKind::neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case NodeKind::call:
      out += func_name(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::pow:
      print_child(*n.lhs, 5, out);
      out += '^';
      print_child(*n.rhs, 3, out);
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      const int p = precedence(n);
      static constexpr std::array<const char*, 4> ops = {" + ", " - ", "*", "/"};
      print_child(*n.lhs, p, out);
      out += ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::add)];
      print_child(*n.rhs, p + 1, out);
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double value_of(double v) { return v; }
double value_of(const Dual& d) { return d.value; }

bool finite_all(double v) { return std::isfinite(v); }
bool finite_all(const Dual& d) { return std::isfinite(d.value) && std::isfinite(d.deriv); }

template <class T>
T lift(double c) {
  if constexpr (std::is_same_v<T, Dual>) {
    return Dual::constant(c);
  } else {
    return c;
  }
}

/// Exponent given as an integer literal, possibly negated.
std::optional<double> structural_integer(const Node& n) {
  if (n.kind == NodeKind::literal && std::floor(n.value) == n.value) return n.value;
  if (n.kind == NodeKind::neg && n.lhs->kind == NodeKind::literal && std::floor(n.lhs->value) == n.lhs->value) {
    return -n.lhs->value;
  }
  return std::nullopt;
}

[[noreturn]] void domain_fail(const Node& n, const std::string& what, double arg, double x) {
  throw DomainError(what + " in '" + serialize(n) + "': argument " + format_real(arg) + " at x = " +
                    format_real(x));
}

template <class T>
T eval_node(const Node& n, const T& x, double xv) {
  T r{};
  switch (n.kind) {
    case NodeKind::literal: return lift<T>(n.value);
    case NodeKind::variable: return x;
    case NodeKind::neg: r = -eval_node(*n.lhs, x, xv); break;
    case NodeKind::add: r = eval_node(*n.lhs, x, xv) + eval_node(*n.rhs, x, xv); break;
    case NodeKind::sub: r = eval_node(*n.lhs, x, xv) - eval_node(*n.rhs, x, xv); break;
    case NodeKind::mul: r = eval_node(*n.lhs, x, xv) * eval_node(*n.rhs, x, xv); break;
    case NodeKind::div: {
      const T num = eval_node(*n.lhs, x, xv);
      const T den = eval_node(*n.rhs, x, xv);
      if (value_of(den) == 0.0) domain_fail(n, "division by zero", value_of(den), xv);
      r = num / den;
      break;
    }
    case NodeKind::pow: {
      const T base = eval_node(*n.lhs, x, xv);
      const double bv = value_of(base);
      if (const auto k = structural_integer(*n.rhs)) {
        if (bv == 0.0 && *k < 0.0) domain_fail(n, "zero raised to a negative power", bv, xv);
        if constexpr (std::is_same_v<T, Dual>) {
          r = pow_const(base, *k);
        } else {
          r = std::pow(base, *k);
        }
        break;
      }
      if (bv <= 0.0) domain_fail(n, "non-integer power of a non-positive base", bv, xv);
      const T ex = eval_node(*n.rhs, x, xv);
      if constexpr (std::is_same_v<T, Dual>) {
        r = pow(base, ex);
      } else {
        r = std::pow(base, ex);
      }
      break;
    }
    case NodeKind::call: {
      const T arg = eval_node(*n.lhs, x, xv);
      const double av = value_of(arg);
      using std::abs, std::cos, std::exp, std::log, std::sin, std::sqrt;
      switch (n.func) {
        case Func::ln:
          if (av <= 0.0) domain_fail(n, "logarithm of a non-positive number", av, xv);
          r = log(arg);
          break;
        case Func::exp: r = exp(arg); break;
        case Func::sqrt:
          if (av < 0.0) domain_fail(n, "square root of a negative number", av, xv);
          if constexpr (std::is_same_v<T, Dual>) {
            if (av == 0.0 && arg.deriv != 0.0) domain_fail(n, "square root is not differentiable", av, xv);
            if (av == 0.0) {
              r = Dual::constant(0.0);
              break;
            }
          }
          r = sqrt(arg);
          break;
        case Func::abs: r = abs(arg); break;
        case Func::sin: r = sin(arg); break;
        case Func::cos: r = cos(arg); break;
      }
      break;
    }
  }
  if (!finite_all(r)) domain_fail(n, "non-finite result", value_of(r), xv);
  return r;
}

}  // namespace

Expression parse(std::string_view text) {
  Parser p(text);
  return Expression(p.parse_all(), std::string(text));
}

std::string serialize(const Node& n) {
  std::string out;
  print(n, out);
  return out;
}

std::string serialize(const Expression& e) { return serialize(e.root()); }

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::literal: return a.value == b.value;
    case NodeKind::variable: return true;
    case NodeKind::call: return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::neg: return structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

double eval(const Expression& e, double x) {
  if (!std::isfinite(x)) throw DomainError("expression evaluated at non-finite x = " + format_real(x));
  return eval_node<double>(e.root(), x, x);
}

Dual eval_dual(const Expression& e, double x) {
  if (!std::isfinite(x)) throw DomainError("expression evaluated at non-finite x = " + format_real(x));
  return eval_node<Dual>(e.root(), Dual::variable(x), x);
}

RealFunction as_function(const Expression& e) {
  return [e](double x) { return eval(e, x); };
}

RealFunction derivative_function(const Expression& e) {
  return [e](double x) { return eval_dual(e, x).deriv; };
}

}  // namespace hhga
