#pragma once

// One-variable expressions for V(v) and rho(x): a recursive-descent parser,
// a canonical printer and third-order jet (truncated Taylor) evaluation.
//
// Grammar, loosest binding first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?        exponent must be constant
//   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//   func    := exp | ln | sin | cos | tanh | sqrt

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "regulab/errors.hpp"

namespace regulab::expr {

/// Value and first three derivatives at a point.
struct Jet3 {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static constexpr Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }

  friend bool operator==(const Jet3&, const Jet3&) = default;
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) { return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}; }
inline Jet3 operator-(const Jet3& a, const Jet3& b) { return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}; }
inline Jet3 operator-(const Jet3& a) { return {-a.f, -a.d1, -a.d2, -a.d3}; }

inline Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.f * b.f, a.d1 * b.f + a.f * b.d1, a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
          a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3};
}

/// Chain rule (Faa di Bruno to third order): g(u) given g and its first three
/// derivatives evaluated at u.f.
inline Jet3 compose(const Jet3& u, double g0, double g1, double g2, double g3) {
  const double u1 = u.d1, u2 = u.d2, u3 = u.d3;
  return {g0, g1 * u1, g2 * u1 * u1 + g1 * u2, g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3};
}

enum class Func { Exp, Ln, Sin, Cos, Tanh, Sqrt };

inline const char* func_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tanh: return "tanh";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  double value = 0.0;
  bool is_pi = false;
};
struct Variable {};
struct Negate {
  NodePtr operand;
};
struct Binary {
  char op = '+';  // one of + - * /
  NodePtr lhs, rhs;
};
struct Power {
  NodePtr base;
  double exponent = 1.0;
};
struct Call {
  Func func = Func::Exp;
  NodePtr arg;
};

struct Node {
  std::variant<Constant, Variable, Negate, Binary, Power, Call> data;
};

/// Immutable parsed expression in a single named variable.
class Expression {
 public:
  Expression(NodePtr root, std::string variable) : root_(std::move(root)), variable_(std::move(variable)) {}
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::string& variable() const { return variable_; }

 private:
  NodePtr root_;
  std::string variable_;
};

namespace detail {

inline NodePtr make(auto&& alt) { return std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)}); }

inline bool is_constant(const Node& n) {
  return std::visit(
      [](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Constant>) return true;
        else if constexpr (std::is_same_v<T, Variable>) return false;
        else if constexpr (std::is_same_v<T, Negate>) return is_constant(*a.operand);
        else if constexpr (std::is_same_v<T, Binary>) return is_constant(*a.lhs) && is_constant(*a.rhs);
        else if constexpr (std::is_same_v<T, Power>) return is_constant(*a.base);
        else return is_constant(*a.arg);
      },
      n.data);
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      skip_space();
      if (accept('+')) lhs = make(Binary{'+', lhs, parse_term()});
      else if (accept('-')) lhs = make(Binary{'-', lhs, parse_term()});
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      skip_space();
      if (accept('*')) lhs = make(Binary{'*', lhs, parse_unary()});
      else if (accept('/')) lhs = make(Binary{'/', lhs, parse_unary()});
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    skip_space();
    if (accept('-')) return make(Negate{parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power();  // folds the exponent with eval_node, defined below

  NodePtr parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == variable_) return make(Variable{});
      if (name == "pi") return make(Constant{std::numbers::pi, true});
      static constexpr Func kFuncs[] = {Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Tanh, Func::Sqrt};
      for (Func f : kFuncs) {
        if (name == func_name(f)) {
          skip_space();
          expect('(');
          NodePtr arg = parse_expr();
          expect(')');
          return make(Call{f, arg});
        }
      }
      throw UnknownIdentifier(std::string(name), start);
    }
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value,
                                           std::chars_format::general);
    if (ec != std::errc() || ptr == text_.data() + pos_) throw SyntaxError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return make(Constant{value, false});
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    if (text_[pos_] != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string print_node(const Node& n, const std::string& var) {
  return std::visit(
      [&](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return a.is_pi ? std::string("pi") : format_number(a.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return var;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + print_node(*a.operand, var) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          return "(" + print_node(*a.lhs, var) + " " + a.op + " " + print_node(*a.rhs, var) + ")";
        } else if constexpr (std::is_same_v<T, Power>) {
          const std::string e = format_number(a.exponent);
          return "(" + print_node(*a.base, var) + "^" + (a.exponent < 0 ? "(" + e + ")" : e) + ")";
        } else {
          return std::string(func_name(a.func)) + "(" + print_node(*a.arg, var) + ")";
        }
      },
      n.data);
}

inline Jet3 power_jet(const Jet3& u, double p, const Node& where, const std::string& var) {
  const double x = u.f;
  const bool integral = p == std::floor(p);
  if (x < 0.0 && !integral)
    throw DomainError("non-integer power of a negative value in " + print_node(where, var));
  // c_k = p (p-1) ... (p-k+1); x^(p-k) is skipped when its coefficient is 0.
  double g[4];
  double coeff = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (coeff == 0.0) {
      g[k] = 0.0;
    } else {
      if (x == 0.0 && p - k < 0.0) throw DomainError("power of zero is singular in " + print_node(where, var));
      g[k] = coeff * std::pow(x, p - k);
    }
    coeff *= (p - k);
  }
  return compose(u, g[0], g[1], g[2], g[3]);
}

inline Jet3 eval_node(const Node& n, double x, const std::string& var) {
  return std::visit(
      [&](const auto& a) -> Jet3 {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return Jet3::constant(a.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return Jet3::variable(x);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(*a.operand, x, var);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const Jet3 l = eval_node(*a.lhs, x, var);
          const Jet3 r = eval_node(*a.rhs, x, var);
          switch (a.op) {
            case '+': return l + r;
            case '-': return l - r;
            case '*': return l * r;
            default: {
              if (r.f == 0.0) throw DomainError("division by zero in " + print_node(n, var));
              const double inv = 1.0 / r.f;
              return l * compose(r, inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv);
            }
          }
        } else if constexpr (std::is_same_v<T, Power>) {
          return power_jet(eval_node(*a.base, x, var), a.exponent, n, var);
        } else {
          const Jet3 u = eval_node(*a.arg, x, var);
          const double t = u.f;
          switch (a.func) {
            case Func::Exp: {
              const double e = std::exp(t);
              return compose(u, e, e, e, e);
            }
            case Func::Ln: {
              if (!(t > 0.0)) throw DomainError("ln of a nonpositive value in " + print_node(n, var));
              const double inv = 1.0 / t;
              return compose(u, std::log(t), inv, -inv * inv, 2.0 * inv * inv * inv);
            }
            case Func::Sin: {
              const double s = std::sin(t), c = std::cos(t);
              return compose(u, s, c, -s, -c);
            }
            case Func::Cos: {
              const double s = std::sin(t), c = std::cos(t);
              return compose(u, c, -s, -c, s);
            }
            case Func::Tanh: {
              const double th = std::tanh(t), sech2 = 1.0 - th * th;
              return compose(u, th, sech2, -2.0 * th * sech2, sech2 * (6.0 * th * th - 2.0));
            }
            case Func::Sqrt: {
              if (!(t > 0.0)) throw DomainError("sqrt needs a positive argument in " + print_node(n, var));
              const double r = std::sqrt(t);
              return compose(u, r, 0.5 / r, -0.25 / (r * t), 0.375 / (r * t * t));
            }
          }
          return Jet3{};
        }
      },
      n.data);
}

inline NodePtr Parser::parse_power() {
  NodePtr base = parse_primary();
  skip_space();
  if (!accept('^')) return base;
  skip_space();
  const std::size_t exponent_pos = pos_;
  NodePtr exponent = parse_unary();
  if (!is_constant(*exponent)) throw SyntaxError("exponent must be a constant", exponent_pos);
  const double p = eval_node(*exponent, 0.0, std::string(variable_)).f;
  return make(Power{base, p});
}

inline bool same_tree(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.data);
        if constexpr (std::is_same_v<T, Constant>) return x.value == y.value && x.is_pi == y.is_pi;
        else if constexpr (std::is_same_v<T, Variable>) return true;
        else if constexpr (std::is_same_v<T, Negate>) return same_tree(*x.operand, *y.operand);
        else if constexpr (std::is_same_v<T, Binary>)
          return x.op == y.op && same_tree(*x.lhs, *y.lhs) && same_tree(*x.rhs, *y.rhs);
        else if constexpr (std::is_same_v<T, Power>) return x.exponent == y.exponent && same_tree(*x.base, *y.base);
        else return x.func == y.func && same_tree(*x.arg, *y.arg);
      },
      a.data);
}

}  // namespace detail

/// Parses `text` as an expression in the single free variable `variable`.
/// Throws SyntaxError (with a 0-based position) or UnknownIdentifier.
inline Expression parse(std::string_view text, std::string_view variable) {
  if (variable.empty() || variable == "pi") throw InvalidArgument("invalid variable name");
  return Expression(detail::Parser(text, variable).parse(), std::string(variable));
}

/// Fully parenthesised text that parses back to the same tree.
inline std::string print(const Expression& e) { return detail::print_node(e.root(), e.variable()); }

inline bool structurally_equal(const Expression& a, const Expression& b) {
  return detail::same_tree(a.root(), b.root());
}

/// Value and derivatives up to third order, propagated exactly through the
/// tree. Throws DomainError naming the offending sub-expression.
inline Jet3 eval_jet3(const Expression& e, double x) { return detail::eval_node(e.root(), x, e.variable()); }

inline double eval(const Expression& e, double x) { return eval_jet3(e, x).f; }

}  // namespace regulab::expr
