#include "meanfix/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace meanfix {

ParseError::ParseError(std::size_t position, const std::string &what)
    : Error(fmt::format("parse error at position {}: {}", position, what)), position_(position) {}

enum class Kind { number, var_x, var_y, var_theta, neg, add, sub, mul, div, pow, sin, cos, exp, log, abs, sqrt };

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Named {
  std::string_view name;
  Kind kind;
};

constexpr std::array<Named, 3> kVariables{{{"x", Kind::var_x}, {"y", Kind::var_y}, {"theta", Kind::var_theta}}};
constexpr std::array<Named, 6> kFunctions{
    {{"sin", Kind::sin}, {"cos", Kind::cos}, {"exp", Kind::exp}, {"log", Kind::log}, {"abs", Kind::abs}, {"sqrt", Kind::sqrt}}};

NodePtr leaf(Kind k, double value = 0.0) { return std::make_shared<const Expr::Node>(Expr::Node{k, value, nullptr, nullptr}); }
NodePtr unary(Kind k, NodePtr a) { return std::make_shared<const Expr::Node>(Expr::Node{k, 0.0, std::move(a), nullptr}); }
NodePtr binary(Kind k, NodePtr a, NodePtr b) {
  return std::make_shared<const Expr::Node>(Expr::Node{k, 0.0, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(pos_, fmt::format("unexpected '{}' after expression", s_[pos_]));
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, fmt::format("expected '{}' but input ended", c));
    if (s_[pos_] != c) throw ParseError(pos_, fmt::format("expected '{}' but found '{}'", c, s_[pos_]));
    ++pos_;
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (accept('+')) {
        e = binary(Kind::add, e, term());
      } else if (accept('-')) {
        e = binary(Kind::sub, e, term());
      } else {
        return e;
      }
    }
  }

  NodePtr term() {
    NodePtr e = unary_expr();
    for (;;) {
      if (accept('*')) {
        e = binary(Kind::mul, e, unary_expr());
      } else if (accept('/')) {
        e = binary(Kind::div, e, unary_expr());
      } else {
        return e;
      }
    }
  }

  NodePtr unary_expr() {
    if (accept('-')) return unary(Kind::neg, unary_expr());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::pow, base, unary_expr());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      NodePtr e = expr();
      skip();
      if (pos_ >= s_.size()) throw ParseError(open, "unbalanced '('");
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(pos_, fmt::format("unexpected '{}'", c));
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start + 1 && s_[start] == '.') throw ParseError(start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p]))) throw ParseError(pos_, "malformed exponent");
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      pos_ = p;
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc() || end != s_.data() + pos_ || !std::isfinite(value)) {
      throw ParseError(start, fmt::format("number '{}' is out of range", s_.substr(start, pos_ - start)));
    }
    return leaf(Kind::number, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    for (const auto &v : kVariables) {
      if (v.name == name) return leaf(v.kind);
    }
    for (const auto &f : kFunctions) {
      if (f.name != name) continue;
      skip();
      if (pos_ >= s_.size() || s_[pos_] != '(') throw ParseError(pos_, fmt::format("expected '(' after '{}'", name));
      const std::size_t open = pos_++;
      NodePtr arg = expr();
      skip();
      if (pos_ >= s_.size()) throw ParseError(open, "unbalanced '('");
      expect(')');
      return unary(f.kind, arg);
    }
    throw ParseError(start, fmt::format("unknown identifier '{}'", name));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double checked(double v, const char *what) {
  if (!std::isfinite(v)) throw EvalError(fmt::format("{} produced a non-finite value", what));
  return v;
}

double eval_node(const Expr::Node &n, const Bindings &b) {
  switch (n.kind) {
    case Kind::number:
      return n.value;
    case Kind::var_x:
      return b.x;
    case Kind::var_y:
      return b.y;
    case Kind::var_theta:
      return b.theta;
    case Kind::neg:
      return -eval_node(*n.lhs, b);
    case Kind::add:
      return checked(eval_node(*n.lhs, b) + eval_node(*n.rhs, b), "addition");
    case Kind::sub:
      return checked(eval_node(*n.lhs, b) - eval_node(*n.rhs, b), "subtraction");
    case Kind::mul:
      return checked(eval_node(*n.lhs, b) * eval_node(*n.rhs, b), "multiplication");
    case Kind::div: {
      const double num = eval_node(*n.lhs, b);
      const double den = eval_node(*n.rhs, b);
      if (den == 0.0) throw EvalError("division by zero");
      return checked(num / den, "division");
    }
    case Kind::pow:
      return checked(std::pow(eval_node(*n.lhs, b), eval_node(*n.rhs, b)), "power");
    case Kind::sin:
      return std::sin(eval_node(*n.lhs, b));
    case Kind::cos:
      return std::cos(eval_node(*n.lhs, b));
    case Kind::exp:
      return checked(std::exp(eval_node(*n.lhs, b)), "exp");
    case Kind::log: {
      const double a = eval_node(*n.lhs, b);
      if (!(a > 0.0)) throw EvalError(fmt::format("log of non-positive value {}", a));
      return std::log(a);
    }
    case Kind::abs:
      return std::abs(eval_node(*n.lhs, b));
    case Kind::sqrt: {
      const double a = eval_node(*n.lhs, b);
      if (a < 0.0) throw EvalError(fmt::format("sqrt of negative value {}", a));
      return std::sqrt(a);
    }
  }
  throw EvalError("corrupt expression tree");
}

int precedence(Kind k) {
  switch (k) {
    case Kind::add:
    case Kind::sub:
      return 1;
    case Kind::mul:
    case Kind::div:
      return 2;
    case Kind::neg:
      return 3;
    case Kind::pow:
      return 4;
    default:
      return 5;
  }
}

std::string_view symbol(Kind k) {
  switch (k) {
    case Kind::add:
      return " + ";
    case Kind::sub:
      return " - ";
    case Kind::mul:
      return " * ";
    case Kind::div:
      return " / ";
    default:
      return "^";
  }
}

void print_node(const Expr::Node &n, std::string &out);

void print_child(const Expr::Node &n, bool parens, std::string &out) {
  if (parens) out += '(';
  print_node(n, out);
  if (parens) out += ')';
}

void print_node(const Expr::Node &n, std::string &out) {
  const int p = precedence(n.kind);
  switch (n.kind) {
    case Kind::number:
      out += fmt::format("{}", n.value);
      return;
    case Kind::var_x:
      out += 'x';
      return;
    case Kind::var_y:
      out += 'y';
      return;
    case Kind::var_theta:
      out += "theta";
      return;
    case Kind::neg:
      out += '-';
      print_child(*n.lhs, precedence(n.lhs->kind) < 3, out);
      return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div:
      print_child(*n.lhs, precedence(n.lhs->kind) < p, out);
      out += symbol(n.kind);
      print_child(*n.rhs, precedence(n.rhs->kind) <= p, out);
      return;
    case Kind::pow:
      print_child(*n.lhs, precedence(n.lhs->kind) <= p, out);
      out += '^';
      print_child(*n.rhs, precedence(n.rhs->kind) < 3, out);
      return;
    default:
      for (const auto &f : kFunctions) {
        if (f.kind == n.kind) out += f.name;
      }
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Expr::Node *a, const Expr::Node *b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Kind::number && a->value != b->value) return false;
  return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

} // namespace

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).run()); }

double Expr::eval(const Bindings &b) const { return eval_node(*root_, b); }

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::operator==(const Expr &other) const { return equal_nodes(root_.get(), other.root_.get()); }

} // namespace meanfix
