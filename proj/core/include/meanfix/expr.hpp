#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "meanfix/error.hpp"

namespace meanfix {

/// Syntax error; `position` is the 0-based offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string &what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Domain error during evaluation: log of a non-positive number, division
/// by zero, square root of a negative number, or a non-finite result.
class EvalError : public Error {
 public:
  using Error::Error;
};

struct Bindings {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Immutable arithmetic expression over x, y and theta.
///
/// Grammar, loosest binding first:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | x | y | theta | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | log | abs | sqrt
///
/// so ^ binds tighter than unary minus (-2^2 = -4) and associates to the
/// right (2^3^2 = 512).
class Expr {
 public:
  struct Node;

  static Expr parse(std::string_view text);

  double eval(const Bindings &b) const;
  double operator()(double x, double y, double theta = 0.0) const { return eval({x, y, theta}); }

  /// Source text with the fewest parentheses that parse back to the same tree.
  std::string print() const;

  /// Structural equality of the trees.
  bool operator==(const Expr &other) const;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

} // namespace meanfix
