#include <doctest.h>

#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "meanfix/expr.hpp"

using namespace meanfix;

namespace {

// Shunting-yard reference evaluator. Tokens are re-lexed from the source
// text; `bad` records any non-finite intermediate value.
struct Reference {
  double x, y, theta;
  bool bad = false;

  struct Tok {
    char kind; // n number, v variable, f function, o operator, ( )
    double value = 0;
    std::string name;
  };

  static int prec(char op) { return op == '+' || op == '-' ? 1 : op == '*' || op == '/' ? 2 : op == 'u' ? 3 : 4; }
  static bool right(char op) { return op == '^' || op == 'u'; }

  double run(const std::string &s) {
    std::vector<Tok> out;
    std::vector<Tok> ops;
    bool expect_operand = true;
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t used = 0;
        const double v = std::stod(s.substr(i), &used);
        out.push_back({'n', v, {}});
        i += used;
        expect_operand = false;
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
        const std::string name = s.substr(i, j - i);
        i = j;
        if (name == "x" || name == "y" || name == "theta") {
          out.push_back({'v', 0, name});
          expect_operand = false;
        } else {
          ops.push_back({'f', 0, name});
        }
      } else if (c == '(') {
        ops.push_back({'(', 0, {}});
        ++i;
        expect_operand = true;
      } else if (c == ')') {
        while (ops.back().kind != '(') out.push_back(pop(ops));
        ops.pop_back();
        if (!ops.empty() && ops.back().kind == 'f') out.push_back(pop(ops));
        ++i;
        expect_operand = false;
      } else {
        const char op = c == '-' && expect_operand ? 'u' : c;
        while (!ops.empty() && ops.back().kind == 'o') {
          const char top = ops.back().name[0];
          if (prec(top) > prec(op) || (prec(top) == prec(op) && !right(op))) {
            out.push_back(pop(ops));
          } else {
            break;
          }
        }
        ops.push_back({'o', 0, std::string(1, op)});
        ++i;
        expect_operand = true;
      }
    }
    while (!ops.empty()) out.push_back(pop(ops));

    std::vector<double> st;
    for (const auto &t : out) {
      if (t.kind == 'n') {
        st.push_back(t.value);
      } else if (t.kind == 'v') {
        st.push_back(t.name == "x" ? x : t.name == "y" ? y : theta);
      } else if (t.kind == 'f' || t.name == "u") {
        const double a = st.back();
        st.pop_back();
        st.push_back(check(apply1(t.name, a)));
      } else {
        const double b = st.back();
        st.pop_back();
        const double a = st.back();
        st.pop_back();
        st.push_back(check(apply2(t.name[0], a, b)));
      }
    }
    return st.back();
  }

  static Tok pop(std::vector<Tok> &v) {
    Tok t = v.back();
    v.pop_back();
    return t;
  }
  double check(double v) {
    if (!std::isfinite(v)) bad = true;
    return v;
  }
  static double apply1(const std::string &f, double a) {
    if (f == "u") return -a;
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "exp") return std::exp(a);
    if (f == "log") return a > 0 ? std::log(a) : std::nan("");
    if (f == "abs") return std::abs(a);
    return a >= 0 ? std::sqrt(a) : std::nan("");
  }
  static double apply2(char op, double a, double b) {
    switch (op) {
      case '+':
        return a + b;
      case '-':
        return a - b;
      case '*':
        return a * b;
      case '/':
        return b != 0 ? a / b : std::nan("");
      default:
        return std::pow(a, b);
    }
  }
};

// Random source text with arbitrary spacing and redundant parentheses.
std::string random_expr(std::mt19937_64 &rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const auto sp = [&] { return pick(rng) < 3 ? std::string(" ") : std::string(); };
  if (depth == 0 || pick(rng) < 2) {
    switch (pick(rng) % 5) {
      case 0:
        return "x";
      case 1:
        return "y";
      case 2:
        return "theta";
      default: {
        std::uniform_int_distribution<int> num(0, 400);
        const int n = num(rng);
        return n % 3 == 0 ? std::to_string(n / 40) : std::to_string(n / 100) + "." + std::to_string(n % 100);
      }
    }
  }
  static const char *funcs[] = {"sin", "cos", "exp", "log", "abs", "sqrt"};
  static const char *binops[] = {"+", "-", "*", "/", "^"};
  switch (pick(rng) % 5) {
    case 0:
      return "-" + sp() + random_expr(rng, depth - 1);
    case 1:
      return std::string(funcs[pick(rng) % 6]) + "(" + sp() + random_expr(rng, depth - 1) + sp() + ")";
    case 2:
      return "(" + random_expr(rng, depth - 1) + ")";
    default: {
      const char *op = binops[pick(rng) % 5];
      // Keep powers tame so that most cases evaluate.
      const std::string rhs = *op == '^' ? std::to_string(pick(rng) % 4) : random_expr(rng, depth - 1);
      return random_expr(rng, depth - 1) + sp() + op + sp() + rhs;
    }
  }
}

std::size_t parse_error_at(const std::string &text) {
  try {
    Expr::parse(text);
  } catch (const ParseError &e) {
    return e.position();
  }
  return std::string::npos;
}

} // namespace

TEST_CASE("precedence and associativity") {
  CHECK(Expr::parse("x^2 - y^2")(1, 2) == -3);
  CHECK(Expr::parse("2+3*x")(1, 0) == 5);
  CHECK(Expr::parse("2^3^2")(0, 0) == 512);
  CHECK(Expr::parse("-2^2")(0, 0) == -4);
  CHECK(Expr::parse("2^-1")(0, 0) == 0.5);
  CHECK(Expr::parse("8/4/2")(0, 0) == 1);
  CHECK(Expr::parse("1-2-3")(0, 0) == -4);
  CHECK(Expr::parse("--x")(3, 0) == 3);
  CHECK(Expr::parse("1.5e2 + .5")(0, 0) == 150.5);
}

TEST_CASE("functions") {
  CHECK(Expr::parse("sin(0)")(0, 0) == 0);
  CHECK(Expr::parse("cos(theta)")(0, 0, std::numbers::pi) == -1);
  CHECK(Expr::parse("sqrt(x*x+y*y)")(3, 4) == 5);
  CHECK(Expr::parse("abs(x) + exp(0) + log(exp(2))")(-2, 0) == doctest::Approx(5.0));
}

TEST_CASE("parse errors carry the offending position") {
  CHECK(parse_error_at("2 + * 3") == 4);
  CHECK(parse_error_at("(1 + 2") == 0);
  CHECK(parse_error_at("foo(x)") == 0);
  CHECK(parse_error_at("1 +") == 3);
  CHECK(parse_error_at("2 3") == 2);
  CHECK(parse_error_at("sin x") == 4);
  CHECK(parse_error_at("1e+") == 1);
  CHECK(parse_error_at("") == 0);
  CHECK(parse_error_at("x $ y") == 2);
  CHECK(parse_error_at("1e999") == 0);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(Expr::parse("1/x")(0, 0), EvalError);
  CHECK_THROWS_AS(Expr::parse("log(x)")(0, 0), EvalError);
  CHECK_THROWS_AS(Expr::parse("log(x)")(-1, 0), EvalError);
  CHECK_THROWS_AS(Expr::parse("sqrt(x)")(-1, 0), EvalError);
  CHECK_THROWS_AS(Expr::parse("exp(x)")(1000, 0), EvalError);
  CHECK_THROWS_AS(Expr::parse("x^0.5")(-1, 0), EvalError);
}

TEST_CASE("printing is minimal and round-trips") {
  CHECK(Expr::parse("((x))+(y*2)").print() == "x + y * 2");
  CHECK(Expr::parse("(x+y)*2").print() == "(x + y) * 2");
  CHECK(Expr::parse("x-(y-1)").print() == "x - (y - 1)");
  CHECK(Expr::parse("(2^3)^2").print() == "(2^3)^2");
  CHECK(Expr::parse("2^(3^2)").print() == "2^3^2");
  CHECK(Expr::parse("(-2)^2").print() == "(-2)^2");
  CHECK(Expr::parse("-(2^2)").print() == "-2^2");
  CHECK(Expr::parse("-(x+1)").print() == "-(x + 1)");

  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const std::string src = random_expr(rng, 5);
    const Expr e = Expr::parse(src);
    const std::string once = e.print();
    const Expr back = Expr::parse(once);
    CHECK_MESSAGE(back == e, src);
    CHECK(back.print() == once);
  }
}

TEST_CASE("random expressions agree with the shunting-yard reference") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> val(-2, 2);
  int evaluated = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string src = random_expr(rng, 5);
    const Bindings b{val(rng), val(rng), val(rng)};
    Reference ref{b.x, b.y, b.theta};
    const double expected = ref.run(src);
    const Expr e = Expr::parse(src);
    if (ref.bad) {
      CHECK_THROWS_AS(e.eval(b), EvalError);
      continue;
    }
    ++evaluated;
    const double got = e.eval(b);
    CHECK_MESSAGE(std::abs(got - expected) <= 1e-12 * std::max(1.0, std::abs(expected)), src);
  }
  CHECK(evaluated > 500);
}
