#include "stringspectra/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace stringspectra {

ExpressionParseError::ExpressionParseError(const std::string& what,
                                           std::size_t pos)
    : std::invalid_argument(what + " at position " + std::to_string(pos)),
      position(pos) {}

struct Expression::Node {
  enum class Kind { number, variable, unary_minus, add, sub, mul, div, pow, call };
  Kind kind;
  double value = 0.0;                      // number
  double (*fn)(double) = nullptr;          // call
  std::shared_ptr<const Node> lhs, rhs;    // operands (rhs unused for unary)

  double eval(double x) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::variable: return x;
      case Kind::unary_minus: return -lhs->eval(x);
      case Kind::add: return lhs->eval(x) + rhs->eval(x);
      case Kind::sub: return lhs->eval(x) - rhs->eval(x);
      case Kind::mul: return lhs->eval(x) * rhs->eval(x);
      case Kind::div: return lhs->eval(x) / rhs->eval(x);
      case Kind::pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Kind::call: return fn(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  NodePtr make(Node&& n) { return std::make_shared<Node>(std::move(n)); }

  // binding powers: + - (10), * / (20), unary - (30), ^ (40, right assoc)
  NodePtr parse_expr(int min_bp) {
    NodePtr lhs = parse_prefix();
    for (;;) {
      const char c = peek();
      int bp;
      Node::Kind kind;
      switch (c) {
        case '+': bp = 10; kind = Node::Kind::add; break;
        case '-': bp = 10; kind = Node::Kind::sub; break;
        case '*': bp = 20; kind = Node::Kind::mul; break;
        case '/': bp = 20; kind = Node::Kind::div; break;
        case '^': bp = 40; kind = Node::Kind::pow; break;
        default: return lhs;
      }
      if (bp < min_bp) return lhs;
      ++pos;
      // right associativity for ^: recurse with the same binding power
      NodePtr rhs = parse_expr(kind == Node::Kind::pow ? bp : bp + 1);
      lhs = make({kind, 0.0, nullptr, lhs, rhs});
    }
  }

  NodePtr parse_prefix() {
    const char c = peek();
    if (c == '\0') throw ExpressionParseError("unexpected end of expression", pos);
    if (c == '-') {
      ++pos;
      NodePtr operand = parse_expr(30);
      return make({Node::Kind::unary_minus, 0.0, nullptr, operand, nullptr});
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr(0);
      if (peek() != ')') throw ExpressionParseError("expected ')'", pos);
      ++pos;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s.c_str() + pos;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw ExpressionParseError("malformed number", pos);
      pos += std::size_t(end - begin);
      return make({Node::Kind::number, v, nullptr, nullptr, nullptr});
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
      const std::string name = s.substr(start, pos - start);
      if (name == "x")
        return make({Node::Kind::variable, 0.0, nullptr, nullptr, nullptr});
      double (*fn)(double) = nullptr;
      if (name == "exp") fn = std::exp;
      else if (name == "log") fn = std::log;
      else if (name == "sin") fn = std::sin;
      else if (name == "cos") fn = std::cos;
      else if (name == "sqrt") fn = std::sqrt;
      else throw ExpressionParseError("unknown identifier '" + name + "'", start);
      if (peek() != '(')
        throw ExpressionParseError("expected '(' after function name", pos);
      ++pos;
      NodePtr arg = parse_expr(0);
      if (peek() != ')') throw ExpressionParseError("expected ')'", pos);
      ++pos;
      return make({Node::Kind::call, 0.0, fn, arg, nullptr});
    }
    throw ExpressionParseError(std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p{text};
  Expression e;
  e.root_ = p.parse_expr(0);
  p.skip_ws();
  if (p.pos != text.size())
    throw ExpressionParseError("trailing input", p.pos);
  e.text_ = text;
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace stringspectra
