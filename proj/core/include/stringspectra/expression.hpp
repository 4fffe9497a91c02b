#pragma once

#include <functional>
#include <memory>
#include <string>

namespace stringspectra {

/// Raised on malformed expression text; carries the character offset.
struct ExpressionParseError : std::invalid_argument {
  ExpressionParseError(const std::string& what, std::size_t position);
  std::size_t position;
};

/// A compiled arithmetic expression in the single variable x.
///
/// Grammar (Pratt-parsed): numeric literals, x, + - * /, ^ (right
/// associative), unary minus, parentheses, and the functions exp, log, sin,
/// cos, sqrt. No other identifiers exist.
class Expression {
 public:
  static Expression parse(const std::string& text);
  double operator()(double x) const;
  const std::string& text() const { return text_; }

  struct Node;  // implementation detail, defined in expression.cpp

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace stringspectra
