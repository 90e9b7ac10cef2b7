#pragma once

// A closed expression language for test functions. It has no transcendental
// functions, so every expressible function is semi-algebraic.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' nonneg-int)?
//   atom   := number | 'x'index | '(' expr ')' | 'sqrt(' expr ')' | 'abs(' expr ')'
//           | 'min(' expr ',' expr ')' | 'max(' expr ',' expr ')' | piecewise
//   piecewise := 'piecewise{' (poly cmp poly ':' expr ';')+ '}'
//
// Variables are 1-based in text (x1 .. xn) and 0-based in the tree. Guards
// may only use + - * ^, constants and variables; the first satisfied guard
// selects the branch.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robreg/common.hpp"

namespace robreg::expr {

enum class NodeKind { Constant, Variable, Neg, Add, Sub, Mul, Div, IntPow, Sqrt, Abs, Min, Max, Piecewise };

enum class Comparison { Less, LessEqual, Equal, GreaterEqual, Greater };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Guard {
  NodePtr lhs;
  Comparison cmp;
  NodePtr rhs;
  NodePtr branch;
};

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;      // Constant
  int index = 0;           // Variable (0-based)
  unsigned exponent = 0;   // IntPow
  std::vector<NodePtr> children;
  std::vector<Guard> guards;  // Piecewise
};

class Expression {
 public:
  /// Throws ParseError on malformed text, out-of-range variables and negative exponents.
  static Expression parse(std::string_view text, int dimension);

  Expression(NodePtr root, int dimension);

  /// Throws DomainError for sqrt of a negative, division by zero, or a point
  /// matched by no piecewise guard; DimensionError on a size mismatch.
  double evaluate(std::span<const double> point) const;
  double evaluate(const Vec& point) const;

  /// Fully parenthesized text that re-parses to a structurally equal tree.
  std::string to_string() const;

  int dimension() const { return dimension_; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

 private:
  NodePtr root_;
  int dimension_;
};

bool structurally_equal(const Node& a, const Node& b);
bool structurally_equal(const Expression& a, const Expression& b);

/// True when the subtree only uses constants, variables, negation, + - * and ^.
bool is_polynomial(const Node& node);

bool compare(double lhs, Comparison cmp, double rhs);

}  // namespace robreg::expr
