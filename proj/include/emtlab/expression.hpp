#pragma once

// A small arithmetic expression language for coordinate-dependent field
// components: decimal literals, identifiers, pi/e, + - * / ^, unary minus,
// and the usual transcendental functions.  Precedence, tightest first:
// ^ (right-associative), unary minus, * /, + -.

#include <memory>
#include <string>
#include <vector>

#include "emtlab/error.hpp"

namespace emtlab::scene {

struct Expression;
using ExprPtr = std::shared_ptr<const Expression>;

struct Expression {
  enum class Kind { number, variable, constant, negate, binary, call };
  Kind kind = Kind::number;
  double number = 0;
  std::string name;  // variable / constant / function
  char op = 0;       // + - * / ^
  ExprPtr lhs, rhs, operand;
  int slot = -1;     // environment slot for variables, set by bind()
};

// Throws Error(parse) with the byte offset in the message on bad input.
ExprPtr parse_expression(const std::string& source);

std::string print_expression(const ExprPtr& e);

bool expressions_equal(const ExprPtr& a, const ExprPtr& b);

// Resolve identifiers against an ordered symbol table; unresolved names are
// appended to `missing` (with the expression context left to the caller).
ExprPtr bind_expression(const ExprPtr& e, const std::vector<std::string>& symbols,
                        std::vector<std::string>* missing);

double eval_expression(const Expression& e, const std::vector<double>& env);
inline double eval_expression(const ExprPtr& e, const std::vector<double>& env) {
  return eval_expression(*e, env);
}

}  // namespace emtlab::scene
