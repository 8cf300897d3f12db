#include "emtlab/expression.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace emtlab::scene {

namespace {

const char* kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh"};

bool is_function(const std::string& name) {
  for (const char* f : kFunctions)
    if (name == f) return true;
  return false;
}

double call_function(const std::string& name, double x) {
  if (name == "sin") return std::sin(x);
  if (name == "cos") return std::cos(x);
  if (name == "tan") return std::tan(x);
  if (name == "exp") return std::exp(x);
  if (name == "log") return std::log(x);
  if (name == "sqrt") return std::sqrt(x);
  if (name == "sinh") return std::sinh(x);
  if (name == "cosh") return std::cosh(x);
  if (name == "tanh") return std::tanh(x);
  fail(ErrorKind::parse, "unknown function: " + name);
}

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  ExprPtr run() {
    skip_space();
    if (at_end()) error("empty expression");
    ExprPtr e = parse_sum();
    skip_space();
    if (!at_end()) error("unexpected trailing input");
    return e;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::parse, "parse error at byte " + std::to_string(pos_) + ": " + what);
  }
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }
  void skip_space() {
    while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n')) ++pos_;
  }
  bool consume(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    for (;;) {
      skip_space();
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      auto node = std::make_shared<Expression>();
      node->kind = Expression::Kind::binary;
      node->op = c;
      node->lhs = e;
      node->rhs = parse_product();
      e = node;
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    for (;;) {
      skip_space();
      char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      auto node = std::make_shared<Expression>();
      node->kind = Expression::Kind::binary;
      node->op = c;
      node->lhs = e;
      node->rhs = parse_unary();
      e = node;
    }
  }

  ExprPtr parse_unary() {
    skip_space();
    if (peek() == '-') {
      ++pos_;
      auto node = std::make_shared<Expression>();
      node->kind = Expression::Kind::negate;
      node->operand = parse_unary();
      return node;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    auto node = std::make_shared<Expression>();
    node->kind = Expression::Kind::binary;
    node->op = '^';
    node->lhs = base;
    node->rhs = parse_unary();  // right-associative, exponent may carry a sign
    return node;
  }

  ExprPtr parse_atom() {
    skip_space();
    if (at_end()) error("expected an operand");
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!consume(')')) error("unbalanced parenthesis");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    error(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    size_t start = pos_;
    while (!at_end() && ((src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '.')) ++pos_;
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (at_end() || !(src_[pos_] >= '0' && src_[pos_] <= '9'))
        pos_ = mark;  // 'e' belongs to something else
      else
        while (!at_end() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
    }
    std::string text = src_.substr(start, pos_ - start);
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
      pos_ = start;
      error("malformed number '" + text + "'");
    }
    auto node = std::make_shared<Expression>();
    node->kind = Expression::Kind::number;
    node->number = v;
    return node;
  }

  ExprPtr parse_ident() {
    size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    auto node = std::make_shared<Expression>();
    if (is_function(name)) {
      if (!consume('(')) {
        pos_ = start;
        error("function '" + name + "' needs an argument list");
      }
      node->kind = Expression::Kind::call;
      node->name = name;
      node->operand = parse_sum();
      if (!consume(')')) error("unbalanced parenthesis in call to '" + name + "'");
      return node;
    }
    if (name == "pi" || name == "e") {
      node->kind = Expression::Kind::constant;
      node->name = name;
      node->number = (name == "pi") ? M_PI : M_E;
      return node;
    }
    node->kind = Expression::Kind::variable;
    node->name = name;
    return node;
  }
};

}  // namespace

ExprPtr parse_expression(const std::string& source) { return Parser(source).run(); }

std::string print_expression(const ExprPtr& e) {
  switch (e->kind) {
    case Expression::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->number);
      return buf;
    }
    case Expression::Kind::variable:
    case Expression::Kind::constant:
      return e->name;
    case Expression::Kind::negate:
      return "(-" + print_expression(e->operand) + ")";
    case Expression::Kind::binary:
      return "(" + print_expression(e->lhs) + " " + std::string(1, e->op) + " " +
             print_expression(e->rhs) + ")";
    case Expression::Kind::call:
      return e->name + "(" + print_expression(e->operand) + ")";
  }
  return "?";
}

bool expressions_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expression::Kind::number:
      return a->number == b->number;
    case Expression::Kind::variable:
    case Expression::Kind::constant:
      return a->name == b->name;
    case Expression::Kind::negate:
      return expressions_equal(a->operand, b->operand);
    case Expression::Kind::binary:
      return a->op == b->op && expressions_equal(a->lhs, b->lhs) &&
             expressions_equal(a->rhs, b->rhs);
    case Expression::Kind::call:
      return a->name == b->name && expressions_equal(a->operand, b->operand);
  }
  return false;
}

ExprPtr bind_expression(const ExprPtr& e, const std::vector<std::string>& symbols,
                        std::vector<std::string>* missing) {
  auto node = std::make_shared<Expression>(*e);
  switch (e->kind) {
    case Expression::Kind::variable: {
      node->slot = -1;
      for (size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == e->name) {
          node->slot = static_cast<int>(i);
          break;
        }
      if (node->slot < 0 && missing) missing->push_back(e->name);
      break;
    }
    case Expression::Kind::negate:
    case Expression::Kind::call:
      node->operand = bind_expression(e->operand, symbols, missing);
      break;
    case Expression::Kind::binary:
      node->lhs = bind_expression(e->lhs, symbols, missing);
      node->rhs = bind_expression(e->rhs, symbols, missing);
      break;
    default:
      break;
  }
  return node;
}

double eval_expression(const Expression& e, const std::vector<double>& env) {
  switch (e.kind) {
    case Expression::Kind::number:
    case Expression::Kind::constant:
      return e.number;
    case Expression::Kind::variable:
      if (e.slot < 0 || e.slot >= static_cast<int>(env.size()))
        fail(ErrorKind::validation, "unbound identifier '" + e.name + "' in expression");
      return env[e.slot];
    case Expression::Kind::negate:
      return -eval_expression(*e.operand, env);
    case Expression::Kind::binary: {
      double a = eval_expression(*e.lhs, env);
      double b = eval_expression(*e.rhs, env);
      switch (e.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
        case '^': return std::pow(a, b);
      }
      fail(ErrorKind::parse, "unknown operator");
    }
    case Expression::Kind::call:
      return call_function(e.name, eval_expression(*e.operand, env));
  }
  fail(ErrorKind::parse, "malformed expression tree");
}

}  // namespace emtlab::scene
