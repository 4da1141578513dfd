#include "prodimm/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "prodimm/errors.hpp"

namespace prodimm {

struct Expr::Node {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Fn };
  enum class Fn { Sin, Cos, Cosh, Sinh, Sqrt, Exp };

  Kind kind;
  double num = 0.0;
  int var = -1;
  Fn fn = Fn::Sin;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->num = v;
  return n;
}

NodePtr leaf_var(int idx) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Var;
  n->var = idx;
  return n;
}

NodePtr unary(Node::Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr fn_node(Node::Fn f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Fn;
  n->fn = f;
  n->a = std::move(a);
  return n;
}

NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

// value + directional derivative in one pass
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

Dual eval_dual(const Node& n, const Vec& u, int axis) {
  switch (n.kind) {
    case Node::Kind::Number:
      return {n.num, 0.0};
    case Node::Kind::Var:
      return {u[n.var], n.var == axis ? 1.0 : 0.0};
    case Node::Kind::Neg: {
      Dual a = eval_dual(*n.a, u, axis);
      return {-a.v, -a.d};
    }
    case Node::Kind::Add: {
      Dual a = eval_dual(*n.a, u, axis), b = eval_dual(*n.b, u, axis);
      return {a.v + b.v, a.d + b.d};
    }
    case Node::Kind::Sub: {
      Dual a = eval_dual(*n.a, u, axis), b = eval_dual(*n.b, u, axis);
      return {a.v - b.v, a.d - b.d};
    }
    case Node::Kind::Mul: {
      Dual a = eval_dual(*n.a, u, axis), b = eval_dual(*n.b, u, axis);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case Node::Kind::Div: {
      Dual a = eval_dual(*n.a, u, axis), b = eval_dual(*n.b, u, axis);
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case Node::Kind::Pow: {
      Dual a = eval_dual(*n.a, u, axis), b = eval_dual(*n.b, u, axis);
      double v = std::pow(a.v, b.v);
      // the log term only exists for a varying exponent; skipping it when
      // db = 0 keeps x^2 differentiable at x <= 0
      double d = b.v * std::pow(a.v, b.v - 1.0) * a.d;
      if (b.d != 0.0) d += v * std::log(a.v) * b.d;
      return {v, d};
    }
    case Node::Kind::Fn: {
      Dual a = eval_dual(*n.a, u, axis);
      switch (n.fn) {
        case Node::Fn::Sin: return {std::sin(a.v), std::cos(a.v) * a.d};
        case Node::Fn::Cos: return {std::cos(a.v), -std::sin(a.v) * a.d};
        case Node::Fn::Cosh: return {std::cosh(a.v), std::sinh(a.v) * a.d};
        case Node::Fn::Sinh: return {std::sinh(a.v), std::cosh(a.v) * a.d};
        case Node::Fn::Sqrt: {
          double s = std::sqrt(a.v);
          return {s, 0.5 / s * a.d};
        }
        case Node::Fn::Exp: {
          double e = std::exp(a.v);
          return {e, e * a.d};
        }
      }
      return {};
    }
  }
  return {};
}

double eval_value(const Node& n, const Vec& u) {
  switch (n.kind) {
    case Node::Kind::Number: return n.num;
    case Node::Kind::Var: return u[n.var];
    case Node::Kind::Neg: return -eval_value(*n.a, u);
    case Node::Kind::Add: return eval_value(*n.a, u) + eval_value(*n.b, u);
    case Node::Kind::Sub: return eval_value(*n.a, u) - eval_value(*n.b, u);
    case Node::Kind::Mul: return eval_value(*n.a, u) * eval_value(*n.b, u);
    case Node::Kind::Div: return eval_value(*n.a, u) / eval_value(*n.b, u);
    case Node::Kind::Pow: return std::pow(eval_value(*n.a, u), eval_value(*n.b, u));
    case Node::Kind::Fn: {
      double a = eval_value(*n.a, u);
      switch (n.fn) {
        case Node::Fn::Sin: return std::sin(a);
        case Node::Fn::Cos: return std::cos(a);
        case Node::Fn::Cosh: return std::cosh(a);
        case Node::Fn::Sinh: return std::sinh(a);
        case Node::Fn::Sqrt: return std::sqrt(a);
        case Node::Fn::Exp: return std::exp(a);
      }
      return 0.0;
    }
  }
  return 0.0;
}

class Parser {
 public:
  Parser(const std::string& text, int nvars) : text_(text), nvars_(nvars) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& text_;
  int nvars_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "expression error at position " << pos_ << " in \"" << text_ << "\": " << what;
    throw ConfigError(os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = binary(Node::Kind::Add, e, parse_term());
      else if (eat('-'))
        e = binary(Node::Kind::Sub, e, parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_unary();
    for (;;) {
      if (eat('*'))
        e = binary(Node::Kind::Mul, e, parse_unary());
      else if (eat('/'))
        e = binary(Node::Kind::Div, e, parse_unary());
      else
        return e;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return unary(Node::Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (eat('^')) return binary(Node::Kind::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    char c = peek();
    if (c == '(') {
      eat('(');
      NodePtr e = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail("expected a number, variable, function, or '('");
  }

  NodePtr parse_number() {
    skip_ws();
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos_ += static_cast<size_t>(end - start);
    return leaf_number(v);
  }

  NodePtr parse_ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);

    if (peek() == '(') {
      Node::Fn f;
      if (name == "sin") f = Node::Fn::Sin;
      else if (name == "cos") f = Node::Fn::Cos;
      else if (name == "cosh") f = Node::Fn::Cosh;
      else if (name == "sinh") f = Node::Fn::Sinh;
      else if (name == "sqrt") f = Node::Fn::Sqrt;
      else if (name == "exp") f = Node::Fn::Exp;
      else fail("unknown function '" + name + "'");
      eat('(');
      NodePtr arg = parse_expr();
      if (!eat(')')) fail("missing ')' after " + name);
      return fn_node(f, arg);
    }

    if (name == "t") return leaf_var(nvars_ - 1);
    if (name.size() >= 2 && name[0] == 'u') {
      char* end = nullptr;
      long k = std::strtol(name.c_str() + 1, &end, 10);
      if (*end == '\0' && k >= 1) {
        if (k > nvars_) {
          std::ostringstream os;
          os << "variable " << name << " exceeds the chart dimension " << nvars_;
          throw ConfigError(os.str());
        }
        return leaf_var(static_cast<int>(k) - 1);
      }
    }
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

double Expr::value(const Vec& u) const {
  if (!root_) throw ConfigError("evaluating an empty expression");
  return eval_value(*root_, u);
}

double Expr::deriv(const Vec& u, int axis) const {
  if (!root_) throw ConfigError("evaluating an empty expression");
  return eval_dual(*root_, u, axis).d;
}

Expr parse_expression(const std::string& text, int nvars) {
  if (nvars < 1) throw ConfigError("expression context needs at least one variable");
  Expr e;
  e.root_ = Parser(text, nvars).parse();
  e.nvars_ = nvars;
  return e;
}

std::vector<Expr> parse_expression_list(const std::string& text, int nvars) {
  std::vector<Expr> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(parse_expression(text.substr(start, i - start), nvars));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  return out;
}

}  // namespace prodimm
