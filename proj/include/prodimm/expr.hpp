#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prodimm/linalg.hpp"

namespace prodimm {

// One scalar expression over chart variables, parsed from the config
// grammar: operators + - * / ^ (right-associative), functions sin cos cosh
// sinh sqrt exp, variables u1..uN plus t as an alias for the last one.
// Derivatives come from forward-mode differentiation of the tree, so they
// are exact in the same sense the map itself is.
class Expr {
 public:
  Expr() = default;

  double value(const Vec& u) const;
  double deriv(const Vec& u, int axis) const;

  int nvars() const { return nvars_; }
  bool empty() const { return root_ == nullptr; }

  struct Node;

 private:
  friend Expr parse_expression(const std::string& text, int nvars);
  std::shared_ptr<const Node> root_;
  int nvars_ = 0;
};

// Throws ConfigError with a position diagnostic on bad syntax, unknown
// identifiers, or variables beyond nvars.
Expr parse_expression(const std::string& text, int nvars);

// Convenience: comma-separated list of expressions.
std::vector<Expr> parse_expression_list(const std::string& text, int nvars);

}  // namespace prodimm
