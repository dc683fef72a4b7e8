#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "expr/expr.hpp"

namespace fjkit {

/// Unnormalized expression tree as written by the user. Builtin calls stay
/// as nodes here; normalization rewrites them into auxiliary symbols.
struct RawNode {
  enum class Op { number, symbol, add, sub, mul, div, neg, pow, sin, cos, sqrt };
  Op op = Op::number;
  Rational value;        // number
  SymbolId symbol = 0;   // symbol, or the angle of sin/cos
  int exponent = 0;      // pow
  std::vector<std::shared_ptr<const RawNode>> args;
  std::size_t offset = 0;
};

using RawExpr = std::shared_ptr<const RawNode>;

/// Canonical form of `raw`. Registers trig pairs and radicals in `ctx`.
/// Throws DivisionByZeroExpression, SqrtOfNonPolynomial.
Expr normalize(const RawExpr& raw, const ContextPtr& ctx);

}  // namespace fjkit
