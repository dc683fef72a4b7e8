#pragma once

#include <string>

#include "expr/expr.hpp"

namespace fjkit {

/// Infix rendering in canonical (expanded) term order; parses back to the
/// same Expr.
std::string print_expression(const Expr& e);
std::string print_polynomial(const Polynomial& p, const Context* ctx);

/// Fully parenthesized prefix rendering, e.g. "(/ k2 (+ k1 k2))".
std::string print_prefix(const Expr& e);

std::string print_rational(const Rational& q);

}  // namespace fjkit
