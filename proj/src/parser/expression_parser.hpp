#pragma once

#include <string_view>

#include "parser/raw.hpp"

namespace fjkit {

/// Recursive-descent parser for the expression grammar:
///
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right associative)
///   primary := number | identifier | call | '(' sum ')'
///   call    := ('sin' | 'cos') '(' identifier ')' | 'sqrt' '(' sum ')'
///
/// Numbers are integers, decimals (exact) or a/b through division.
/// Exponents must fold to integer constants.
/// Errors carry the byte offset of the offending token.
RawExpr parse_raw_expression(std::string_view text, const Context& ctx);

/// parse_raw_expression followed by normalize.
Expr parse_expression(std::string_view text, const ContextPtr& ctx);

}  // namespace fjkit
