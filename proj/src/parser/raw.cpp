#include "parser/raw.hpp"

#include "common/error.hpp"
#include "parser/printer.hpp"

namespace fjkit {

Expr normalize(const RawExpr& raw, const ContextPtr& ctx) {
  using Op = RawNode::Op;
  const RawNode& n = *raw;
  switch (n.op) {
    case Op::number: return Expr(n.value);
    case Op::symbol: return Expr::symbol(ctx, n.symbol);
    case Op::add: return normalize(n.args[0], ctx) + normalize(n.args[1], ctx);
    case Op::sub: return normalize(n.args[0], ctx) - normalize(n.args[1], ctx);
    case Op::mul: return normalize(n.args[0], ctx) * normalize(n.args[1], ctx);
    case Op::div: {
      const Expr d = normalize(n.args[1], ctx);
      if (d.is_zero()) {
        throw Error(ErrorCode::DivisionByZeroExpression, "divisor is identically zero",
                    SourcePosition{n.args[1]->offset, 0, 0});
      }
      return normalize(n.args[0], ctx) / d;
    }
    case Op::neg: return -normalize(n.args[0], ctx);
    case Op::pow: {
      const Expr b = normalize(n.args[0], ctx);
      if (n.exponent < 0 && b.is_zero()) {
        throw Error(ErrorCode::DivisionByZeroExpression, "zero raised to a negative power",
                    SourcePosition{n.offset, 0, 0});
      }
      return b.pow(n.exponent);
    }
    case Op::sin: return Expr::symbol(ctx, ctx->trig_pair(n.symbol).first);
    case Op::cos: return Expr::symbol(ctx, ctx->trig_pair(n.symbol).second);
    case Op::sqrt: {
      const Expr arg = normalize(n.args[0], ctx);
      if (!arg.is_polynomial()) {
        throw Error(ErrorCode::SqrtOfNonPolynomial, "sqrt argument must be a polynomial",
                    SourcePosition{n.args[0]->offset, 0, 0});
      }
      if (arg.is_zero()) return Expr(0);
      const Polynomial square = arg.numerator() * (Rational(1) / arg.denominator().constant_value());
      const std::string name = "sqrt(" + print_polynomial(square, ctx.get()) + ")";
      return Expr::symbol(ctx, ctx->radical(square, name));
    }
  }
  throw std::logic_error("unknown raw node");
}

}  // namespace fjkit
