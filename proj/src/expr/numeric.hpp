#pragma once

#include <map>
#include <span>
#include <vector>

#include "expr/expr.hpp"

namespace fjkit {

using NumericBindings = std::map<SymbolId, double>;

inline constexpr double kRelationTolerance = 1e-9;

/// Adds values for auxiliary symbols derivable from the bound ones (sine and
/// cosine from their angle, radicals from their square with the declared
/// sign) and checks user-bound auxiliaries against their relations.
/// Throws RelationViolated.
NumericBindings complete_bindings(const Context& ctx, NumericBindings values);

/// IEEE value of `e`. Throws UnboundSymbol, RelationViolated,
/// NumericDivisionByZero.
double evaluate_numeric(const Expr& e, const NumericBindings& values);

/// Double-coefficient copy of a polynomial for repeated evaluation over a
/// dense value vector indexed by symbol id.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);
  double operator()(std::span<const double> values) const;
  bool empty() const { return terms_.empty(); }

 private:
  struct Term {
    double coeff;
    std::vector<VarPower> factors;
  };
  std::vector<Term> terms_;
};

class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e) : num_(e.numerator()), den_(e.denominator()) {}
  /// Throws NumericDivisionByZero when the denominator evaluates to 0.
  double operator()(std::span<const double> values) const;

 private:
  CompiledPolynomial num_;
  CompiledPolynomial den_;
};

/// Recomputes every auxiliary slot of a dense value vector from the base
/// symbols, in relation order.
class AuxiliaryFiller {
 public:
  explicit AuxiliaryFiller(const Context& ctx);
  void fill(std::span<double> values) const;

 private:
  struct Step {
    bool trig;
    SymbolId defined;
    SymbolId cosine;
    SymbolId angle;
    int sign;
    CompiledPolynomial square;
  };
  std::vector<Step> steps_;
};

}  // namespace fjkit
