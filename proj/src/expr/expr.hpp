#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "expr/context.hpp"
#include "expr/polynomial.hpp"

namespace fjkit {

/// Exact expression in canonical rational-function form.
///
/// Invariants after construction:
///  - the numerator is reduced modulo the context's relations;
///  - the denominator is free of relation-defined symbols (rationalized);
///  - numerator and denominator share no polynomial factor, both have integer
///    coefficients with joint content 1, and the denominator's leading
///    coefficient is positive;
///  - zero is numerator 0 over denominator 1.
/// Under these rules structural equality is semantic equality.
class Expr {
 public:
  Expr() : den_(1) {}
  Expr(long c) : num_(Rational(c)), den_(1) {}  // NOLINT(google-explicit-constructor)
  Expr(const Rational& c);                       // NOLINT(google-explicit-constructor)

  static Expr symbol(ConstContextPtr ctx, SymbolId id);
  /// num / den brought to canonical form. Throws DivisionByZeroExpression.
  static Expr from_polynomials(ConstContextPtr ctx, Polynomial num, Polynomial den = Polynomial(1));

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const ConstContextPtr& context() const { return ctx_; }
  /// Same value attached to `ctx`, which must extend the current context.
  Expr with_context(ConstContextPtr ctx) const {
    Expr e = *this;
    e.ctx_ = std::move(ctx);
    return e;
  }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// Value when the expression is a rational number.
  std::optional<Rational> constant_value() const;
  std::vector<SymbolId> symbols() const;
  bool depends_on(SymbolId id) const { return num_.contains(id) || den_.contains(id); }

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int n) const;

  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  /// num/den already coprime; fixes integer content and sign only.
  static Expr coprime(ConstContextPtr ctx, Polynomial num, Polynomial den);
  bool relation_free() const;
  static Expr cross_cancel(const ConstContextPtr& ctx, const Polynomial& a, const Polynomial& b, const Polynomial& c,
                           const Polynomial& d);

  ConstContextPtr ctx_;
  Polynomial num_;
  Polynomial den_;
};

/// Ordered list of bindings applied simultaneously.
using Substitution = std::vector<std::pair<SymbolId, Expr>>;

/// Total partial derivative; auxiliary symbols follow their relation
/// (trig pair rules, implicit differentiation for quadratic relations).
Expr differentiate(const Expr& e, SymbolId var);

/// Simultaneous substitution followed by normalization. Binding a symbol that
/// an unbound auxiliary of `e` depends on is rejected (InvalidArgument).
Expr substitute(const Expr& e, const Substitution& bindings);

/// Non-auxiliary symbols `e` depends on, expanding auxiliaries to the symbols
/// their relations are built from.
std::vector<SymbolId> base_symbols(const Expr& e);

/// True when `aux` (an auxiliary symbol) depends on `var` through its relation.
bool auxiliary_depends_on(const Context& ctx, SymbolId aux, SymbolId var);

/// e / s as an exact rational when `s` is a nonzero rational multiple of `e`.
std::optional<Rational> rational_ratio(const Expr& e, const Expr& s);

}  // namespace fjkit
