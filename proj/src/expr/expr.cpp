#include "expr/expr.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "common/error.hpp"

namespace fjkit {

namespace {

const ConstContextPtr& pick_context(const ConstContextPtr& a, const ConstContextPtr& b) {
  if (a && b && a != b) throw std::logic_error("expressions belong to different symbol contexts");
  return a ? a : b;
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("gcd does not divide operand");
  return std::move(*q);
}

// Numerator split by the relation-defined part of each monomial. The ring is a
// free module over the defined-symbol-free subring with these basis elements.
std::vector<Polynomial> defined_components(const Context* ctx, const Polynomial& num) {
  if (ctx == nullptr || ctx->relations().empty()) return {num};
  std::map<std::vector<SymbolId>, std::vector<Term>> groups;
  for (const auto& t : num.terms()) {
    std::vector<SymbolId> key;
    std::vector<VarPower> rest;
    for (const auto& f : t.mono.factors()) {
      if (ctx->is_defined_symbol(f.var)) {
        key.push_back(f.var);  // exponent is 1 after reduction
      } else {
        rest.push_back(f);
      }
    }
    groups[key].push_back({Monomial::from_factors(std::move(rest)), t.coeff});
  }
  std::vector<Polynomial> out;
  out.reserve(groups.size());
  for (auto& [key, terms] : groups) out.push_back(Polynomial::from_terms(std::move(terms)));
  return out;
}

}  // namespace

Expr::Expr(const Rational& c) : num_(Rational(c.get_num())), den_(Rational(c.get_den())) {}

Expr Expr::symbol(ConstContextPtr ctx, SymbolId id) {
  if (!ctx || id >= ctx->size()) {
    throw Error(ErrorCode::UndeclaredSymbol, "symbol id " + std::to_string(id) + " is not declared");
  }
  Expr e;
  e.ctx_ = std::move(ctx);
  e.num_ = Polynomial::variable(id);
  return e;
}

Expr Expr::from_polynomials(ConstContextPtr ctx, Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZeroExpression, "denominator is identically zero");
  const Context* c = ctx.get();
  if (c != nullptr) {
    num = c->reduce(num);
    den = c->reduce(den);
    if (den.is_zero()) {
      throw Error(ErrorCode::DivisionByZeroExpression, "denominator vanishes modulo the relations");
    }
  }
  Expr out;
  out.ctx_ = std::move(ctx);
  if (num.is_zero()) return out;

  if (c != nullptr) {
    const auto& rels = c->relations();
    for (auto it = rels.rbegin(); it != rels.rend(); ++it) {
      if (!den.contains(it->defined)) continue;
      const auto coeffs = den.coefficients_in(it->defined);
      const Polynomial d = Polynomial::variable(it->defined);
      const Polynomial conj = coeffs[0] - coeffs[1] * d;
      num = c->reduce(num * conj);
      den = c->reduce(coeffs[0] * coeffs[0] - coeffs[1] * coeffs[1] * it->square);
      if (den.is_zero()) {
        throw Error(ErrorCode::DivisionByZeroExpression, "denominator is a zero divisor modulo the relations");
      }
    }
    if (num.is_zero()) return out;
  }

  if (!den.is_constant()) {
    Polynomial g = den;
    for (const auto& comp : defined_components(c, num)) {
      g = gcd(g, comp);
      if (g.is_constant()) break;
    }
    if (!g.is_constant()) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
  }

  return coprime(out.ctx_, std::move(num), std::move(den));
}

Expr Expr::coprime(ConstContextPtr ctx, Polynomial num, Polynomial den) {
  Expr out;
  out.ctx_ = std::move(ctx);
  if (num.is_zero()) return out;
  const Rational cn = num.content();
  const Rational cd = den.content();
  Rational ratio = cn / cd;
  num = num * (Rational(ratio.get_num()) / cn);
  den = den * (Rational(ratio.get_den()) / cd);
  if (den.leading().coeff < 0) {
    num = -num;
    den = -den;
  }
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  return out;
}

bool Expr::relation_free() const {
  if (!ctx_ || ctx_->relations().empty()) return true;
  for (SymbolId v : symbols()) {
    if (ctx_->relation_of(v) != nullptr) return false;
  }
  return true;
}

std::optional<Rational> Expr::constant_value() const {
  if (!is_constant()) return std::nullopt;
  return num_.constant_value() / den_.constant_value();
}

std::vector<SymbolId> Expr::symbols() const {
  auto a = num_.variables();
  auto b = den_.variables();
  std::vector<SymbolId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Expr Expr::operator+(const Expr& o) const {
  const auto& ctx = pick_context(ctx_, o.ctx_);
  if (o.is_zero()) {
    Expr r = *this;
    r.ctx_ = ctx;
    return r;
  }
  if (is_zero()) {
    Expr r = o;
    r.ctx_ = ctx;
    return r;
  }
  if (!relation_free() || !o.relation_free()) {
    if (den_ == o.den_) return from_polynomials(ctx, num_ + o.num_, den_);
    return from_polynomials(ctx, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  // Both operands are reduced, so only the shared denominator factor can
  // cancel against the new numerator.
  const Polynomial g = gcd(den_, o.den_);
  const Polynomial b = exact_div(den_, g);
  const Polynomial d = exact_div(o.den_, g);
  Polynomial num = num_ * d + o.num_ * b;
  Polynomial den = den_ * d;
  if (num.is_zero()) return coprime(ctx, Polynomial{}, Polynomial(1));
  if (!g.is_constant()) {
    const Polynomial h = gcd(num, g);
    if (!h.is_constant()) {
      num = exact_div(num, h);
      den = exact_div(den, h);
    }
  }
  return coprime(ctx, std::move(num), std::move(den));
}

Expr Expr::operator-() const {
  Expr r = *this;
  r.num_ = -r.num_;
  return r;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

// (a/b)(c/d) with a/b and c/d reduced: cancel a against d and c against b.
Expr Expr::cross_cancel(const ConstContextPtr& ctx, const Polynomial& a, const Polynomial& b, const Polynomial& c,
                        const Polynomial& d) {
  const Polynomial g1 = gcd(a, d);
  const Polynomial g2 = gcd(c, b);
  const bool k1 = g1.is_constant();
  const bool k2 = g2.is_constant();
  Polynomial num = (k1 ? a : exact_div(a, g1)) * (k2 ? c : exact_div(c, g2));
  Polynomial den = (k2 ? b : exact_div(b, g2)) * (k1 ? d : exact_div(d, g1));
  return coprime(ctx, std::move(num), std::move(den));
}

Expr Expr::operator*(const Expr& o) const {
  const auto& ctx = pick_context(ctx_, o.ctx_);
  if (is_zero() || o.is_zero()) {
    Expr r;
    r.ctx_ = ctx;
    return r;
  }
  if (!relation_free() || !o.relation_free()) return from_polynomials(ctx, num_ * o.num_, den_ * o.den_);
  return cross_cancel(ctx, num_, den_, o.num_, o.den_);
}

Expr Expr::operator/(const Expr& o) const {
  const auto& ctx = pick_context(ctx_, o.ctx_);
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZeroExpression, "division by an expression that is identically zero");
  if (!relation_free() || !o.relation_free()) return from_polynomials(ctx, num_ * o.den_, den_ * o.num_);
  return cross_cancel(ctx, num_, den_, o.den_, o.num_);
}

Expr Expr::pow(int n) const {
  if (n == 0) {
    Expr one(1);
    one.ctx_ = ctx_;
    return one;
  }
  if (n < 0) {
    Expr one(1);
    one.ctx_ = ctx_;
    return (one / *this).pow(-n);
  }
  const auto un = static_cast<std::uint32_t>(n);
  return from_polynomials(ctx_, num_.pow(un), den_.pow(un));
}

// ---------------------------------------------------------- differentiation

namespace {

Expr poly_expr(const ConstContextPtr& ctx, Polynomial p) { return Expr::from_polynomials(ctx, std::move(p)); }

Expr total_derivative(const ConstContextPtr& ctx, const Polynomial& p, SymbolId var);

Expr auxiliary_derivative(const ConstContextPtr& ctx, SymbolId aux, SymbolId var) {
  const Relation* rel = ctx->relation_of(aux);
  if (rel == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "auxiliary symbol '" + ctx->name(aux) + "' has no relation");
  }
  if (rel->kind == Relation::Kind::trig_pair) {
    if (var != rel->angle) return Expr(0);
    if (aux == rel->defined) return Expr::symbol(ctx, rel->cosine);
    return -Expr::symbol(ctx, rel->defined);
  }
  // d^2 = square  =>  dd/dv = (d square/dv) / (2 d)
  Expr dsquare = total_derivative(ctx, rel->square, var);
  if (dsquare.is_zero()) return dsquare;
  return dsquare / (Expr(2) * Expr::symbol(ctx, aux));
}

Expr total_derivative(const ConstContextPtr& ctx, const Polynomial& p, SymbolId var) {
  Expr out = poly_expr(ctx, p.derivative(var));
  if (!ctx) return out;
  for (SymbolId v : p.variables()) {
    if (v == var || ctx->kind(v) != SymbolKind::auxiliary) continue;
    Expr dv = auxiliary_derivative(ctx, v, var);
    if (dv.is_zero()) continue;
    out += poly_expr(ctx, p.derivative(v)) * dv;
  }
  return out;
}

}  // namespace

Expr differentiate(const Expr& e, SymbolId var) {
  const auto& ctx = e.context();
  if (ctx && var >= ctx->size()) {
    throw Error(ErrorCode::UndeclaredSymbol, "symbol id " + std::to_string(var) + " is not declared");
  }
  if (ctx && ctx->kind(var) == SymbolKind::gauge_parameter) {
    throw Error(ErrorCode::InvalidArgument, "cannot differentiate with respect to gauge parameter '" + ctx->name(var) + "'");
  }
  if (ctx && ctx->kind(var) == SymbolKind::auxiliary) {
    throw Error(ErrorCode::InvalidArgument, "cannot differentiate with respect to auxiliary '" + ctx->name(var) + "'");
  }
  Expr dn = total_derivative(ctx, e.numerator(), var);
  if (e.denominator().is_constant()) {
    return dn / Expr::from_polynomials(ctx, e.denominator());
  }
  Expr dd = total_derivative(ctx, e.denominator(), var);
  const Expr n = poly_expr(ctx, e.numerator());
  const Expr d = poly_expr(ctx, e.denominator());
  return (dn * d - n * dd) / poly_expr(ctx, e.denominator() * e.denominator());
}

// ------------------------------------------------------------ substitution

bool auxiliary_depends_on(const Context& ctx, SymbolId aux, SymbolId var) {
  const Relation* rel = ctx.relation_of(aux);
  if (rel == nullptr) return false;
  if (rel->kind == Relation::Kind::trig_pair) return rel->angle == var;
  for (SymbolId v : rel->square.variables()) {
    if (v == var) return true;
    if (ctx.kind(v) == SymbolKind::auxiliary && auxiliary_depends_on(ctx, v, var)) return true;
  }
  return false;
}

namespace {

struct Rewritten {
  Polynomial num;
  Polynomial den;
};

Rewritten substitute_poly(const Polynomial& p, const std::map<SymbolId, const Expr*>& bind) {
  // Common denominator: prod_v den_v^{deg_v p}.
  std::map<SymbolId, std::uint32_t> max_exp;
  for (const auto& [v, _] : bind) {
    const std::uint32_t d = p.degree_in(v);
    if (d > 0) max_exp[v] = d;
  }
  if (max_exp.empty()) return {p, Polynomial(1)};

  std::map<SymbolId, std::vector<Polynomial>> num_pow;
  std::map<SymbolId, std::vector<Polynomial>> den_pow;
  Polynomial common(1);
  for (const auto& [v, d] : max_exp) {
    const Expr& b = *bind.at(v);
    auto& np = num_pow[v];
    auto& dp = den_pow[v];
    np.push_back(Polynomial(1));
    dp.push_back(Polynomial(1));
    for (std::uint32_t k = 1; k <= d; ++k) {
      np.push_back(np.back() * b.numerator());
      dp.push_back(dp.back() * b.denominator());
    }
    common *= dp[d];
  }

  std::vector<Term> plain;
  Polynomial acc;
  for (const auto& t : p.terms()) {
    std::vector<VarPower> rest;
    Polynomial factor(1);
    bool bound = false;
    for (const auto& f : t.mono.factors()) {
      auto it = max_exp.find(f.var);
      if (it == max_exp.end()) {
        rest.push_back(f);
      } else {
        bound = true;
        factor *= num_pow[f.var][f.exp];
      }
    }
    for (const auto& [v, d] : max_exp) {
      const std::uint32_t e = t.mono.exponent(v);
      if (e < d) factor *= den_pow[v][d - e];
    }
    (void)bound;
    acc += factor.mul_term(Monomial::from_factors(std::move(rest)), t.coeff);
  }
  return {acc, common};
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& bindings) {
  if (bindings.empty()) return e;
  ConstContextPtr ctx = e.context();
  std::map<SymbolId, const Expr*> bind;
  for (const auto& [v, value] : bindings) {
    ctx = pick_context(ctx, value.context());
    if (ctx && v >= ctx->size()) {
      throw Error(ErrorCode::UndeclaredSymbol, "substitution binds undeclared symbol id " + std::to_string(v));
    }
    bind[v] = &value;
  }
  if (!ctx) return e;  // constants only
  const auto syms = e.symbols();
  for (SymbolId s : syms) {
    if (ctx->kind(s) != SymbolKind::auxiliary || bind.count(s) != 0) continue;
    for (const auto& [v, _] : bind) {
      if (auxiliary_depends_on(*ctx, s, v)) {
        throw Error(ErrorCode::InvalidArgument,
                    "cannot substitute '" + ctx->name(v) + "' while auxiliary '" + ctx->name(s) + "' depends on it");
      }
    }
  }
  bool touched = false;
  for (SymbolId s : syms) touched = touched || bind.count(s) != 0;
  if (!touched) return e;

  Rewritten n = substitute_poly(e.numerator(), bind);
  Rewritten d = substitute_poly(e.denominator(), bind);
  return Expr::from_polynomials(ctx, n.num * d.den, n.den * d.num);
}

std::vector<SymbolId> base_symbols(const Expr& e) {
  std::vector<SymbolId> out;
  const auto& ctx = e.context();
  std::vector<SymbolId> pending = e.symbols();
  while (!pending.empty()) {
    const SymbolId s = pending.back();
    pending.pop_back();
    if (ctx && ctx->kind(s) == SymbolKind::auxiliary) {
      if (const Relation* rel = ctx->relation_of(s)) {
        if (rel->kind == Relation::Kind::trig_pair) {
          pending.push_back(rel->angle);
        } else {
          for (SymbolId v : rel->square.variables()) pending.push_back(v);
        }
      }
      continue;
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Rational> rational_ratio(const Expr& e, const Expr& s) {
  if (s.is_zero() || e.is_zero()) return std::nullopt;
  return (e / s).constant_value();
}

}  // namespace fjkit
