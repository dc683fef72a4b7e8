#include "expr/numeric.hpp"

#include <cmath>

#include "common/error.hpp"

namespace fjkit {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= kRelationTolerance * std::max(1.0, std::abs(b)); }

std::optional<double> try_eval(const Polynomial& p, const NumericBindings& values) {
  double sum = 0.0;
  for (const auto& t : p.terms()) {
    double term = t.coeff.get_d();
    for (const auto& f : t.mono.factors()) {
      auto it = values.find(f.var);
      if (it == values.end()) return std::nullopt;
      term *= std::pow(it->second, static_cast<double>(f.exp));
    }
    sum += term;
  }
  return sum;
}

double eval_or_throw(const Polynomial& p, const NumericBindings& values, const Context* ctx) {
  for (const auto& t : p.terms()) {
    for (const auto& f : t.mono.factors()) {
      if (values.count(f.var) == 0) {
        const std::string name = ctx != nullptr ? ctx->name(f.var) : "#" + std::to_string(f.var);
        throw Error(ErrorCode::UnboundSymbol, "no value bound for '" + name + "'");
      }
    }
  }
  return *try_eval(p, values);
}

}  // namespace

NumericBindings complete_bindings(const Context& ctx, NumericBindings values) {
  for (const auto& rel : ctx.relations()) {
    if (rel.kind == Relation::Kind::trig_pair) {
      auto angle = values.find(rel.angle);
      auto s = values.find(rel.defined);
      auto c = values.find(rel.cosine);
      if (angle != values.end()) {
        const double sv = std::sin(angle->second);
        const double cv = std::cos(angle->second);
        if ((s != values.end() && !close(s->second, sv)) || (c != values.end() && !close(c->second, cv))) {
          throw Error(ErrorCode::RelationViolated,
                      "bound values of '" + ctx.name(rel.defined) + "'/'" + ctx.name(rel.cosine) +
                          "' disagree with '" + ctx.name(rel.angle) + "'");
        }
        values[rel.defined] = sv;
        values[rel.cosine] = cv;
      } else if (s != values.end() && c != values.end()) {
        if (!close(s->second * s->second + c->second * c->second, 1.0)) {
          throw Error(ErrorCode::RelationViolated,
                      "'" + ctx.name(rel.defined) + "'^2 + '" + ctx.name(rel.cosine) + "'^2 differs from 1");
        }
      }
      continue;
    }
    const auto square = try_eval(rel.square, values);
    auto d = values.find(rel.defined);
    if (!square) continue;
    if (d != values.end()) {
      const bool sign_ok = rel.sign == 0 || (rel.sign > 0 ? d->second > 0 : d->second < 0);
      if (!close(d->second * d->second, *square) || !sign_ok) {
        throw Error(ErrorCode::RelationViolated, "bound value of '" + ctx.name(rel.defined) + "' violates its relation");
      }
      continue;
    }
    if (*square < -kRelationTolerance * std::max(1.0, std::abs(*square))) {
      throw Error(ErrorCode::RelationViolated,
                  "square of '" + ctx.name(rel.defined) + "' evaluates negative (" + std::to_string(*square) + ")");
    }
    const double root = std::sqrt(std::max(0.0, *square));
    values[rel.defined] = rel.sign < 0 ? -root : root;
  }
  return values;
}

double evaluate_numeric(const Expr& e, const NumericBindings& values) {
  const Context* ctx = e.context().get();
  const NumericBindings full = ctx != nullptr ? complete_bindings(*ctx, values) : values;
  const double den = eval_or_throw(e.denominator(), full, ctx);
  const double num = eval_or_throw(e.numerator(), full, ctx);
  if (den == 0.0) throw Error(ErrorCode::NumericDivisionByZero, "denominator evaluates to zero");
  return num / den;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  terms_.reserve(p.size());
  for (const auto& t : p.terms()) {
    terms_.push_back({t.coeff.get_d(), std::vector<VarPower>(t.mono.factors().begin(), t.mono.factors().end())});
  }
}

double CompiledPolynomial::operator()(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double term = t.coeff;
    for (const auto& f : t.factors) {
      const double v = values[f.var];
      for (std::uint32_t k = 0; k < f.exp; ++k) term *= v;
    }
    sum += term;
  }
  return sum;
}

double CompiledExpr::operator()(std::span<const double> values) const {
  const double den = den_(values);
  if (den == 0.0) throw Error(ErrorCode::NumericDivisionByZero, "denominator evaluates to zero");
  return num_(values) / den;
}

AuxiliaryFiller::AuxiliaryFiller(const Context& ctx) {
  for (const auto& rel : ctx.relations()) {
    const bool trig = rel.kind == Relation::Kind::trig_pair;
    steps_.push_back({trig, rel.defined, rel.cosine, rel.angle, rel.sign,
                      trig ? CompiledPolynomial() : CompiledPolynomial(rel.square)});
  }
}

void AuxiliaryFiller::fill(std::span<double> values) const {
  for (const auto& s : steps_) {
    if (s.trig) {
      values[s.defined] = std::sin(values[s.angle]);
      values[s.cosine] = std::cos(values[s.angle]);
      continue;
    }
    const double sq = s.square(values);
    if (sq < 0.0) throw Error(ErrorCode::RelationViolated, "radicand evaluates negative");
    const double root = std::sqrt(sq);
    values[s.defined] = s.sign < 0 ? -root : root;
  }
}

}  // namespace fjkit
