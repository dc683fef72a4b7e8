#include "expr/context.hpp"

#include "common/error.hpp"

namespace fjkit {

std::string_view symbol_kind_name(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::dynamical: return "dynamical";
    case SymbolKind::momentum: return "momentum";
    case SymbolKind::parameter: return "parameter";
    case SymbolKind::multiplier: return "multiplier";
    case SymbolKind::gauge_parameter: return "gauge_parameter";
    case SymbolKind::auxiliary: return "auxiliary";
  }
  return "unknown";
}

std::optional<SymbolKind> parse_symbol_kind(std::string_view text) {
  for (SymbolKind k : {SymbolKind::dynamical, SymbolKind::momentum, SymbolKind::parameter,
                       SymbolKind::multiplier, SymbolKind::gauge_parameter, SymbolKind::auxiliary}) {
    if (symbol_kind_name(k) == text) return k;
  }
  return std::nullopt;
}

SymbolId Context::add_symbol(std::string name, SymbolKind kind) {
  if (by_name_.count(name) != 0) {
    throw Error(ErrorCode::DuplicateSymbol, "symbol '" + name + "' declared twice");
  }
  const auto id = static_cast<SymbolId>(symbols_.size());
  by_name_.emplace(name, id);
  symbols_.push_back({std::move(name), kind, id});
  return id;
}

SymbolId Context::add_fresh_symbol(const std::string& base, SymbolKind kind) {
  if (by_name_.count(base) == 0) return add_symbol(base, kind);
  for (int i = 2;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (by_name_.count(candidate) == 0) return add_symbol(std::move(candidate), kind);
  }
}

std::optional<SymbolId> Context::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void Context::add_quadratic_relation(SymbolId defined, const Polynomial& identity, int sign) {
  const std::string& dname = name(defined);
  if (kind(defined) != SymbolKind::auxiliary) {
    throw Error(ErrorCode::InvalidRelation, "relation symbol '" + dname + "' must be auxiliary");
  }
  if (relation_index_.count(defined) != 0) {
    throw Error(ErrorCode::InvalidRelation, "symbol '" + dname + "' already has a relation");
  }
  const auto coeffs = identity.coefficients_in(defined);
  if (coeffs.size() != 3 || !coeffs[1].is_zero() || !coeffs[2].is_constant()) {
    throw Error(ErrorCode::InvalidRelation,
                "relation for '" + dname + "' must have the form c*" + dname + "^2 + (terms free of " + dname +
                    ") with a constant c");
  }
  Polynomial square = -coeffs[0] * (Rational(1) / coeffs[2].constant_value());
  if (square.is_zero()) {
    throw Error(ErrorCode::InvalidRelation, "relation for '" + dname + "' defines a zero square");
  }
  for (SymbolId v : square.variables()) {
    if (relation_index_.count(v) == 0 && kind(v) == SymbolKind::auxiliary) {
      throw Error(ErrorCode::InvalidRelation,
                  "relation for '" + dname + "' references auxiliary '" + name(v) + "' with no earlier relation");
    }
  }
  Relation rel;
  rel.kind = Relation::Kind::quadratic;
  rel.defined = defined;
  rel.square = std::move(square);
  rel.identity = identity.primitive();
  rel.sign = sign;
  relation_index_[defined] = relations_.size();
  relations_.push_back(std::move(rel));
}

std::optional<std::pair<SymbolId, SymbolId>> Context::find_trig_pair(SymbolId angle) const {
  for (const auto& r : relations_) {
    if (r.kind == Relation::Kind::trig_pair && r.angle == angle) return std::make_pair(r.defined, r.cosine);
  }
  return std::nullopt;
}

std::pair<SymbolId, SymbolId> Context::trig_pair(SymbolId angle) {
  if (auto existing = find_trig_pair(angle)) return *existing;
  const std::string a = name(angle);
  const SymbolId s = add_symbol("sin(" + a + ")", SymbolKind::auxiliary);
  const SymbolId c = add_symbol("cos(" + a + ")", SymbolKind::auxiliary);
  Relation rel;
  rel.kind = Relation::Kind::trig_pair;
  rel.defined = s;
  rel.angle = angle;
  rel.cosine = c;
  rel.square = Polynomial(1) - Polynomial::variable(c, 2);
  rel.identity = Polynomial::variable(s, 2) + Polynomial::variable(c, 2) - Polynomial(1);
  relation_index_[s] = relations_.size();
  relation_index_[c] = relations_.size();
  relations_.push_back(std::move(rel));
  return {s, c};
}

SymbolId Context::radical(const Polynomial& square, const std::string& radical_name) {
  for (const auto& r : relations_) {
    if (r.kind == Relation::Kind::quadratic && r.sign > 0 && r.square == square) return r.defined;
  }
  const SymbolId id = add_symbol(radical_name, SymbolKind::auxiliary);
  add_quadratic_relation(id, Polynomial::variable(id, 2) - square, +1);
  return id;
}

const Relation* Context::relation_of(SymbolId aux) const {
  auto it = relation_index_.find(aux);
  if (it == relation_index_.end()) return nullptr;
  return &relations_[it->second];
}

bool Context::is_defined_symbol(SymbolId id) const {
  const Relation* r = relation_of(id);
  return r != nullptr && r->defined == id;
}

Polynomial Context::reduce(const Polynomial& p) const {
  Polynomial out = p;
  for (auto it = relations_.rbegin(); it != relations_.rend(); ++it) {
    if (out.degree_in(it->defined) < 2) continue;
    const auto coeffs = out.coefficients_in(it->defined);
    Polynomial reduced;
    Polynomial square_power(1);
    const Polynomial d = Polynomial::variable(it->defined);
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
      if (e >= 2 && e % 2 == 0) square_power *= it->square;
      if (coeffs[e].is_zero()) continue;
      Polynomial term = coeffs[e] * square_power;
      if (e % 2 == 1) term *= d;
      reduced += term;
    }
    out = std::move(reduced);
  }
  return out;
}

}  // namespace fjkit
