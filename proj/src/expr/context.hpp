#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "expr/polynomial.hpp"

namespace fjkit {

enum class SymbolKind { dynamical, momentum, parameter, multiplier, gauge_parameter, auxiliary };

std::string_view symbol_kind_name(SymbolKind kind);
std::optional<SymbolKind> parse_symbol_kind(std::string_view text);

/// A declared identifier. `index` is its ordering index: lower indices rank
/// higher in the monomial order and are preferred as pivots.
struct Symbol {
  std::string name;
  SymbolKind kind;
  SymbolId index;
};

/// Auxiliary-symbol relation. Every relation rewrites `defined^2 -> square`;
/// `identity` is the polynomial that vanishes on the relation surface.
///
/// Quadratic relations come from declarations like `r^2 = x^2 + y^2` or from
/// `sqrt(p)`. Trig pairs come from `sin(v)`/`cos(v)`: `defined` is the sine
/// symbol, `square` is 1 - cos^2, and the derivative rules d sin/dv = cos,
/// d cos/dv = -sin hold.
struct Relation {
  enum class Kind { quadratic, trig_pair };
  Kind kind = Kind::quadratic;
  SymbolId defined = 0;
  Polynomial square;
  Polynomial identity;
  int sign = 0;  // +1: defined > 0, -1: defined < 0, 0: unconstrained
  SymbolId angle = 0;   // trig_pair only
  SymbolId cosine = 0;  // trig_pair only
};

/// Append-only symbol table plus the auxiliary relation set. Relations may only
/// reference symbols defined by earlier relations, so reduction processes them
/// in reverse declaration order.
class Context {
 public:
  SymbolId add_symbol(std::string name, SymbolKind kind);
  /// Adds `base`, or `base` with a numeric suffix when the name is taken.
  SymbolId add_fresh_symbol(const std::string& base, SymbolKind kind);
  std::optional<SymbolId> find(std::string_view name) const;
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  SymbolKind kind(SymbolId id) const { return symbols_.at(id).kind; }
  std::size_t size() const { return symbols_.size(); }

  /// Registers `defined^2 = square` (after dividing `identity` by the leading
  /// coefficient). Throws InvalidRelation for anything else.
  void add_quadratic_relation(SymbolId defined, const Polynomial& identity, int sign);
  /// Sine/cosine auxiliaries for `angle`, created on first request.
  std::pair<SymbolId, SymbolId> trig_pair(SymbolId angle);
  std::optional<std::pair<SymbolId, SymbolId>> find_trig_pair(SymbolId angle) const;
  /// Auxiliary `r` with r^2 = square, r > 0; reuses an existing relation with
  /// the same square (as a primitive polynomial up to a positive factor).
  SymbolId radical(const Polynomial& square, const std::string& name);

  const std::vector<Relation>& relations() const { return relations_; }
  /// The relation that defines or pairs `aux`, if any.
  const Relation* relation_of(SymbolId aux) const;
  bool is_defined_symbol(SymbolId id) const;

  /// Normal form modulo the relation ideal: each defined symbol reduced below
  /// degree 2.
  Polynomial reduce(const Polynomial& p) const;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_;
  std::vector<Relation> relations_;
  std::map<SymbolId, std::size_t> relation_index_;  // aux symbol -> relation
};

using ContextPtr = std::shared_ptr<Context>;
using ConstContextPtr = std::shared_ptr<const Context>;

}  // namespace fjkit
