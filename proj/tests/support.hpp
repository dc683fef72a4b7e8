#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "common/error.hpp"
#include "core/analysis.hpp"
#include "expr/context.hpp"
#include "expr/expr.hpp"
#include "expr/numeric.hpp"
#include "parser/expression_parser.hpp"
#include "parser/printer.hpp"
#include "parser/raw.hpp"
#include "parser/system_file.hpp"

namespace doctest {
template <>
struct StringMaker<fjkit::Expr> {
  static String convert(const fjkit::Expr& e) { return fjkit::print_expression(e).c_str(); }
};
}  // namespace doctest

namespace fjtest {

using namespace fjkit;

/// Context with the given symbols declared in order, all of one kind.
inline ContextPtr make_context(const std::vector<std::string>& names, SymbolKind kind = SymbolKind::dynamical) {
  auto ctx = std::make_shared<Context>();
  for (const auto& n : names) ctx->add_symbol(n, kind);
  return ctx;
}

/// Code of the fjkit::Error thrown by `f`; fails the test when none is thrown.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an fjkit::Error");
  return ErrorCode::InvalidArgument;
}

inline Expr parse(const ContextPtr& ctx, std::string_view text) { return parse_expression(text, ctx); }

inline SymbolId id(const Context& ctx, std::string_view name) { return ctx.find(name).value(); }

inline Expr sym(const ContextPtr& ctx, std::string_view name) { return Expr::symbol(ctx, id(*ctx, name)); }

/// Deterministic generator; every suite seeds its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

/// Random expression source text over `names` (and sin/cos/sqrt when
/// `builtins` is set). Depth bounds the tree height.
inline std::string random_expression_text(Rng& rng, const std::vector<std::string>& names, int depth,
                                          bool builtins, bool allow_division = true) {
  if (depth <= 0 || rng.coin(0.25)) {
    const int choice = rng.uniform_int(0, 9);
    if (choice < 3) return std::to_string(rng.uniform_int(1, 9));
    if (choice == 3) return std::to_string(rng.uniform_int(1, 5)) + "/" + std::to_string(rng.uniform_int(2, 7));
    if (builtins && choice == 4) return (rng.coin() ? "sin(" : "cos(") + rng.pick(names) + ")";
    if (builtins && choice == 5) return "sqrt(" + rng.pick(names) + "^2 + " + std::to_string(rng.uniform_int(1, 4)) + ")";
    return rng.pick(names);
  }
  const int op = rng.uniform_int(0, allow_division ? 5 : 4);
  auto sub = [&] { return random_expression_text(rng, names, depth - 1, builtins, allow_division); };
  switch (op) {
    case 0: return "(" + sub() + " + " + sub() + ")";
    case 1: return "(" + sub() + " - " + sub() + ")";
    case 2: return sub() + "*" + sub();
    case 3: return "-" + sub();
    case 4: return "(" + sub() + ")^" + std::to_string(rng.uniform_int(0, 3));
    default: return "(" + sub() + ")/(" + sub() + ")";
  }
}

/// Double evaluation of a raw tree, independent of the canonical form.
inline double eval_raw(const RawNode& n, const std::map<SymbolId, double>& v) {
  switch (n.op) {
    case RawNode::Op::number: return n.value.get_d();
    case RawNode::Op::symbol: return v.at(n.symbol);
    case RawNode::Op::add: return eval_raw(*n.args[0], v) + eval_raw(*n.args[1], v);
    case RawNode::Op::sub: return eval_raw(*n.args[0], v) - eval_raw(*n.args[1], v);
    case RawNode::Op::mul: return eval_raw(*n.args[0], v) * eval_raw(*n.args[1], v);
    case RawNode::Op::div: return eval_raw(*n.args[0], v) / eval_raw(*n.args[1], v);
    case RawNode::Op::neg: return -eval_raw(*n.args[0], v);
    case RawNode::Op::pow: return std::pow(eval_raw(*n.args[0], v), n.exponent);
    case RawNode::Op::sin: return std::sin(v.at(n.symbol));
    case RawNode::Op::cos: return std::cos(v.at(n.symbol));
    case RawNode::Op::sqrt: return std::sqrt(eval_raw(*n.args[0], v));
  }
  return NAN;
}

inline bool close(double a, double b, double rel = 1e-9, double abs_tol = 1e-12) {
  return std::abs(a - b) <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

inline std::string fixture(const std::string& name) { return std::string(FJKIT_FIXTURE_DIR) + "/" + name; }

inline AnalysisReport analyze_fixture(const std::string& name) {
  return run_analysis(parse_system_file(fixture(name)));
}

/// Final-system variable by name in a report's context.
inline SymbolId var(const AnalysisReport& r, std::string_view name) { return r.context()->find(name).value(); }

/// Parses `text` in the report's context (reference values for comparison).
inline Expr in_report(const AnalysisReport& r, std::string_view text) { return parse_expression(text, r.context()); }

/// Matrix from rows of expression text.
inline SymMatrix matrix(const ContextPtr& ctx, const std::vector<std::vector<std::string>>& rows) {
  SymMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse(ctx, rows[i][j]);
  }
  return m;
}

inline SymMatrix int_matrix(const std::vector<std::vector<long>>& rows) {
  SymMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Expr(rows[i][j]);
  }
  return m;
}

inline SymMatrix rows_of(const std::vector<std::vector<Expr>>& vs) {
  SymMatrix m(vs.size(), vs.empty() ? 0 : vs[0].size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < vs[i].size(); ++j) m(i, j) = vs[i][j];
  }
  return m;
}

inline std::vector<Expr> int_vector(const std::vector<long>& v) {
  std::vector<Expr> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

/// Two vector families span the same space.
inline bool same_span(const std::vector<std::vector<Expr>>& a, const std::vector<std::vector<Expr>>& b) {
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  const std::size_t ra = rank(rows_of(a));
  return ra == rank(rows_of(b)) && ra == rank(rows_of(both));
}

/// `a` is a nonzero rational multiple of `b`.
inline bool proportional(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  std::optional<Rational> k;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() != b[i].is_zero()) return false;
    if (a[i].is_zero()) continue;
    auto r = rational_ratio(a[i], b[i]);
    if (!r || (k && *k != *r)) return false;
    k = r;
  }
  return k.has_value();
}

inline bool is_zero_vector(const std::vector<Expr>& v) {
  for (const auto& e : v) {
    if (!e.is_zero()) return false;
  }
  return true;
}

}  // namespace fjtest
