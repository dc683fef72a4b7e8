#include "parser/printer.hpp"

#include <sstream>

namespace fjkit {

namespace {

std::string symbol_name(SymbolId id, const Context* ctx) {
  if (ctx != nullptr && id < ctx->size()) return ctx->name(id);
  return "#" + std::to_string(id);
}

void print_monomial(std::ostringstream& os, const Monomial& m, const Context* ctx) {
  bool first = true;
  for (const auto& f : m.factors()) {
    if (!first) os << '*';
    first = false;
    os << symbol_name(f.var, ctx);
    if (f.exp != 1) os << '^' << f.exp;
  }
}

std::size_t factor_count(const Polynomial& p) {
  if (p.size() != 1) return 2;
  const Term& t = p.leading();
  std::size_t n = t.mono.factors().size();
  if (abs(t.coeff) != 1 || t.mono.is_one()) ++n;
  return n;
}

std::string prefix_symbol(SymbolId id, const Context* ctx) {
  std::string n = symbol_name(id, ctx);
  if (n.find_first_of("() ") != std::string::npos) return "|" + n + "|";
  return n;
}

std::string prefix_term(const Term& t, const Context* ctx) {
  std::vector<std::string> parts;
  if (t.coeff != 1 || t.mono.is_one()) parts.push_back(print_rational(t.coeff));
  for (const auto& f : t.mono.factors()) {
    if (f.exp == 1) {
      parts.push_back(prefix_symbol(f.var, ctx));
    } else {
      parts.push_back("(^ " + prefix_symbol(f.var, ctx) + " " + std::to_string(f.exp) + ")");
    }
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(*";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string prefix_polynomial(const Polynomial& p, const Context* ctx) {
  if (p.is_zero()) return "0";
  if (p.size() == 1) return prefix_term(p.leading(), ctx);
  std::string out = "(+";
  for (const auto& t : p.terms()) out += " " + prefix_term(t, ctx);
  return out + ")";
}

}  // namespace

std::string print_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string print_polynomial(const Polynomial& p, const Context* ctx) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = t.coeff < 0;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    const Rational mag = abs(t.coeff);
    if (t.mono.is_one()) {
      os << print_rational(mag);
      continue;
    }
    if (mag != 1) os << print_rational(mag) << '*';
    print_monomial(os, t.mono, ctx);
  }
  return os.str();
}

std::string print_expression(const Expr& e) {
  const Context* ctx = e.context().get();
  const Polynomial& num = e.numerator();
  const Polynomial& den = e.denominator();
  if (den.is_constant() && den.constant_value() == 1) return print_polynomial(num, ctx);
  std::string n = print_polynomial(num, ctx);
  if (num.size() > 1) n = "(" + n + ")";
  std::string d = print_polynomial(den, ctx);
  if (factor_count(den) > 1) d = "(" + d + ")";
  return n + "/" + d;
}

std::string print_prefix(const Expr& e) {
  const Context* ctx = e.context().get();
  const std::string n = prefix_polynomial(e.numerator(), ctx);
  if (e.denominator().is_constant() && e.denominator().constant_value() == 1) return n;
  return "(/ " + n + " " + prefix_polynomial(e.denominator(), ctx) + ")";
}

}  // namespace fjkit
