#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fjkit {

using SymbolId = std::uint32_t;
using Rational = mpq_class;
using Integer = mpz_class;

struct VarPower {
  SymbolId var;
  std::uint32_t exp;
  bool operator==(const VarPower&) const = default;
};

/// Power product over symbols, stored sparse and sorted by symbol id.
class Monomial {
 public:
  Monomial() = default;
  static Monomial variable(SymbolId var, std::uint32_t exp = 1);
  static Monomial from_factors(std::vector<VarPower> factors);

  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(SymbolId var) const;
  std::span<const VarPower> factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  bool contains(SymbolId var) const { return exponent(var) != 0; }

  Monomial operator*(const Monomial& other) const;
  /// this / other when every exponent of `other` is covered.
  std::optional<Monomial> divide(const Monomial& other) const;
  Monomial without(SymbolId var) const;
  Monomial gcd(const Monomial& other) const;

  bool operator==(const Monomial& other) const = default;

 private:
  std::vector<VarPower> factors_;
  std::uint32_t degree_ = 0;
};

/// Graded lexicographic order; lower symbol ids rank higher. Returns <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept sorted in decreasing monomial order with no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial variable(SymbolId var, std::uint32_t exp = 1);
  static Polynomial monomial(Monomial m, Rational c);
  static Polynomial from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  std::size_t size() const { return terms_.size(); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial mul_term(const Monomial& m, const Rational& c) const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial pow(std::uint32_t n) const;

  std::uint32_t degree_in(SymbolId var) const;
  std::uint32_t total_degree() const;
  bool contains(SymbolId var) const;
  /// Sorted distinct symbols occurring in the polynomial.
  std::vector<SymbolId> variables() const;
  /// Coefficients c_k (free of `var`) with self = sum_k c_k var^k.
  std::vector<Polynomial> coefficients_in(SymbolId var) const;
  static Polynomial from_coefficients(SymbolId var, const std::vector<Polynomial>& coeffs);
  Polynomial derivative(SymbolId var) const;

  /// Positive rational c such that self / c has coprime integer coefficients.
  Rational content() const;
  /// self / content, sign fixed so the leading coefficient is positive.
  Polynomial primitive() const;

  bool operator==(const Polynomial& o) const;

 private:
  std::vector<Term> terms_;
};

/// Quotient a / b when b divides a exactly over Q, nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

/// Greatest common divisor over Q, returned primitive with positive leading
/// coefficient; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// gcd of the coefficients of `p` viewed as a polynomial in `var`.
Polynomial content_in(const Polynomial& p, SymbolId var);

}  // namespace fjkit
