#include "expr/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace fjkit {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(SymbolId var, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) {
    m.factors_.push_back({var, exp});
    m.degree_ = exp;
  }
  return m;
}

Monomial Monomial::from_factors(std::vector<VarPower> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const VarPower& a, const VarPower& b) { return a.var < b.var; });
  Monomial m;
  for (const auto& f : factors) {
    if (f.exp == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().var == f.var) {
      m.factors_.back().exp += f.exp;
    } else {
      m.factors_.push_back(f);
    }
    m.degree_ += f.exp;
  }
  return m;
}

std::uint32_t Monomial::exponent(SymbolId var) const {
  for (const auto& f : factors_) {
    if (f.var == var) return f.exp;
    if (f.var > var) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  std::size_t i = 0, j = 0;
  while (i < factors_.size() || j < other.factors_.size()) {
    if (j == other.factors_.size() || (i < factors_.size() && factors_[i].var < other.factors_[j].var)) {
      out.factors_.push_back(factors_[i++]);
    } else if (i == factors_.size() || other.factors_[j].var < factors_[i].var) {
      out.factors_.push_back(other.factors_[j++]);
    } else {
      out.factors_.push_back({factors_[i].var, factors_[i].exp + other.factors_[j].exp});
      ++i;
      ++j;
    }
  }
  out.degree_ = degree_ + other.degree_;
  return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  Monomial out;
  std::size_t i = 0;
  for (const auto& f : other.factors_) {
    while (i < factors_.size() && factors_[i].var < f.var) out.factors_.push_back(factors_[i++]);
    if (i == factors_.size() || factors_[i].var != f.var || factors_[i].exp < f.exp) return std::nullopt;
    if (factors_[i].exp > f.exp) out.factors_.push_back({f.var, factors_[i].exp - f.exp});
    ++i;
  }
  while (i < factors_.size()) out.factors_.push_back(factors_[i++]);
  out.degree_ = degree_ - other.degree_;
  return out;
}

Monomial Monomial::without(SymbolId var) const {
  Monomial out;
  for (const auto& f : factors_) {
    if (f.var == var) continue;
    out.factors_.push_back(f);
    out.degree_ += f.exp;
  }
  return out;
}

Monomial Monomial::gcd(const Monomial& other) const {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < factors_.size() && j < other.factors_.size()) {
    if (factors_[i].var < other.factors_[j].var) {
      ++i;
    } else if (other.factors_[j].var < factors_[i].var) {
      ++j;
    } else {
      const std::uint32_t e = std::min(factors_[i].exp, other.factors_[j].exp);
      out.factors_.push_back({factors_[i].var, e});
      out.degree_ += e;
      ++i;
      ++j;
    }
  }
  return out;
}

int compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  const auto fa = a.factors();
  const auto fb = b.factors();
  std::size_t i = 0, j = 0;
  while (i < fa.size() && j < fb.size()) {
    if (fa[i].var == fb[j].var) {
      if (fa[i].exp != fb[j].exp) return fa[i].exp > fb[j].exp ? 1 : -1;
      ++i;
      ++j;
    } else {
      return fa[i].var < fb[j].var ? 1 : -1;
    }
  }
  if (i < fa.size()) return 1;
  if (j < fb.size()) return -1;
  return 0;
}

// -------------------------------------------------------------- Polynomial

namespace {

bool term_greater(const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; }

Rational rational_gcd_of_content(const std::vector<Term>& terms) {
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& t : terms) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational out(num_gcd, den_lcm);
  out.canonicalize();
  return out;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial{}, c});
}

Polynomial Polynomial::variable(SymbolId var, std::uint32_t exp) {
  return monomial(Monomial::variable(var, exp), Rational(1));
}

Polynomial Polynomial::monomial(Monomial m, Rational c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!terms_[0].mono.is_one() || terms_.size() != 1) throw std::logic_error("polynomial is not constant");
  return terms_[0].coeff;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  Polynomial out;
  out.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    const int c = compare(terms_[i].mono, o.terms_[j].mono);
    if (c > 0) {
      out.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      out.terms_.push_back(o.terms_[j++]);
    } else {
      Rational s = terms_[i].coeff + o.terms_[j].coeff;
      if (s != 0) out.terms_.push_back({terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  while (i < terms_.size()) out.terms_.push_back(terms_[i++]);
  while (j < o.terms_.size()) out.terms_.push_back(o.terms_[j++]);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Rational& c) const {
  if (c == 0) return {};
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

Polynomial Polynomial::mul_term(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  Polynomial out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.mono * m, t.coeff * c});
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.is_monomial()) return mul_term(o.terms_[0].mono, o.terms_[0].coeff);
  if (is_monomial()) return o.mul_term(terms_[0].mono, terms_[0].coeff);
  std::vector<Term> prods;
  prods.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) prods.push_back({a.mono * b.mono, a.coeff * b.coeff});
  }
  return from_terms(std::move(prods));
}

Polynomial Polynomial::pow(std::uint32_t n) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n > 0) base *= base;
  }
  return result;
}

std::uint32_t Polynomial::degree_in(SymbolId var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

std::uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().mono.degree();
}

bool Polynomial::contains(SymbolId var) const {
  for (const auto& t : terms_) {
    if (t.mono.contains(var)) return true;
  }
  return false;
}

std::vector<SymbolId> Polynomial::variables() const {
  std::vector<SymbolId> vars;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) vars.push_back(f.var);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::vector<Polynomial> Polynomial::coefficients_in(SymbolId var) const {
  std::vector<Polynomial> coeffs(degree_in(var) + 1);
  for (const auto& t : terms_) {
    const std::uint32_t e = t.mono.exponent(var);
    coeffs[e].terms_.push_back({t.mono.without(var), t.coeff});
  }
  return coeffs;
}

Polynomial Polynomial::from_coefficients(SymbolId var, const std::vector<Polynomial>& coeffs) {
  Polynomial out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    out += coeffs[k].mul_term(Monomial::variable(var, static_cast<std::uint32_t>(k)), Rational(1));
  }
  return out;
}

Polynomial Polynomial::derivative(SymbolId var) const {
  Polynomial out;
  for (const auto& t : terms_) {
    const std::uint32_t e = t.mono.exponent(var);
    if (e == 0) continue;
    std::vector<VarPower> f(t.mono.factors().begin(), t.mono.factors().end());
    for (auto& vp : f) {
      if (vp.var == var) vp.exp -= 1;
    }
    out.terms_.push_back({Monomial::from_factors(std::move(f)), t.coeff * e});
  }
  return out;
}

Rational Polynomial::content() const {
  if (terms_.empty()) return Rational(0);
  return rational_gcd_of_content(terms_);
}

Polynomial Polynomial::primitive() const {
  if (terms_.empty()) return {};
  Rational c = content();
  if (terms_.front().coeff < 0) c = -c;
  if (c == 1) return *this;
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coeff /= c;
  return out;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != o.terms_[i].coeff || !(terms_[i].mono == o.terms_[i].mono)) return false;
  }
  return true;
}

// ------------------------------------------------------- division and gcd

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.is_zero()) return Polynomial{};
  if (b.is_constant()) return a * (Rational(1) / b.constant_value());
  const Term& lead = b.leading();
  std::vector<Term> quotient;
  Polynomial rem = a;
  while (!rem.is_zero()) {
    const Term& lt = rem.leading();
    auto m = lt.mono.divide(lead.mono);
    if (!m) return std::nullopt;
    Rational c = lt.coeff / lead.coeff;
    rem -= b.mul_term(*m, c);
    quotient.push_back({std::move(*m), std::move(c)});
  }
  return Polynomial::from_terms(std::move(quotient));
}

namespace {

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("expected exact polynomial division");
  return std::move(*q);
}

Polynomial monomial_gcd(const Monomial& m, const Polynomial& p) {
  Monomial g = m;
  for (const auto& t : p.terms()) {
    g = g.gcd(t.mono);
    if (g.is_one()) break;
  }
  return Polynomial::monomial(std::move(g), Rational(1));
}

std::uint32_t degree_of(const std::vector<Polynomial>& coeffs) {
  return static_cast<std::uint32_t>(coeffs.size() - 1);
}

void trim(std::vector<Polynomial>& coeffs) {
  while (coeffs.size() > 1 && coeffs.back().is_zero()) coeffs.pop_back();
}

// Pseudo-remainder of p by q in the main variable; the multipliers applied to
// p are free of the main variable, which the primitive-part steps absorb.
std::vector<Polynomial> pseudo_remainder(std::vector<Polynomial> p, const std::vector<Polynomial>& q) {
  const std::uint32_t n = degree_of(q);
  const Polynomial& lc = q.back();
  while (!(p.size() == 1 && p[0].is_zero()) && degree_of(p) >= n) {
    const std::uint32_t k = degree_of(p);
    Polynomial top = p.back();
    Polynomial g = gcd(top, lc);
    Polynomial scale_p = exact(lc, g);
    Polynomial scale_q = exact(top, g);
    for (auto& c : p) c = c * scale_p;
    for (std::uint32_t j = 0; j <= n; ++j) p[k - n + j] -= scale_q * q[j];
    p.pop_back();
    if (p.empty()) p.push_back(Polynomial{});
    trim(p);
  }
  return p;
}

Polynomial content_of(const std::vector<Polynomial>& coeffs) {
  Polynomial g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

std::vector<Polynomial> primitive_part(std::vector<Polynomial> coeffs) {
  Polynomial c = content_of(coeffs);
  if (!c.is_constant()) {
    for (auto& k : coeffs) {
      if (!k.is_zero()) k = exact(k, c);
    }
  }
  // Integer-primitive normalization keeps coefficient growth in check.
  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& k : coeffs) {
    for (const auto& t : k.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
    }
  }
  if (num_gcd != 0) {
    Rational s(den_lcm, num_gcd);
    s.canonicalize();
    for (auto& k : coeffs) k = k * s;
  }
  return coeffs;
}

// Univariate image modulo a prime with the other variables fixed at
// pseudo-random residues. When both leading coefficients survive, the image
// gcd degree bounds the degree in `var` of the true gcd from above.
constexpr std::uint64_t kPrime = 2305843009213693951ull;  // 2^61 - 1

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kPrime);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e != 0; e >>= 1, a = mul_mod(a, a)) {
    if (e & 1) r = mul_mod(r, a);
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::optional<std::uint64_t> residue(const Rational& q) {
  const Integer p(static_cast<unsigned long>(kPrime));
  Integer n = q.get_num() % p;
  if (n < 0) n += p;
  const Integer d = q.get_den() % p;
  if (d == 0) return std::nullopt;
  return mul_mod(n.get_ui(), inv_mod(d.get_ui()));
}

using ModPoly = std::vector<std::uint64_t>;

std::optional<ModPoly> image(const Polynomial& f, SymbolId var, const std::vector<std::pair<SymbolId, std::uint64_t>>& point) {
  ModPoly out(f.degree_in(var) + 1, 0);
  for (const auto& t : f.terms()) {
    auto c = residue(t.coeff);
    if (!c) return std::nullopt;
    std::uint64_t v = *c;
    std::uint32_t k = 0;
    for (const auto& fp : t.mono.factors()) {
      if (fp.var == var) {
        k = fp.exp;
        continue;
      }
      for (const auto& [s, x] : point) {
        if (s == fp.var) v = mul_mod(v, pow_mod(x, fp.exp));
      }
    }
    out[k] = (out[k] + v) % kPrime;
  }
  return out;
}

void trim_mod(ModPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::size_t gcd_degree_mod(ModPoly a, ModPoly b) {
  trim_mod(a);
  trim_mod(b);
  while (!b.empty()) {
    const std::uint64_t inv = inv_mod(b.back());
    while (a.size() >= b.size()) {
      const std::uint64_t f = mul_mod(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t j = 0; j < b.size(); ++j) {
        a[shift + j] = (a[shift + j] + kPrime - mul_mod(f, b[j])) % kPrime;
      }
      trim_mod(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

std::optional<std::size_t> gcd_degree_bound(const Polynomial& a, const Polynomial& b, SymbolId var) {
  std::vector<SymbolId> others = a.variables();
  for (SymbolId v : b.variables()) others.push_back(v);
  std::sort(others.begin(), others.end());
  others.erase(std::unique(others.begin(), others.end()), others.end());
  others.erase(std::remove(others.begin(), others.end(), var), others.end());
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<std::pair<SymbolId, std::uint64_t>> point;
    for (SymbolId v : others) {
      seed = seed * 6364136223846793005ull + 1442695040888963407ull;
      point.emplace_back(v, (seed >> 3) % kPrime);
    }
    auto ia = image(a, var, point);
    auto ib = image(b, var, point);
    if (!ia || !ib) return std::nullopt;
    if (ia->back() == 0 || ib->back() == 0) continue;
    return gcd_degree_mod(std::move(*ia), std::move(*ib));
  }
  return std::nullopt;
}

Polynomial prs_gcd(const Polynomial& a, const Polynomial& b, SymbolId var) {
  if (const auto bound = gcd_degree_bound(a, b, var)) {
    if (*bound == 0) return Polynomial(1);
    // bound equal to the smaller degree: the smaller input may divide the other
    const bool a_small = a.degree_in(var) <= b.degree_in(var);
    const Polynomial& lo = a_small ? a : b;
    const Polynomial& hi = a_small ? b : a;
    if (*bound == lo.degree_in(var) && divide_exact(hi, lo)) return lo;
  }
  auto p = a.coefficients_in(var);
  auto q = b.coefficients_in(var);
  if (degree_of(p) < degree_of(q)) std::swap(p, q);
  q = primitive_part(std::move(q));
  while (true) {
    auto r = pseudo_remainder(p, q);
    if (r.size() == 1 && r[0].is_zero()) return Polynomial::from_coefficients(var, q);
    if (degree_of(r) == 0) return Polynomial(1);
    p = std::move(q);
    q = primitive_part(std::move(r));
  }
}

}  // namespace

Polynomial content_in(const Polynomial& p, SymbolId var) {
  return content_of(p.coefficients_in(var));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a.is_monomial()) return monomial_gcd(a.leading().mono, b);
  if (b.is_monomial()) return monomial_gcd(b.leading().mono, a);
  if (a == b) return a.primitive();

  const auto va = a.variables();
  const auto vb = b.variables();
  for (SymbolId v : va) {
    if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd(content_in(a, v), b);
  }
  for (SymbolId v : vb) {
    if (!std::binary_search(va.begin(), va.end(), v)) return gcd(a, content_in(b, v));
  }

  // Main variable: smallest combined degree keeps the remainder sequence short.
  SymbolId var = va.front();
  std::uint32_t best = ~0u;
  for (SymbolId v : va) {
    const std::uint32_t d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      var = v;
    }
  }

  const Polynomial ca = content_in(a, var);
  const Polynomial cb = content_in(b, var);
  const Polynomial pa = ca.is_constant() ? a : exact(a, ca);
  const Polynomial pb = cb.is_constant() ? b : exact(b, cb);
  const Polynomial c = gcd(ca, cb);
  const Polynomial g = prs_gcd(pa, pb, var);
  return (c * g).primitive();
}

}  // namespace fjkit
