#include "linalg/matrix.hpp"

#include <stdexcept>

#include "common/error.hpp"

namespace fjkit {

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

SymMatrix SymMatrix::transpose() const {
  SymMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  t.row_labels = col_labels;
  t.col_labels = row_labels;
  return t;
}

bool SymMatrix::is_zero() const {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool SymMatrix::is_antisymmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      if (!((*this)(i, j) + (*this)(j, i)).is_zero()) return false;
    }
  }
  return true;
}

bool SymMatrix::operator==(const SymMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

SymMatrix operator*(const SymMatrix& a, const SymMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimensions do not agree");
  SymMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Expr acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  }
  out.row_labels = a.row_labels;
  out.col_labels = b.col_labels;
  return out;
}

Elimination row_reduce(SymMatrix m) {
  Elimination out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    }
    const Expr pivot = m(row, col);
    out.pivots.push_back({row, col, pivot});
    if (!(pivot.is_constant() && *pivot.constant_value() == 1)) {
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (!m(row, j).is_zero()) m(row, j) = m(row, j) / pivot;
      }
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Expr factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (!m(row, j).is_zero()) m(i, j) = m(i, j) - factor * m(row, j);
      }
    }
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const SymMatrix& m) { return row_reduce(m).pivots.size(); }

std::vector<Expr> normalize_vector(const std::vector<Expr>& v) {
  ConstContextPtr ctx;
  Polynomial lcm(1);
  for (const auto& c : v) {
    if (c.context()) ctx = c.context();
    if (c.is_zero() || c.denominator().is_constant()) continue;
    const Polynomial g = gcd(lcm, c.denominator());
    lcm = *divide_exact(lcm * c.denominator(), g);
  }
  std::vector<Expr> out;
  out.reserve(v.size());
  const Expr scale = Expr::from_polynomials(ctx, lcm);
  for (const auto& c : v) out.push_back(c * scale);

  Integer num_gcd = 0;
  Integer den_lcm = 1;
  for (const auto& c : out) {
    if (c.is_zero()) continue;
    const Rational d = c.denominator().constant_value();
    for (const auto& t : c.numerator().terms()) {
      const Rational q = t.coeff / d;
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), q.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
    }
  }
  if (num_gcd == 0) return out;
  Rational factor(den_lcm, num_gcd);
  factor.canonicalize();
  for (const auto& c : out) {
    if (c.is_zero()) continue;
    if (c.is_constant() && *c.constant_value() < 0) factor = -factor;
    break;
  }
  if (factor != 1) {
    const Expr f(factor);
    for (auto& c : out) c = c * f;
  }
  return out;
}

std::vector<std::vector<Expr>> left_null_space(const SymMatrix& m) { return left_null_space_detail(m).basis; }

NullSpace left_null_space_detail(const SymMatrix& m) {
  Elimination e = row_reduce(m.transpose());
  const SymMatrix& r = e.reduced;
  std::vector<bool> is_pivot(r.cols(), false);
  for (const auto& p : e.pivots) is_pivot[p.col] = true;

  std::vector<std::vector<Expr>> basis;
  for (std::size_t f = 0; f < r.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Expr> v(r.cols());
    v[f] = Expr(1);
    for (const auto& p : e.pivots) v[p.col] = -r(p.row, f);
    basis.push_back(normalize_vector(v));
  }
  return {std::move(basis), std::move(e.pivots)};
}

SymMatrix invert(const SymMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "cannot invert a non-square matrix");
  const std::size_t n = m.rows();
  SymMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Expr(1);
  }
  const Elimination e = row_reduce(std::move(aug));
  std::size_t left_pivots = 0;
  for (const auto& p : e.pivots) left_pivots += p.col < n ? 1 : 0;
  if (left_pivots != n) {
    throw Error(ErrorCode::SingularMatrix,
                "matrix has rank " + std::to_string(left_pivots) + " < " + std::to_string(n));
  }
  SymMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  }
  inv.row_labels = m.col_labels;
  inv.col_labels = m.row_labels;
  return inv;
}

std::vector<Expr> left_multiply(const std::vector<Expr>& v, const SymMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("vector length does not match matrix rows");
  std::vector<Expr> out(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (v[i].is_zero() || m(i, j).is_zero()) continue;
      out[j] += v[i] * m(i, j);
    }
  }
  return out;
}

}  // namespace fjkit
