#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "expr/expr.hpp"

namespace fjkit {

/// Dense row-major matrix of canonical expressions with optional labels.
class SymMatrix {
 public:
  SymMatrix() = default;
  SymMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  static SymMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Expr& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const std::vector<Expr>& entries() const { return entries_; }

  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  SymMatrix transpose() const;
  bool is_zero() const;
  bool is_antisymmetric() const;
  bool operator==(const SymMatrix& o) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Expr> entries_;
};

SymMatrix operator*(const SymMatrix& a, const SymMatrix& b);

struct Pivot {
  std::size_t row;
  std::size_t col;
  Expr value;
};

struct Elimination {
  SymMatrix reduced;  // reduced row echelon form
  std::vector<Pivot> pivots;
};

/// Gauss-Jordan elimination. Columns are scanned left to right; the pivot is
/// the first row at or below the current one whose entry is not identically
/// zero.
Elimination row_reduce(SymMatrix m);

std::size_t rank(const SymMatrix& m);

/// Basis of {v : v^T M = 0}. Each free variable is set to 1 in turn, then the
/// vector is cleared of denominators, divided by its integer content, and
/// negated when its first nonzero component is a negative constant.
std::vector<std::vector<Expr>> left_null_space(const SymMatrix& m);

struct NullSpace {
  std::vector<std::vector<Expr>> basis;
  std::vector<Pivot> pivots;  // of the eliminated transpose
};
NullSpace left_null_space_detail(const SymMatrix& m);

/// Throws SingularMatrix; labels are carried over transposed.
SymMatrix invert(const SymMatrix& m);

/// v^T M as a row vector.
std::vector<Expr> left_multiply(const std::vector<Expr>& v, const SymMatrix& m);

/// Scaled copy with polynomial components, integer content 1 and the sign rule
/// of left_null_space.
std::vector<Expr> normalize_vector(const std::vector<Expr>& v);

}  // namespace fjkit
