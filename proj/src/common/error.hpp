#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fjkit {

enum class ErrorCode {
  // expr
  UndeclaredSymbol,
  DivisionByZeroExpression,
  UnboundSymbol,
  RelationViolated,
  NumericDivisionByZero,
  InvalidRelation,
  // linalg
  SingularMatrix,
  // fj_core
  NonlinearUnreducibleConstraint,
  MissingSolveHint,
  InvalidSolveHint,
  GaugeNotFixing,
  IterationLimitExceeded,
  NegativeDof,
  // dynamics
  ConstraintViolatedAtStart,
  NumericBlowup,
  // parser
  SyntaxError,
  UndeclaredIdentifier,
  NonIntegerExponent,
  SqrtOfNonPolynomial,
  SectionMissing,
  CountMismatch,
  DuplicateSymbol,
  // generic
  InvalidArgument,
  Io,
};

std::string_view error_code_name(ErrorCode code);

/// Location of a parse error. `offset` is relative to the expression text,
/// `line`/`column` (1-based) to the enclosing file when known.
struct SourcePosition {
  std::size_t offset = 0;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourcePosition> position = std::nullopt)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePosition>& position() const noexcept { return position_; }
  /// Tokens the parser would have accepted (SyntaxError only).
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  Error& with_expected(std::vector<std::string> tokens) {
    expected_ = std::move(tokens);
    return *this;
  }
  /// Rebases the position onto a file line/column.
  Error& at_line(std::size_t line, std::size_t column) {
    SourcePosition p = position_.value_or(SourcePosition{});
    p.line = line;
    p.column = column;
    position_ = p;
    return *this;
  }

  /// "SyntaxError at 3:7: ..." style rendering.
  std::string describe() const;

 private:
  ErrorCode code_;
  std::optional<SourcePosition> position_;
  std::vector<std::string> expected_;
};

}  // namespace fjkit
