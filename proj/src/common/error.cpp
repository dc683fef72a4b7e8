#include "common/error.hpp"

namespace fjkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorCode::DivisionByZeroExpression: return "DivisionByZeroExpression";
    case ErrorCode::UnboundSymbol: return "UnboundSymbol";
    case ErrorCode::RelationViolated: return "RelationViolated";
    case ErrorCode::NumericDivisionByZero: return "NumericDivisionByZero";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonlinearUnreducibleConstraint: return "NonlinearUnreducibleConstraint";
    case ErrorCode::MissingSolveHint: return "MissingSolveHint";
    case ErrorCode::InvalidSolveHint: return "InvalidSolveHint";
    case ErrorCode::GaugeNotFixing: return "GaugeNotFixing";
    case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
    case ErrorCode::NegativeDof: return "NegativeDof";
    case ErrorCode::ConstraintViolatedAtStart: return "ConstraintViolatedAtStart";
    case ErrorCode::NumericBlowup: return "NumericBlowup";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndeclaredIdentifier: return "UndeclaredIdentifier";
    case ErrorCode::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorCode::SqrtOfNonPolynomial: return "SqrtOfNonPolynomial";
    case ErrorCode::SectionMissing: return "SectionMissing";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string Error::describe() const {
  std::string out(error_code_name(code_));
  if (position_ && position_->line > 0) {
    out += " at " + std::to_string(position_->line) + ":" + std::to_string(position_->column);
  } else if (position_) {
    out += " at offset " + std::to_string(position_->offset);
  }
  out += ": ";
  out += what();
  return out;
}

}  // namespace fjkit
