#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expr/expr.hpp"
#include "linalg/matrix.hpp"

namespace fjkit {

/// Variables, one-form coefficients a_i and potential V at one iteration
/// level. The context is shared and grows as multipliers are appended.
struct SymplecticSystem {
  ContextPtr ctx;
  std::vector<SymbolId> variables;
  std::vector<Expr> one_form;
  Expr potential;
  int iteration = 0;

  std::vector<std::string> variable_names() const;
  /// Position of `id` in `variables`, if present.
  std::optional<std::size_t> index_of(SymbolId id) const;
  bool is_multiplier(std::size_t i) const;
  /// Indices of variables that are not multipliers.
  std::vector<std::size_t> physical_indices() const;
};

struct ZeroMode {
  std::vector<Expr> components;
  int origin_iteration = 0;
};

struct SolveHint {
  std::optional<std::string> label;
  Substitution bindings;
  std::string text;
};

enum class HintOrigin { none, automatic, user };

struct Constraint {
  std::string label;
  /// Candidate v^T Z scaled to integer content 1 with positive leading term.
  Expr expr;
  /// `expr` restricted by the hints of every earlier constraint.
  Expr reduced;
  int iteration_found = 0;
  ZeroMode source_mode;
  std::optional<Substitution> solve_hint;
  HintOrigin hint_origin = HintOrigin::none;
  std::optional<SymbolId> multiplier;
  bool gauge_condition = false;
};

struct GaugeGenerator {
  ZeroMode mode;
  SymbolId parameter = 0;
};

struct AnalysisOptions {
  int max_iterations = 12;
  bool verbose_multipliers = false;
};

struct GaugeConditionInput {
  std::string label;
  Expr expr;
  std::string text;
};

/// Everything read from a system file.
struct Problem {
  SymplecticSystem system;
  std::vector<SymbolId> parameters;
  std::vector<SolveHint> hints;
  std::vector<GaugeConditionInput> gauge_conditions;
  AnalysisOptions options;
};

}  // namespace fjkit
