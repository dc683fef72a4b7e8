#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/system.hpp"

namespace fjkit {

enum class AnalysisStatus { regular, constrained_invertible, gauge };
std::string_view status_name(AnalysisStatus s);

/// f_ij = d a_j / d xi_i - d a_i / d xi_j.
SymMatrix build_symplectic_matrix(const SymplecticSystem& sys);

/// dV / d xi_i in variable order.
std::vector<Expr> potential_gradient(const SymplecticSystem& sys);

/// f with one gradient row per constraint appended.
SymMatrix stack_consistency_matrix(const SymMatrix& f, const std::vector<Constraint>& constraints,
                                   const SymplecticSystem& sys);

/// Constraint list plus the surface-restriction machinery built from solve
/// hints.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<SolveHint> user_hints);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Constraint>& conditions() const { return conditions_; }

  /// Applies every solve hint in creation order.
  Expr restrict(const Expr& e) const;
  /// Applies solve hints created at or after `first_hint`.
  Expr restrict_from(const Expr& e, std::size_t first_hint) const;
  std::size_t hint_count() const { return hint_order_.size(); }
  /// Substitutions in creation order, each paired with its constraint label.
  std::vector<std::pair<std::string, Substitution>> hints() const;

  /// Reduces a candidate modulo the constraint set. Returns zero when the
  /// candidate is an identity on the surface. Throws
  /// NonlinearUnreducibleConstraint.
  Expr reduce_candidate(const Expr& candidate) const;

  /// Registers a constraint (or gauge condition) and assigns its solve
  /// hint. `physical` lists the variables eligible for auto-solving.
  Constraint& add(Constraint c, const std::vector<SymbolId>& physical);

  void set_multiplier(bool condition, std::size_t index, SymbolId m);
  /// Labeled user hints that never matched a constraint.
  std::vector<std::string> unused_hints() const;

 private:
  std::optional<Substitution> user_hint_for(const Constraint& c);
  static std::optional<Substitution> auto_hint(const Expr& reduced, const std::vector<SymbolId>& physical);

  std::vector<Constraint> constraints_;
  std::vector<Constraint> conditions_;
  std::vector<SolveHint> user_hints_;
  std::vector<bool> hint_used_;
  // (is_condition, index) of every constraint with a hint, in creation order
  std::vector<std::pair<bool, std::size_t>> hint_order_;
};

struct Candidate {
  std::size_t mode_index = 0;
  Expr raw;
  Expr reduced;
  std::optional<std::string> constraint;
};

/// Contracts each mode with the padded gradient Z and keeps the candidates
/// that survive reduction; new constraints are appended to `set` with labels
/// Omega^(level)_k.
std::vector<Candidate> constraints_from_modes(const std::vector<ZeroMode>& modes, const std::vector<Expr>& grad,
                                              ConstraintSet& set, const SymplecticSystem& sys,
                                              std::vector<std::size_t>& new_indices);

/// Appends one multiplier per constraint (a_lambda = Omega) and restricts V
/// by the new hints. Throws MissingSolveHint.
SymplecticSystem extend_system(const SymplecticSystem& sys, const std::vector<std::size_t>& new_constraints,
                               ConstraintSet& set, std::size_t first_new_hint);

/// One generator per zero mode of a singular iterated matrix.
std::vector<GaugeGenerator> detect_gauge(const SymMatrix& f_iterated, const SymplecticSystem& sys);

/// delta xi_i = sum_alpha v_alpha[i] epsilon^alpha for non-multiplier xi_i.
std::vector<std::pair<SymbolId, Expr>> gauge_transformations(const std::vector<GaugeGenerator>& gens,
                                                             const SymplecticSystem& sys);

/// Appends one eta multiplier per condition with a_eta = Phi and restricts V.
/// Throws InvalidArgument when the count differs from `generator_count` and
/// GaugeNotFixing when the resulting matrix stays singular.
SymplecticSystem fix_gauge(const SymplecticSystem& sys, const std::vector<GaugeConditionInput>& conditions,
                           std::size_t generator_count, ConstraintSet& set);

struct BracketEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  Expr value;
  Expr on_surface;
};

/// {xi_i, xi_j} = (f^-1)_ij for i < j; multiplier rows only when verbose.
std::vector<BracketEntry> extract_brackets(const SymMatrix& f_inv, const SymplecticSystem& sys,
                                           const ConstraintSet& set, bool verbose);

/// n_vars - n_constraints - n_gauge_conditions. Throws NegativeDof.
int count_dof(int n_vars, int n_constraints, int n_gauge_conditions);

struct IterationRecord {
  enum class Kind { symplectic, stacked };
  int pass = 0;
  int level = 0;
  Kind kind = Kind::symplectic;
  SymMatrix matrix;
  std::vector<Pivot> pivots;
  std::vector<ZeroMode> modes;
  std::vector<Candidate> candidates;
  std::vector<std::string> new_constraints;
};

struct AnalysisReport {
  AnalysisStatus status = AnalysisStatus::regular;
  AnalysisOptions options;
  std::vector<SymbolId> parameters;
  SymplecticSystem initial_system;
  SymplecticSystem final_system;
  std::vector<IterationRecord> records;
  ConstraintSet constraints;
  std::vector<GaugeGenerator> generators;
  std::vector<std::pair<SymbolId, Expr>> transformations;
  SymMatrix final_matrix;
  std::optional<SymMatrix> inverse;
  std::vector<BracketEntry> brackets;
  int dof = 0;
  std::vector<std::string> warnings;

  const ContextPtr& context() const { return final_system.ctx; }
  /// Inverse-matrix entry for two final-system variables.
  std::optional<Expr> bracket(SymbolId a, SymbolId b) const;
};

/// The full iteration: build, find modes, generate constraints, extend,
/// detect and fix gauge, invert. Works on a private copy of the context so
/// repeated runs on one problem are identical.
AnalysisReport run_analysis(const Problem& problem);

}  // namespace fjkit
