#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "expr/numeric.hpp"

namespace fjkit {

struct EquationsOfMotion {
  std::vector<SymbolId> variables;
  /// xi_i' = sum_j {xi_i, xi_j} dV/dxi_j over non-multiplier j.
  std::vector<Expr> rhs;
  /// `rhs` restricted to the constraint surface through the solve hints.
  std::vector<Expr> on_surface;
};

EquationsOfMotion derive_eom(const SymMatrix& f_inv, const SymplecticSystem& sys, const ConstraintSet& set);
/// Throws InvalidArgument when the analysis ended without an inverse.
EquationsOfMotion derive_eom(const AnalysisReport& report);

struct Trajectory {
  std::vector<SymbolId> variables;
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> states;  // one row per time
  NumericBindings parameters;
};

inline constexpr double kBlowupThreshold = 1e12;

/// Classical fixed-step RK4 on the on-surface right-hand sides. `initial`
/// must bind every EOM variable; `params` every other symbol they use.
/// Throws InvalidArgument, UnboundSymbol, NumericBlowup.
Trajectory integrate_rk4(const EquationsOfMotion& eom, const ContextPtr& ctx, const NumericBindings& initial,
                         const NumericBindings& params, double t_end, double dt);

/// Fills unbound variables from the solve hints (later hints first, so each
/// right-hand side only sees known values) and checks that every constraint
/// and gauge condition vanishes within 1e-9. Throws
/// ConstraintViolatedAtStart, UnboundSymbol.
NumericBindings prepare_initial_state(const AnalysisReport& report, NumericBindings initial,
                                      const NumericBindings& params);

/// max |Omega(state)| over the trajectory, one entry per expression.
std::vector<double> constraint_drift(const Trajectory& traj, const std::vector<Expr>& constraints,
                                     const ContextPtr& ctx);

/// Constraint and gauge-condition expressions of an analysis, in report order.
std::vector<std::pair<std::string, Expr>> surface_expressions(const AnalysisReport& report);

/// Header "t,<names>", one row per step, 17 significant digits.
void write_csv(const Trajectory& traj, std::ostream& os);

}  // namespace fjkit
