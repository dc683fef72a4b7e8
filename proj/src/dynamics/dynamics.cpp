#include "dynamics/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "common/error.hpp"

namespace fjkit {

EquationsOfMotion derive_eom(const SymMatrix& f_inv, const SymplecticSystem& sys, const ConstraintSet& set) {
  const auto phys = sys.physical_indices();
  std::vector<Expr> grad;
  grad.reserve(phys.size());
  for (std::size_t j : phys) grad.push_back(differentiate(sys.potential, sys.variables[j]));

  EquationsOfMotion eom;
  for (std::size_t i : phys) {
    Expr rhs = Expr().with_context(sys.ctx);
    for (std::size_t k = 0; k < phys.size(); ++k) {
      const Expr& b = f_inv(i, phys[k]);
      if (b.is_zero() || grad[k].is_zero()) continue;
      rhs += b * grad[k];
    }
    eom.variables.push_back(sys.variables[i]);
    eom.on_surface.push_back(set.restrict(rhs));
    eom.rhs.push_back(std::move(rhs));
  }
  return eom;
}

EquationsOfMotion derive_eom(const AnalysisReport& report) {
  if (!report.inverse) {
    throw Error(ErrorCode::InvalidArgument, "equations of motion need an invertible final symplectic matrix");
  }
  return derive_eom(*report.inverse, report.final_system, report.constraints);
}

namespace {

void check_bound(const std::vector<Expr>& exprs, const Context& ctx, const std::vector<bool>& known) {
  for (const auto& e : exprs) {
    for (SymbolId s : e.symbols()) {
      if (known[s] || ctx.kind(s) == SymbolKind::auxiliary) continue;
      throw Error(ErrorCode::UnboundSymbol, "no value bound for " + std::string(symbol_kind_name(ctx.kind(s))) +
                                                " '" + ctx.name(s) + "'");
    }
  }
}

}  // namespace

Trajectory integrate_rk4(const EquationsOfMotion& eom, const ContextPtr& ctx, const NumericBindings& initial,
                         const NumericBindings& params, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidArgument, "end time must be >= 0");

  const std::size_t n = eom.variables.size();
  std::vector<double> values(ctx->size(), 0.0);
  std::vector<bool> known(ctx->size(), false);
  for (const auto& [s, v] : params) {
    values[s] = v;
    known[s] = true;
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = initial.find(eom.variables[i]);
    if (it == initial.end()) {
      throw Error(ErrorCode::UnboundSymbol, "no initial value for '" + ctx->name(eom.variables[i]) + "'");
    }
    y[i] = it->second;
    known[eom.variables[i]] = true;
  }
  check_bound(eom.on_surface, *ctx, known);

  std::vector<CompiledExpr> rhs;
  rhs.reserve(n);
  for (const auto& e : eom.on_surface) rhs.emplace_back(e);
  const AuxiliaryFiller filler(*ctx);

  auto eval = [&](const std::vector<double>& state, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) values[eom.variables[i]] = state[i];
    filler.fill(values);
    for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i](values);
  };

  Trajectory traj;
  traj.variables = eom.variables;
  for (SymbolId v : eom.variables) traj.names.push_back(ctx->name(v));
  traj.parameters = params;

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    eval(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    eval(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    eval(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    eval(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(y[i]) || std::abs(y[i]) > kBlowupThreshold) {
        throw Error(ErrorCode::NumericBlowup, "'" + traj.names[i] + "' left the finite range at t = " +
                                                  std::to_string(static_cast<double>(s + 1) * dt));
      }
    }
    traj.times.push_back(static_cast<double>(s + 1) * dt);
    traj.states.push_back(y);
  }
  return traj;
}

std::vector<std::pair<std::string, Expr>> surface_expressions(const AnalysisReport& report) {
  std::vector<std::pair<std::string, Expr>> out;
  for (const auto& c : report.constraints.constraints()) out.emplace_back(c.label, c.expr);
  for (const auto& c : report.constraints.conditions()) out.emplace_back(c.label, c.expr);
  return out;
}

NumericBindings prepare_initial_state(const AnalysisReport& report, NumericBindings initial,
                                      const NumericBindings& params) {
  const auto& ctx = report.context();
  NumericBindings all = params;
  for (const auto& [s, v] : initial) all[s] = v;

  const auto hints = report.constraints.hints();
  for (auto it = hints.rbegin(); it != hints.rend(); ++it) {
    for (const auto& [s, value] : it->second) {
      if (ctx->kind(s) == SymbolKind::auxiliary || all.count(s) != 0) continue;
      all[s] = evaluate_numeric(value, all);
      initial[s] = all[s];
    }
  }
  for (const auto& [label, expr] : surface_expressions(report)) {
    const double v = evaluate_numeric(expr, all);
    if (!(std::abs(v) <= kRelationTolerance)) {
      throw Error(ErrorCode::ConstraintViolatedAtStart,
                  label + " evaluates to " + std::to_string(v) + " at the initial state");
    }
  }
  return initial;
}

std::vector<double> constraint_drift(const Trajectory& traj, const std::vector<Expr>& constraints,
                                     const ContextPtr& ctx) {
  std::vector<double> drift(constraints.size(), 0.0);
  if (constraints.empty()) return drift;
  std::vector<double> values(ctx->size(), 0.0);
  for (const auto& [s, v] : traj.parameters) values[s] = v;
  std::vector<CompiledExpr> compiled;
  for (const auto& c : constraints) compiled.emplace_back(c);
  const AuxiliaryFiller filler(*ctx);
  for (const auto& state : traj.states) {
    for (std::size_t i = 0; i < traj.variables.size(); ++i) values[traj.variables[i]] = state[i];
    filler.fill(values);
    for (std::size_t k = 0; k < compiled.size(); ++k) drift[k] = std::max(drift[k], std::abs(compiled[k](values)));
  }
  return drift;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << 't';
  for (const auto& n : traj.names) os << ',' << n;
  os << '\n';
  char buf[32];
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
    os << buf;
    for (double v : traj.states[k]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace fjkit
