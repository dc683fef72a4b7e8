#include "core/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "parser/printer.hpp"

namespace fjkit {

// ------------------------------------------------------------------ system

std::vector<std::string> SymplecticSystem::variable_names() const {
  std::vector<std::string> out;
  out.reserve(variables.size());
  for (SymbolId v : variables) out.push_back(ctx->name(v));
  return out;
}

std::optional<std::size_t> SymplecticSystem::index_of(SymbolId id) const {
  auto it = std::find(variables.begin(), variables.end(), id);
  if (it == variables.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables.begin());
}

bool SymplecticSystem::is_multiplier(std::size_t i) const {
  return ctx->kind(variables[i]) == SymbolKind::multiplier;
}

std::vector<std::size_t> SymplecticSystem::physical_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (!is_multiplier(i)) out.push_back(i);
  }
  return out;
}

std::string_view status_name(AnalysisStatus s) {
  switch (s) {
    case AnalysisStatus::regular: return "regular";
    case AnalysisStatus::constrained_invertible: return "constrained_invertible";
    case AnalysisStatus::gauge: return "gauge";
  }
  return "unknown";
}

namespace {

std::vector<SymbolId> physical_symbols(const SymplecticSystem& sys) {
  std::vector<SymbolId> out;
  for (std::size_t i : sys.physical_indices()) out.push_back(sys.variables[i]);
  return out;
}

std::string print_vector(const std::vector<Expr>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += print_expression(v[i]);
  }
  return out + ")";
}

}  // namespace

// ------------------------------------------------------------- matrices

SymMatrix build_symplectic_matrix(const SymplecticSystem& sys) {
  const std::size_t n = sys.variables.size();
  // d[i][j] = d a_j / d xi_i
  std::vector<std::vector<Expr>> d(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = differentiate(sys.one_form[j], sys.variables[i]);
  }
  SymMatrix f(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) f(i, j) = i == j ? Expr() : d[i][j] - d[j][i];
  }
  f.row_labels = sys.variable_names();
  f.col_labels = f.row_labels;
  return f;
}

std::vector<Expr> potential_gradient(const SymplecticSystem& sys) {
  std::vector<Expr> g;
  g.reserve(sys.variables.size());
  for (SymbolId v : sys.variables) g.push_back(differentiate(sys.potential, v));
  return g;
}

SymMatrix stack_consistency_matrix(const SymMatrix& f, const std::vector<Constraint>& constraints,
                                   const SymplecticSystem& sys) {
  const std::size_t n = f.rows();
  SymMatrix out(n + constraints.size(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = f(i, j);
  }
  out.row_labels = f.row_labels;
  out.col_labels = f.col_labels;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) out(n + k, j) = differentiate(constraints[k].expr, sys.variables[j]);
    out.row_labels.push_back("d" + constraints[k].label);
  }
  return out;
}

// ---------------------------------------------------------- constraint set

ConstraintSet::ConstraintSet(std::vector<SolveHint> user_hints)
    : user_hints_(std::move(user_hints)), hint_used_(user_hints_.size(), false) {}

Expr ConstraintSet::restrict(const Expr& e) const { return restrict_from(e, 0); }

Expr ConstraintSet::restrict_from(const Expr& e, std::size_t first_hint) const {
  Expr out = e;
  for (std::size_t k = first_hint; k < hint_order_.size(); ++k) {
    const auto [cond, idx] = hint_order_[k];
    const Constraint& c = cond ? conditions_[idx] : constraints_[idx];
    out = substitute(out, *c.solve_hint);
  }
  return out;
}

std::vector<std::pair<std::string, Substitution>> ConstraintSet::hints() const {
  std::vector<std::pair<std::string, Substitution>> out;
  for (const auto& [cond, idx] : hint_order_) {
    const Constraint& c = cond ? conditions_[idx] : constraints_[idx];
    out.emplace_back(c.label, *c.solve_hint);
  }
  return out;
}

Expr ConstraintSet::reduce_candidate(const Expr& candidate) const {
  Expr r = restrict(candidate);
  if (r.is_zero()) return r;
  bool unhinted = false;
  for (const auto* list : {&constraints_, &conditions_}) {
    for (const auto& c : *list) {
      if (c.solve_hint || c.reduced.is_zero()) continue;
      unhinted = true;
      if (divide_exact(r.numerator(), c.reduced.numerator())) return Expr().with_context(r.context());
    }
  }
  if (unhinted) {
    throw Error(ErrorCode::NonlinearUnreducibleConstraint,
                "candidate " + print_expression(r) +
                    " cannot be reduced against constraints that have no solve hint; supply [solve_hints]");
  }
  return r;
}

std::optional<Substitution> ConstraintSet::user_hint_for(const Constraint& c) {
  for (std::size_t k = 0; k < user_hints_.size(); ++k) {
    if (hint_used_[k]) continue;
    const SolveHint& h = user_hints_[k];
    const bool labeled = h.label.has_value();
    if (labeled && *h.label != c.label) continue;
    Substitution restricted;
    bool ok = true;
    try {
      for (const auto& [s, value] : h.bindings) restricted.emplace_back(s, restrict(value));
      ok = substitute(c.reduced, restricted).is_zero();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidArgument) throw;
      ok = false;
    }
    if (ok) {
      hint_used_[k] = true;
      return restricted;
    }
    if (labeled) {
      throw Error(ErrorCode::InvalidSolveHint,
                  "solve hint '" + h.text + "' does not make " + c.label + " = " + print_expression(c.reduced) +
                      " vanish");
    }
  }
  return std::nullopt;
}

std::optional<Substitution> ConstraintSet::auto_hint(const Expr& reduced, const std::vector<SymbolId>& physical) {
  const auto& ctx = reduced.context();
  const Polynomial& num = reduced.numerator();
  std::vector<SymbolId> order = physical;
  std::sort(order.rbegin(), order.rend());
  for (SymbolId v : order) {
    if (num.degree_in(v) != 1) continue;
    const auto coeffs = num.coefficients_in(v);
    bool parametric = true;
    for (SymbolId s : coeffs[1].variables()) parametric = parametric && ctx->kind(s) == SymbolKind::parameter;
    if (!parametric) continue;
    const Expr rest = Expr::from_polynomials(ctx, coeffs[0]);
    const auto base = base_symbols(rest);
    if (std::binary_search(base.begin(), base.end(), v)) continue;
    return Substitution{{v, -rest / Expr::from_polynomials(ctx, coeffs[1])}};
  }
  return std::nullopt;
}

Constraint& ConstraintSet::add(Constraint c, const std::vector<SymbolId>& physical) {
  c.reduced = restrict(c.expr);
  if (!c.reduced.is_zero()) {
    if (auto h = user_hint_for(c)) {
      c.solve_hint = std::move(h);
      c.hint_origin = HintOrigin::user;
    } else if (auto a = auto_hint(c.reduced, physical)) {
      c.solve_hint = std::move(a);
      c.hint_origin = HintOrigin::automatic;
    }
  }
  auto& list = c.gauge_condition ? conditions_ : constraints_;
  list.push_back(std::move(c));
  if (list.back().solve_hint) hint_order_.emplace_back(list.back().gauge_condition, list.size() - 1);
  return list.back();
}

void ConstraintSet::set_multiplier(bool condition, std::size_t index, SymbolId m) {
  (condition ? conditions_ : constraints_)[index].multiplier = m;
}

std::vector<std::string> ConstraintSet::unused_hints() const {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < user_hints_.size(); ++k) {
    if (!hint_used_[k]) out.push_back(user_hints_[k].text);
  }
  return out;
}

// ------------------------------------------------------------ generation

std::vector<Candidate> constraints_from_modes(const std::vector<ZeroMode>& modes, const std::vector<Expr>& grad,
                                              ConstraintSet& set, const SymplecticSystem& sys,
                                              std::vector<std::size_t>& new_indices) {
  const auto physical = physical_symbols(sys);
  int at_level = 0;
  for (const auto& c : set.constraints()) at_level += c.iteration_found == sys.iteration ? 1 : 0;

  std::vector<Candidate> out;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const auto& v = modes[m].components;
    Candidate cand;
    cand.mode_index = m;
    cand.raw = Expr().with_context(sys.ctx);
    for (std::size_t i = 0; i < grad.size() && i < v.size(); ++i) {
      if (v[i].is_zero() || grad[i].is_zero()) continue;
      cand.raw += v[i] * grad[i];
    }
    cand.reduced = cand.raw.is_zero() ? cand.raw : set.reduce_candidate(cand.raw);
    if (!cand.reduced.is_zero()) {
      Constraint c;
      c.label = "Omega^(" + std::to_string(sys.iteration) + ")_" + std::to_string(++at_level);
      c.expr = Expr::from_polynomials(sys.ctx, cand.raw.numerator().primitive());
      c.iteration_found = sys.iteration;
      c.source_mode = modes[m];
      set.add(std::move(c), physical);
      new_indices.push_back(set.constraints().size() - 1);
      cand.constraint = set.constraints().back().label;
    }
    out.push_back(std::move(cand));
  }
  return out;
}

SymplecticSystem extend_system(const SymplecticSystem& sys, const std::vector<std::size_t>& new_constraints,
                               ConstraintSet& set, std::size_t first_new_hint) {
  if (new_constraints.empty()) throw Error(ErrorCode::InvalidArgument, "extend_system needs at least one constraint");
  SymplecticSystem out = sys;
  std::size_t multipliers = 0;
  for (SymbolId v : sys.variables) multipliers += sys.ctx->kind(v) == SymbolKind::multiplier ? 1 : 0;
  for (std::size_t idx : new_constraints) {
    const SymbolId m = out.ctx->add_fresh_symbol("lambda" + std::to_string(++multipliers), SymbolKind::multiplier);
    out.variables.push_back(m);
    out.one_form.push_back(set.constraints()[idx].expr);
    set.set_multiplier(false, idx, m);
  }
  out.potential = set.restrict_from(sys.potential, first_new_hint);

  const auto vb = base_symbols(out.potential);
  for (std::size_t idx : new_constraints) {
    const Constraint& c = set.constraints()[idx];
    if (c.solve_hint || c.reduced.is_zero()) continue;
    for (SymbolId s : base_symbols(c.reduced)) {
      if (out.ctx->kind(s) == SymbolKind::parameter) continue;
      if (std::binary_search(vb.begin(), vb.end(), s)) {
        throw Error(ErrorCode::MissingSolveHint,
                    c.label + " = " + print_expression(c.reduced) + " involves '" + out.ctx->name(s) +
                        "', which the potential depends on; add a [solve_hints] entry for it");
      }
    }
  }
  ++out.iteration;
  return out;
}

std::vector<GaugeGenerator> detect_gauge(const SymMatrix& f_iterated, const SymplecticSystem& sys) {
  std::vector<GaugeGenerator> gens;
  const auto basis = left_null_space(f_iterated);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    GaugeGenerator g;
    g.mode.components = basis[k];
    g.mode.origin_iteration = sys.iteration;
    g.parameter = sys.ctx->add_fresh_symbol("epsilon" + std::to_string(k + 1), SymbolKind::gauge_parameter);
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<std::pair<SymbolId, Expr>> gauge_transformations(const std::vector<GaugeGenerator>& gens,
                                                             const SymplecticSystem& sys) {
  std::vector<std::pair<SymbolId, Expr>> out;
  for (std::size_t i : sys.physical_indices()) {
    Expr delta = Expr().with_context(sys.ctx);
    for (const auto& g : gens) {
      const Expr& c = g.mode.components[i];
      if (!c.is_zero()) delta += c * Expr::symbol(sys.ctx, g.parameter);
    }
    out.emplace_back(sys.variables[i], delta);
  }
  return out;
}

SymplecticSystem fix_gauge(const SymplecticSystem& sys, const std::vector<GaugeConditionInput>& conditions,
                           std::size_t generator_count, ConstraintSet& set) {
  if (conditions.size() != generator_count) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(conditions.size()) + " gauge conditions given for " +
                                                std::to_string(generator_count) + " gauge generators");
  }
  const auto physical = physical_symbols(sys);
  const std::size_t first_hint = set.hint_count();
  SymplecticSystem out = sys;
  for (std::size_t k = 0; k < conditions.size(); ++k) {
    Constraint c;
    c.label = conditions[k].label;
    c.expr = conditions[k].expr;
    c.iteration_found = sys.iteration;
    c.gauge_condition = true;
    set.add(std::move(c), physical);
    const SymbolId eta = out.ctx->add_fresh_symbol("eta" + std::to_string(k + 1), SymbolKind::multiplier);
    out.variables.push_back(eta);
    out.one_form.push_back(conditions[k].expr);
    set.set_multiplier(true, set.conditions().size() - 1, eta);
  }
  out.potential = set.restrict_from(sys.potential, first_hint);
  ++out.iteration;

  const auto residual = left_null_space(build_symplectic_matrix(out));
  if (!residual.empty()) {
    std::string msg = "symplectic matrix is still singular after gauge fixing; residual zero modes:";
    for (const auto& v : residual) msg += " " + print_vector(v);
    throw Error(ErrorCode::GaugeNotFixing, msg);
  }
  return out;
}

std::vector<BracketEntry> extract_brackets(const SymMatrix& f_inv, const SymplecticSystem& sys,
                                           const ConstraintSet& set, bool verbose) {
  std::vector<std::size_t> idx;
  if (verbose) {
    for (std::size_t i = 0; i < sys.variables.size(); ++i) idx.push_back(i);
  } else {
    idx = sys.physical_indices();
  }
  std::vector<BracketEntry> out;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      BracketEntry e;
      e.i = idx[a];
      e.j = idx[b];
      e.value = f_inv(e.i, e.j);
      e.on_surface = set.restrict(e.value);
      out.push_back(std::move(e));
    }
  }
  return out;
}

int count_dof(int n_vars, int n_constraints, int n_gauge_conditions) {
  if (n_vars < 0 || n_constraints < 0 || n_gauge_conditions < 0) {
    throw Error(ErrorCode::InvalidArgument, "degree-of-freedom counts must be nonnegative");
  }
  const int dof = n_vars - n_constraints - n_gauge_conditions;
  if (dof < 0) {
    throw Error(ErrorCode::NegativeDof, std::to_string(n_vars) + " variables cannot carry " +
                                            std::to_string(n_constraints) + " constraints and " +
                                            std::to_string(n_gauge_conditions) + " gauge conditions");
  }
  return dof;
}

std::optional<Expr> AnalysisReport::bracket(SymbolId a, SymbolId b) const {
  if (!inverse) return std::nullopt;
  auto i = final_system.index_of(a);
  auto j = final_system.index_of(b);
  if (!i || !j) return std::nullopt;
  return (*inverse)(*i, *j);
}

// ---------------------------------------------------------------- driver

namespace {

Problem clone_problem(const Problem& p) {
  Problem out = p;
  auto ctx = std::make_shared<Context>(*p.system.ctx);
  auto rb = [&](Expr& e) { e = e.with_context(ctx); };
  out.system.ctx = ctx;
  for (auto& a : out.system.one_form) rb(a);
  rb(out.system.potential);
  for (auto& h : out.hints) {
    for (auto& b : h.bindings) rb(b.second);
  }
  for (auto& g : out.gauge_conditions) rb(g.expr);
  return out;
}

std::string trace_summary(const std::vector<IterationRecord>& records, const ConstraintSet& set) {
  std::ostringstream os;
  for (const auto& r : records) {
    os << "\n  pass " << r.pass << ": level " << r.level << ' '
       << (r.kind == IterationRecord::Kind::symplectic ? "symplectic" : "stacked") << ' ' << r.matrix.rows() << 'x'
       << r.matrix.cols() << ", " << r.modes.size() << " zero modes";
    for (const auto& c : r.new_constraints) os << ", new " << c;
  }
  os << "\n  constraints:";
  for (const auto& c : set.constraints()) os << ' ' << c.label;
  return os.str();
}

}  // namespace

AnalysisReport run_analysis(const Problem& input) {
  const Problem problem = clone_problem(input);
  AnalysisReport report;
  report.options = problem.options;
  report.parameters = problem.parameters;
  report.initial_system = problem.system;
  report.constraints = ConstraintSet(problem.hints);
  ConstraintSet& set = report.constraints;

  SymplecticSystem sys = problem.system;
  int passes = 0;
  bool gauge_fixed = false;
  auto next_pass = [&]() {
    if (++passes > problem.options.max_iterations) {
      throw Error(ErrorCode::IterationLimitExceeded,
                  "iteration cap " + std::to_string(problem.options.max_iterations) + " reached; trace:" +
                      trace_summary(report.records, set));
    }
    return passes;
  };
  auto to_modes = [](std::vector<std::vector<Expr>> basis, int level) {
    std::vector<ZeroMode> out;
    for (auto& b : basis) out.push_back({std::move(b), level});
    return out;
  };

  while (true) {
    IterationRecord rec;
    rec.pass = next_pass();
    rec.level = sys.iteration;
    rec.matrix = build_symplectic_matrix(sys);
    NullSpace ns = left_null_space_detail(rec.matrix);
    rec.pivots = ns.pivots;
    rec.modes = to_modes(std::move(ns.basis), sys.iteration);
    const SymMatrix f = rec.matrix;

    if (rec.modes.empty()) {
      report.records.push_back(std::move(rec));
      report.final_matrix = f;
      report.inverse = invert(f);
      report.status = set.constraints().empty() && !gauge_fixed ? AnalysisStatus::regular
                                                                 : AnalysisStatus::constrained_invertible;
      break;
    }
    if (gauge_fixed) {
      throw Error(ErrorCode::GaugeNotFixing, "symplectic matrix is singular after gauge fixing");
    }

    const auto grad = potential_gradient(sys);
    const std::size_t first_hint = set.hint_count();
    std::vector<std::size_t> level_new;
    std::vector<std::size_t> batch;
    rec.candidates = constraints_from_modes(rec.modes, grad, set, sys, batch);
    for (std::size_t i : batch) rec.new_constraints.push_back(set.constraints()[i].label);
    report.records.push_back(std::move(rec));
    level_new = batch;

    while (!batch.empty()) {
      IterationRecord srec;
      srec.pass = next_pass();
      srec.level = sys.iteration;
      srec.kind = IterationRecord::Kind::stacked;
      std::vector<Constraint> level_constraints;
      for (std::size_t i : level_new) level_constraints.push_back(set.constraints()[i]);
      srec.matrix = stack_consistency_matrix(f, level_constraints, sys);
      NullSpace sns = left_null_space_detail(srec.matrix);
      srec.pivots = sns.pivots;
      srec.modes = to_modes(std::move(sns.basis), sys.iteration);
      batch.clear();
      srec.candidates = constraints_from_modes(srec.modes, grad, set, sys, batch);
      for (std::size_t i : batch) srec.new_constraints.push_back(set.constraints()[i].label);
      level_new.insert(level_new.end(), batch.begin(), batch.end());
      report.records.push_back(std::move(srec));
    }

    if (!level_new.empty()) {
      sys = extend_system(sys, level_new, set, first_hint);
      continue;
    }

    report.generators = detect_gauge(f, sys);
    report.transformations = gauge_transformations(report.generators, sys);
    if (problem.gauge_conditions.empty()) {
      report.status = AnalysisStatus::gauge;
      report.final_matrix = f;
      break;
    }
    sys = fix_gauge(sys, problem.gauge_conditions, report.generators.size(), set);
    gauge_fixed = true;
  }

  report.final_system = sys;
  if (report.inverse) {
    report.brackets = extract_brackets(*report.inverse, sys, set, problem.options.verbose_multipliers);
  }
  const int n_vars = static_cast<int>(problem.system.physical_indices().size());
  const int n_constraints = static_cast<int>(set.constraints().size());
  const int n_fixing = report.status == AnalysisStatus::gauge ? static_cast<int>(report.generators.size())
                                                               : static_cast<int>(set.conditions().size());
  report.dof = count_dof(n_vars, n_constraints, n_fixing);
  for (const auto& h : set.unused_hints()) report.warnings.push_back("solve hint '" + h + "' was never used");
  return report;
}

}  // namespace fjkit
