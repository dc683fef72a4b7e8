#include "report/report.hpp"

#include <sstream>

#include "dynamics/dynamics.hpp"
#include "parser/printer.hpp"

namespace fjkit {

namespace {

using Json = ReportTree;

Json expr_json(const Expr& e) { return Json{{"infix", print_expression(e)}, {"prefix", print_prefix(e)}}; }

Json vector_json(const std::vector<Expr>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(print_expression(e));
  return out;
}

Json matrix_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(print_expression(m(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"row_labels", m.row_labels},
              {"col_labels", m.col_labels},
              {"entries", std::move(rows)}};
}

Json substitution_json(const Substitution& s, const Context& ctx) {
  Json out = Json::object();
  for (const auto& [id, value] : s) out[ctx.name(id)] = print_expression(value);
  return out;
}

std::string_view origin_name(HintOrigin o) {
  switch (o) {
    case HintOrigin::none: return "none";
    case HintOrigin::automatic: return "automatic";
    case HintOrigin::user: return "user";
  }
  return "none";
}

Json constraint_json(const Constraint& c, const Context& ctx) {
  Json j;
  j["label"] = c.label;
  j["expression"] = expr_json(c.expr);
  j["on_surface_of_earlier"] = print_expression(c.reduced);
  j["iteration"] = c.iteration_found;
  if (!c.gauge_condition) j["source_mode"] = vector_json(c.source_mode.components);
  j["solve_hint"] = c.solve_hint ? Json{{"origin", origin_name(c.hint_origin)},
                                        {"bindings", substitution_json(*c.solve_hint, ctx)}}
                                 : Json(nullptr);
  j["multiplier"] = c.multiplier ? Json(ctx.name(*c.multiplier)) : Json(nullptr);
  return j;
}

Json system_json(const SymplecticSystem& sys) {
  Json one_form = Json::object();
  for (std::size_t i = 0; i < sys.variables.size(); ++i) {
    one_form[sys.ctx->name(sys.variables[i])] = print_expression(sys.one_form[i]);
  }
  return Json{{"iteration", sys.iteration},
              {"variables", sys.variable_names()},
              {"one_form", std::move(one_form)},
              {"potential", expr_json(sys.potential)}};
}

}  // namespace

ReportTree build_report_tree(const AnalysisReport& r) {
  const Context& ctx = *r.context();
  Json t;
  t["format"] = "fjkit-report/1";
  t["status"] = status_name(r.status);
  t["degrees_of_freedom"] = r.dof;

  Json vars = Json::array();
  for (SymbolId v : r.initial_system.variables) {
    vars.push_back(Json{{"name", ctx.name(v)}, {"kind", symbol_kind_name(ctx.kind(v))}});
  }
  t["variables"] = std::move(vars);
  Json params = Json::array();
  for (SymbolId p : r.parameters) params.push_back(ctx.name(p));
  t["parameters"] = std::move(params);

  Json rels = Json::array();
  for (const auto& rel : ctx.relations()) {
    Json j;
    j["symbol"] = ctx.name(rel.defined);
    if (rel.kind == Relation::Kind::trig_pair) {
      j["kind"] = "trig_pair";
      j["partner"] = ctx.name(rel.cosine);
      j["angle"] = ctx.name(rel.angle);
    } else {
      j["kind"] = "quadratic";
      j["sign"] = rel.sign;
    }
    j["identity"] = print_polynomial(rel.identity, &ctx);
    rels.push_back(std::move(j));
  }
  t["relations"] = std::move(rels);
  t["initial_system"] = system_json(r.initial_system);

  Json iters = Json::array();
  for (const auto& rec : r.records) {
    Json j;
    j["pass"] = rec.pass;
    j["level"] = rec.level;
    j["kind"] = rec.kind == IterationRecord::Kind::symplectic ? "symplectic" : "stacked";
    j["matrix"] = matrix_json(rec.matrix);
    j["rank"] = rec.pivots.size();
    Json piv = Json::array();
    for (const auto& p : rec.pivots) {
      piv.push_back(Json{{"row", p.row}, {"col", p.col}, {"value", print_expression(p.value)}});
    }
    j["pivots"] = std::move(piv);
    Json modes = Json::array();
    for (const auto& m : rec.modes) modes.push_back(vector_json(m.components));
    j["zero_modes"] = std::move(modes);
    Json cands = Json::array();
    for (const auto& c : rec.candidates) {
      cands.push_back(Json{{"mode", c.mode_index},
                           {"value", print_expression(c.raw)},
                           {"reduced", print_expression(c.reduced)},
                           {"constraint", c.constraint ? Json(*c.constraint) : Json(nullptr)}});
    }
    j["candidates"] = std::move(cands);
    j["new_constraints"] = rec.new_constraints;
    iters.push_back(std::move(j));
  }
  t["iterations"] = std::move(iters);

  Json cons = Json::array();
  for (const auto& c : r.constraints.constraints()) cons.push_back(constraint_json(c, ctx));
  t["constraints"] = std::move(cons);

  Json gens = Json::array();
  for (const auto& g : r.generators) {
    gens.push_back(Json{{"parameter", ctx.name(g.parameter)}, {"mode", vector_json(g.mode.components)}});
  }
  t["gauge_generators"] = std::move(gens);
  Json trans = Json::object();
  for (const auto& [v, d] : r.transformations) trans[ctx.name(v)] = print_expression(d);
  t["gauge_transformations"] = std::move(trans);
  Json conds = Json::array();
  for (const auto& c : r.constraints.conditions()) conds.push_back(constraint_json(c, ctx));
  t["gauge_conditions"] = std::move(conds);

  t["final_system"] = system_json(r.final_system);
  t["final_matrix"] = matrix_json(r.final_matrix);
  t["inverse"] = r.inverse ? matrix_json(*r.inverse) : Json(nullptr);

  Json br = Json::array();
  for (const auto& b : r.brackets) {
    br.push_back(Json{{"left", ctx.name(r.final_system.variables[b.i])},
                      {"right", ctx.name(r.final_system.variables[b.j])},
                      {"value", expr_json(b.value)},
                      {"on_surface", expr_json(b.on_surface)}});
  }
  t["brackets"] = std::move(br);

  Json eom = Json::array();
  if (r.inverse) {
    const EquationsOfMotion e = derive_eom(r);
    for (std::size_t i = 0; i < e.variables.size(); ++i) {
      eom.push_back(Json{{"variable", ctx.name(e.variables[i])},
                         {"rhs", expr_json(e.rhs[i])},
                         {"on_surface", expr_json(e.on_surface[i])}});
    }
  }
  t["equations_of_motion"] = std::move(eom);
  t["warnings"] = r.warnings;
  return t;
}

std::string render_json(const ReportTree& tree) { return tree.dump(2) + "\n"; }

namespace {

std::string cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return "`" + out + "`";
}

void matrix_md(std::ostringstream& os, const Json& m) {
  os << "| |";
  for (const auto& c : m["col_labels"]) os << ' ' << c.get<std::string>() << " |";
  os << "\n|---|";
  for (std::size_t j = 0; j < m["cols"].get<std::size_t>(); ++j) os << "---|";
  os << '\n';
  const auto& labels = m["row_labels"];
  for (std::size_t i = 0; i < m["rows"].get<std::size_t>(); ++i) {
    os << "| **" << (i < labels.size() ? labels[i].get<std::string>() : std::to_string(i)) << "** |";
    for (const auto& e : m["entries"][i]) os << ' ' << cell(e.get<std::string>()) << " |";
    os << '\n';
  }
  os << '\n';
}

void constraint_md(std::ostringstream& os, const Json& c) {
  os << "- **" << c["label"].get<std::string>() << "** = " << cell(c["expression"]["infix"].get<std::string>());
  if (c["on_surface_of_earlier"].get<std::string>() != c["expression"]["infix"].get<std::string>()) {
    os << " (on earlier constraints: " << cell(c["on_surface_of_earlier"].get<std::string>()) << ")";
  }
  os << '\n';
  if (!c["solve_hint"].is_null()) {
    os << "  - solve hint (" << c["solve_hint"]["origin"].get<std::string>() << "):";
    for (const auto& [k, v] : c["solve_hint"]["bindings"].items()) os << ' ' << cell(k + " -> " + v.get<std::string>());
    os << '\n';
  }
  if (!c["multiplier"].is_null()) os << "  - multiplier: `" << c["multiplier"].get<std::string>() << "`\n";
}

}  // namespace

std::string render_markdown(const ReportTree& t) {
  std::ostringstream os;
  os << "# Faddeev-Jackiw analysis\n\n";
  os << "- status: **" << t["status"].get<std::string>() << "**\n";
  os << "- degrees of freedom: **" << t["degrees_of_freedom"].get<int>() << "**\n";
  os << "- variables:";
  for (const auto& v : t["variables"]) {
    os << " `" << v["name"].get<std::string>() << "` (" << v["kind"].get<std::string>() << ")";
  }
  os << "\n- parameters:";
  for (const auto& p : t["parameters"]) os << " `" << p.get<std::string>() << "`";
  os << "\n";
  if (!t["relations"].empty()) {
    os << "- relations:";
    for (const auto& r : t["relations"]) os << ' ' << cell(r["identity"].get<std::string>() + " = 0");
    os << '\n';
  }
  os << "\n## Initial system\n\n";
  os << "- potential: " << cell(t["initial_system"]["potential"]["infix"].get<std::string>()) << "\n";
  for (const auto& [k, v] : t["initial_system"]["one_form"].items()) {
    os << "- a(" << k << ") = " << cell(v.get<std::string>()) << '\n';
  }

  os << "\n## Iterations\n\n";
  for (const auto& it : t["iterations"]) {
    os << "### Pass " << it["pass"].get<int>() << ": level " << it["level"].get<int>() << ", "
       << it["kind"].get<std::string>() << " matrix (rank " << it["rank"].get<std::size_t>() << ")\n\n";
    matrix_md(os, it["matrix"]);
    if (!it["pivots"].empty()) {
      os << "Pivots:";
      for (const auto& p : it["pivots"]) os << ' ' << cell(p["value"].get<std::string>());
      os << "\n\n";
    }
    if (it["zero_modes"].empty()) {
      os << "No zero modes.\n\n";
      continue;
    }
    os << "Zero modes and candidates:\n\n";
    for (std::size_t k = 0; k < it["zero_modes"].size(); ++k) {
      std::string mode = "(";
      for (std::size_t i = 0; i < it["zero_modes"][k].size(); ++i) {
        mode += (i > 0 ? ", " : "") + it["zero_modes"][k][i].get<std::string>();
      }
      mode += ")";
      const auto& c = it["candidates"][k];
      os << "- " << cell(mode) << " -> " << cell(c["value"].get<std::string>());
      if (!c["constraint"].is_null()) {
        os << ": new constraint **" << c["constraint"].get<std::string>() << "**";
      } else {
        os << ": identity on the constraint surface";
      }
      os << '\n';
    }
    os << '\n';
  }

  os << "## Constraints\n\n";
  if (t["constraints"].empty()) os << "None.\n";
  for (const auto& c : t["constraints"]) constraint_md(os, c);

  if (!t["gauge_generators"].empty()) {
    os << "\n## Gauge symmetry\n\n";
    for (const auto& g : t["gauge_generators"]) {
      std::string mode;
      for (const auto& e : g["mode"]) mode += (mode.empty() ? "" : ", ") + e.get<std::string>();
      os << "- generator for `" << g["parameter"].get<std::string>() << "`: " << cell("(" + mode + ")") << '\n';
    }
    os << "\nTransformations:\n\n";
    for (const auto& [k, v] : t["gauge_transformations"].items()) {
      os << "- delta " << k << " = " << cell(v.get<std::string>()) << '\n';
    }
  }
  if (!t["gauge_conditions"].empty()) {
    os << "\n## Gauge conditions\n\n";
    for (const auto& c : t["gauge_conditions"]) constraint_md(os, c);
  }

  os << "\n## Final system\n\n";
  os << "- potential: " << cell(t["final_system"]["potential"]["infix"].get<std::string>()) << "\n";
  for (const auto& [k, v] : t["final_system"]["one_form"].items()) {
    os << "- a(" << k << ") = " << cell(v.get<std::string>()) << '\n';
  }
  os << '\n';
  matrix_md(os, t["final_matrix"]);

  if (!t["inverse"].is_null()) {
    os << "## Inverse matrix\n\n";
    matrix_md(os, t["inverse"]);
    os << "## Brackets\n\n";
    os << "| bracket | value | on the constraint surface |\n|---|---|---|\n";
    for (const auto& b : t["brackets"]) {
      os << "| {" << b["left"].get<std::string>() << ", " << b["right"].get<std::string>() << "} | "
         << cell(b["value"]["infix"].get<std::string>()) << " | " << cell(b["on_surface"]["infix"].get<std::string>())
         << " |\n";
    }
    os << "\n## Equations of motion\n\n";
    os << "| variable | rate | on the constraint surface |\n|---|---|---|\n";
    for (const auto& e : t["equations_of_motion"]) {
      os << "| d" << e["variable"].get<std::string>() << "/dt | " << cell(e["rhs"]["infix"].get<std::string>())
         << " | " << cell(e["on_surface"]["infix"].get<std::string>()) << " |\n";
    }
  }
  if (!t["warnings"].empty()) {
    os << "\n## Warnings\n\n";
    for (const auto& w : t["warnings"]) os << "- " << w.get<std::string>() << '\n';
  }
  return os.str();
}

std::string render_brackets_text(const ReportTree& t) {
  std::ostringstream os;
  for (const auto& b : t["brackets"]) {
    const std::string v = b["value"]["infix"].get<std::string>();
    const std::string s = b["on_surface"]["infix"].get<std::string>();
    os << '{' << b["left"].get<std::string>() << ", " << b["right"].get<std::string>() << "} = " << v;
    if (s != v) os << "  [on surface: " << s << "]";
    os << '\n';
  }
  return os.str();
}

std::string render_eom_text(const ReportTree& t) {
  std::ostringstream os;
  for (const auto& e : t["equations_of_motion"]) {
    const std::string v = e["rhs"]["infix"].get<std::string>();
    const std::string s = e["on_surface"]["infix"].get<std::string>();
    os << "d/dt " << e["variable"].get<std::string>() << " = " << v;
    if (s != v) os << "  [on surface: " << s << "]";
    os << '\n';
  }
  return os.str();
}

}  // namespace fjkit
